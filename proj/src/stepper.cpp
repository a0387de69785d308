#include "etmfd/stepper.hpp"

#include <cmath>
#include <string>

#include "etmfd/error.hpp"

namespace etmfd {

long SimConfig::num_steps() const
{
    const double ratio = final_time / dt();
    return std::max(1L, static_cast<long>(std::ceil(ratio - 1e-9)));
}

void SimConfig::validate() const
{
    medium.validate();
    if (!(nu > 0.0) || !std::isfinite(nu)) throw ValidationError("Courant number must be > 0");
    if (!(final_time > 0.0) || !std::isfinite(final_time)) {
        throw ValidationError("final time must be > 0");
    }
    if (snapshot_stride < 0) throw ValidationError("snapshot stride must be >= 0");
    for (int e : probes) {
        if (e < 0 || e >= mesh.num_edges()) {
            throw ValidationError("probe edge " + std::to_string(e) + " out of range");
        }
        if (mesh.is_boundary_edge(e)) {
            throw ValidationError("probe edge " + std::to_string(e) + " lies on the PEC boundary");
        }
    }
}

namespace {

void j_update(const EdgeField& e_next, const SimState& s, const ExpOperators& ops,
              EdgeField& j_next)
{
    j_next = ops.beta1 * s.j_curr + ops.beta2 * s.e_curr +
             (ops.beta3 / ops.alpha3) * (e_next - ops.alpha1 * s.e_curr - ops.alpha2 * s.j_curr);
}

void check_alpha3(const ExpOperators& ops)
{
    if (ops.alpha3 == 0.0 || !std::isfinite(ops.alpha3)) {
        throw NumericalError("alpha3 = 0: the J update divides by it");
    }
}

}  // namespace

SimState initialize_from_dofs(const SimConfig& config, const ExpOperators& ops, EdgeField e0,
                              EdgeField e1, EdgeField j0)
{
    check_alpha3(ops);
    const auto n = config.mesh.num_edges();
    if (e0.size() != n || e1.size() != n || j0.size() != n) {
        throw ValidationError("initial DoF vectors do not match the mesh");
    }
    config.mesh.apply_pec(e0);
    config.mesh.apply_pec(e1);
    config.mesh.apply_pec(j0);

    SimState s;
    s.e_curr = std::move(e0);
    s.j_curr = std::move(j0);
    s.step = 0;
    EdgeField j1;
    j_update(e1, s, ops, j1);

    s.e_prev = std::move(s.e_curr);
    s.j_prev = std::move(s.j_curr);
    s.e_curr = std::move(e1);
    s.j_curr = std::move(j1);
    s.step = 1;
    return s;
}

SimState initialize(const SimConfig& config, const ExpOperators& ops, const Initializers& init,
                    const QuadratureRule& j_rule)
{
    const auto mid = QuadratureRule::midpoint();
    return initialize_from_dofs(config, ops, interpolate_edge_field(config.mesh, init.e_at_0, mid),
                                interpolate_edge_field(config.mesh, init.e_at_dt, mid),
                                interpolate_edge_field(config.mesh, init.j_at_0, j_rule));
}

void advance(SimState& s, const EdgeField& curl_curl_term, const ExpOperators& ops, double c0,
             Formulation formulation)
{
    check_alpha3(ops);
    const double dt = ops.dt;
    EdgeField e_next = (1.0 + ops.alpha1) * s.e_curr + ops.alpha2 * s.j_curr -
                       ops.alpha1 * s.e_prev - ops.alpha2 * s.j_prev -
                       (c0 * c0 * dt * ops.alpha3) * curl_curl_term;
    EdgeField j_next;
    if (formulation == Formulation::Hybrid) {
        j_update(e_next, s, ops, j_next);
    } else {
        j_next = ops.beta2 * (s.e_curr - s.e_prev) + (1.0 + ops.beta1) * s.j_curr -
                 ops.beta1 * s.j_prev - (c0 * c0 * dt * ops.beta3) * curl_curl_term;
    }
    s.e_prev = std::move(s.e_curr);
    s.j_prev = std::move(s.j_curr);
    s.e_curr = std::move(e_next);
    s.j_curr = std::move(j_next);
    ++s.step;
}

SimState step(const SimState& state, const SparseOperator& w_op, const SparseOperator& a_op,
              const ExpOperators& ops, const SimConfig& config)
{
    if (state.step < 1) throw ValidationError("step needs a state at level n >= 1");
    SimState next = state;
    advance(next, w_op.apply(a_op.apply(state.e_curr)), ops, config.medium.c0,
            config.formulation);
    return next;
}

EtmfdStepper::EtmfdStepper(const SimConfig& config)
    : formulation_(config.formulation),
      c0_(config.medium.c0),
      w_(assemble_W(config.mesh, config.params)),
      a_(assemble_curl_curl(config.mesh)),
      wa_(w_.compose(a_)),
      ops_(exp_operators(config.medium, config.dt()))
{
}

void EtmfdStepper::advance(SimState& state) const
{
    etmfd::advance(state, wa_.apply(state.e_curr), ops_, c0_, formulation_);
}

RunResult run(const SimConfig& config, const Initializers& init, const QuadratureRule& j_rule)
{
    config.validate();
    const EtmfdStepper stepper(config);
    const double dt = stepper.dt();
    const long total = config.num_steps();

    RunResult result;
    result.dt = dt;
    for (int e : config.probes) result.probes.push_back({e, {}, {}});

    SimState state = initialize(config, stepper.exp_ops(), init, j_rule);

    const auto record = [&](long level, const EdgeField& e, const EdgeField& j) {
        result.times.push_back(static_cast<double>(level) * dt);
        for (auto& trace : result.probes) {
            trace.e.push_back(e[trace.edge]);
            trace.j.push_back(j[trace.edge]);
        }
        if (config.snapshot_stride > 0 && level % config.snapshot_stride == 0) {
            result.snapshots.push_back({level, static_cast<double>(level) * dt, e, j});
        }
    };
    record(0, state.e_prev, state.j_prev);
    record(1, state.e_curr, state.j_curr);

    while (state.step < total) {
        stepper.advance(state);
        if (!std::isfinite(state.e_curr.squaredNorm()) ||
            !std::isfinite(state.j_curr.squaredNorm())) {
            throw InstabilityError("fields became non-finite at step " +
                                       std::to_string(state.step) + " (t = " +
                                       std::to_string(state.time(dt)) + ", nu = " +
                                       std::to_string(config.nu) + ")",
                                   state.step, state.time(dt));
        }
        record(state.step, state.e_curr, state.j_curr);
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace etmfd
