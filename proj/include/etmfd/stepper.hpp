#pragma once

#include <vector>

#include "etmfd/mesh.hpp"
#include "etmfd/operators.hpp"
#include "etmfd/plasma.hpp"

namespace etmfd {

/// Which discrete evolution law is advanced.
enum class Formulation {
    /// Second order in E, first order in J. The production path.
    Hybrid,
    /// Both E and J by the two-step recurrence. Only used to check that the
    /// two formulations produce the same E trajectory.
    SecondOrder,
};

struct SimConfig {
    RectMesh mesh;
    Medium medium;
    MfdParams params = yee_params();
    double nu = 0.5;  ///< Courant number c0 dt / dx
    double final_time = 1.0;
    std::vector<int> probes;
    int snapshot_stride = 0;  ///< 0 disables snapshots
    Formulation formulation = Formulation::Hybrid;

    double dt() const { return nu * mesh.dx() / medium.c0; }
    /// Total number of levels past t = 0 (at least 1, the supplied E^1).
    long num_steps() const;
    void validate() const;
};

/// Fields at level n and n-1. Level n is `step`, time step * dt.
struct SimState {
    EdgeField e_curr;
    EdgeField e_prev;
    EdgeField j_curr;
    EdgeField j_prev;
    long step = 0;

    double time(double dt) const { return static_cast<double>(step) * dt; }
};

/// Initial data: E at t = 0 and t = dt, J at t = 0.
struct Initializers {
    VectorFunction e_at_0;
    VectorFunction e_at_dt;
    VectorFunction j_at_0;
};

/// Interpolate E^0, E^1 with the midpoint rule and J^0 with `j_rule`, zero
/// the PEC boundary, and generate J^1 with one J-update so the returned
/// state sits at level n = 1.
SimState initialize(const SimConfig& config, const ExpOperators& ops, const Initializers& init,
                    const QuadratureRule& j_rule = QuadratureRule::gauss(4));

/// State at level 1 from already-interpolated E^0, E^1, J^0.
SimState initialize_from_dofs(const SimConfig& config, const ExpOperators& ops, EdgeField e0,
                              EdgeField e1, EdgeField j0);

/// One step n -> n+1 given the precomputed spatial term W_E A_h E^n.
void advance(SimState& state, const EdgeField& curl_curl_term, const ExpOperators& ops,
             double c0, Formulation formulation);

/// One step with separately supplied W_E and A_h.
SimState step(const SimState& state, const SparseOperator& w_op, const SparseOperator& a_op,
              const ExpOperators& ops, const SimConfig& config);

/// Owns the assembled operators for repeated stepping of one configuration.
class EtmfdStepper {
public:
    explicit EtmfdStepper(const SimConfig& config);

    const SparseOperator& w_operator() const noexcept { return w_; }
    const SparseOperator& a_operator() const noexcept { return a_; }
    const ExpOperators& exp_ops() const noexcept { return ops_; }
    double dt() const noexcept { return ops_.dt; }

    void advance(SimState& state) const;

private:
    Formulation formulation_;
    double c0_;
    SparseOperator w_;
    SparseOperator a_;
    SparseOperator wa_;
    ExpOperators ops_;
};

struct ProbeTrace {
    int edge = -1;
    std::vector<double> e;  ///< E at levels 0..N
    std::vector<double> j;  ///< J at levels 0..N
};

struct Snapshot {
    long step = 0;
    double time = 0.0;
    EdgeField e;
    EdgeField j;
};

struct RunResult {
    SimState final_state;
    double dt = 0.0;
    std::vector<double> times;  ///< levels 0..N
    std::vector<ProbeTrace> probes;
    std::vector<Snapshot> snapshots;
};

/// Advance from the initial data to level num_steps(). Throws
/// InstabilityError as soon as a field stops being finite.
RunResult run(const SimConfig& config, const Initializers& init,
              const QuadratureRule& j_rule = QuadratureRule::gauss(4));

}  // namespace etmfd
