#include "etmfd/analysis.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "parallel.hpp"

namespace etmfd {

namespace {

bool is_pi_multiple(double k)
{
    const double m = k / std::numbers::pi;
    return std::abs(m - std::round(m)) < 1e-9;
}

std::string full(double v)
{
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Model value and its (a, b) gradient.
struct ModelEval {
    double f;
    double da;
    double db;
};

ModelEval eval_model(FitModel model, double a, double b, double t, double amp,
                     const Medium& medium)
{
    const double ea = std::exp(a * t);
    const double cb = std::cos(b * t);
    const double sb = std::sin(b * t);
    if (model == FitModel::EField) {
        const double f = amp * ea * cb;
        return {f, t * f, -amp * t * ea * sb};
    }
    const double k = amp * medium.eps0 * medium.omega_p * medium.omega_p;
    const double s = a + medium.omega_i;
    const double g = s * cb + b * sb;
    const double d = b * b + s * s;
    const double f = k * ea * g / d;
    const double da = k * ea * (t * g / d + cb / d - 2.0 * s * g / (d * d));
    const double db = k * ea * ((-s * t * sb + sb + b * t * cb) / d - 2.0 * b * g / (d * d));
    return {f, da, db};
}

}  // namespace

ExactSolution ExactSolution::from_root(double kx, double ky, const Medium& medium)
{
    if (!is_pi_multiple(kx) || !is_pi_multiple(ky)) {
        throw ValidationError("exact solution needs kx, ky in pi * Z for PEC compatibility");
    }
    const double k = std::hypot(kx, ky);
    if (k == 0.0) throw ValidationError("exact solution needs a nonzero wave vector");
    const Complex omega = oscillatory_root(k, medium);
    return {kx, ky, omega.imag(), omega.real(), medium};
}

Eigen::Vector2d ExactSolution::spatial(double x, double y) const
{
    return {-ky * std::cos(kx * x) * std::sin(ky * y), kx * std::sin(kx * x) * std::cos(ky * y)};
}

double ExactSolution::e_time(double t) const { return std::exp(a * t) * std::cos(b * t); }

double ExactSolution::j_time(double t) const
{
    const double s = a + medium.omega_i;
    return medium.eps0 * medium.omega_p * medium.omega_p * std::exp(a * t) *
           (s * std::cos(b * t) + b * std::sin(b * t)) / (b * b + s * s);
}

Eigen::Vector2d ExactSolution::E(double x, double y, double t) const
{
    return e_time(t) * spatial(x, y);
}

Eigen::Vector2d ExactSolution::J(double x, double y, double t) const
{
    return j_time(t) * spatial(x, y);
}

Initializers ExactSolution::initializers(double dt) const
{
    const ExactSolution sol = *this;
    return {[sol](double x, double y) { return sol.E(x, y, 0.0); },
            [sol, dt](double x, double y) { return sol.E(x, y, dt); },
            [sol](double x, double y) { return sol.J(x, y, 0.0); }};
}

double l2_relative_error(const EdgeField& fh, const EdgeField& interpolant,
                         const SparseOperator& mass)
{
    if (fh.size() != interpolant.size() || fh.size() != mass.rows() || mass.rows() != mass.cols()) {
        throw ValidationError("l2_relative_error: size mismatch");
    }
    const EdgeField d = fh - interpolant;
    const double den = interpolant.dot(mass.apply(interpolant));
    if (!(den > 0.0)) throw ValidationError("l2_relative_error: exact field has zero norm");
    return std::sqrt(std::max(0.0, d.dot(mass.apply(d)))) / std::sqrt(den);
}

std::string to_string(FitModel model)
{
    return model == FitModel::EField ? "E" : "J";
}

double fit_model(FitModel model, double a, double b, double t, double amplitude,
                 const Medium& medium)
{
    return eval_model(model, a, b, t, amplitude, medium).f;
}

FitResult fit_damped_cosine(const std::vector<double>& trace, double dt, FitModel model,
                            double amplitude, const Medium& medium, double a_guess,
                            double b_guess, const FitOptions& options)
{
    if (trace.size() < 8) throw ValidationError("fit needs at least 8 samples");
    if (!(dt > 0.0)) throw ValidationError("fit needs dt > 0");
    const std::size_t n = trace.size();

    const auto cost = [&](double a, double b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = fit_model(model, a, b, dt * i, amplitude, medium) - trace[i];
            s += r * r;
        }
        return s;
    };

    FitResult best{a_guess, b_guess, 0.0, 0, false};
    double best_cost = cost(a_guess, b_guess);
    best.rms_residual = std::sqrt(best_cost / n);

    const bool all_zero = std::all_of(trace.begin(), trace.end(), [](double v) { return v == 0.0; });
    if (all_zero || amplitude == 0.0 || !std::isfinite(best_cost)) {
        throw ConvergenceError("fit: degenerate trace or amplitude", best);
    }

    double lambda = 1e-3;
    for (int it = 1; it <= options.max_iterations; ++it) {
        Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
        Eigen::Vector2d g = Eigen::Vector2d::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            const ModelEval m = eval_model(model, best.a_h, best.b_h, dt * i, amplitude, medium);
            const Eigen::Vector2d row(m.da, m.db);
            h += row * row.transpose();
            g += (m.f - trace[i]) * row;
        }
        const double det = h.determinant();
        if (!(h(0, 0) > 0.0) || !(h(1, 1) > 0.0) || !(det > 1e-14 * h(0, 0) * h(1, 1))) {
            best.iterations = it;
            throw ConvergenceError("fit: degenerate Jacobian", best);
        }
        best.iterations = it;
        // Inner loop: raise the damping until the step lowers the cost.
        bool accepted = false;
        Eigen::Vector2d delta = Eigen::Vector2d::Zero();
        while (lambda < 1e20) {
            Eigen::Matrix2d damped = h;
            damped.diagonal() *= 1.0 + lambda;
            delta = -damped.ldlt().solve(g);
            if (delta.norm() < options.step_tolerance) break;
            const double trial = cost(best.a_h + delta(0), best.b_h + delta(1));
            if (trial < best_cost) {
                best.a_h += delta(0);
                best.b_h += delta(1);
                best_cost = trial;
                lambda = std::max(lambda * 0.1, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        best.rms_residual = std::sqrt(best_cost / n);
        if (delta.norm() < options.step_tolerance || best_cost == 0.0) {
            best.converged = true;
            return best;
        }
        if (!accepted) break;
    }
    throw ConvergenceError("fit did not converge", best);
}

double dispersion_error_metric(const FitResult& fit, double a_true, double b_true)
{
    const double den = a_true * a_true + b_true * b_true;
    if (!(den > 0.0)) throw ValidationError("dispersion error needs (a, b) != 0");
    const double da = a_true - fit.a_h;
    const double db = b_true - fit.b_h;
    return std::sqrt((da * da + db * db) / den);
}

int select_probe_edge(const RectMesh& mesh, const ExactSolution& sol)
{
    const Eigen::Vector2d center(0.5 * mesh.lx(), 0.5 * mesh.ly());
    int best = -1;
    double best_amp = -1.0;
    double best_dist = 0.0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (mesh.is_boundary_edge(e)) continue;
        const Eigen::Vector2d mid = mesh.edge_midpoint(e);
        const double amp = std::abs(mesh.edge_tangent(e).dot(sol.spatial(mid.x(), mid.y())));
        const double dist = (mid - center).norm();
        const double tol = 1e-12 * std::max(1.0, best_amp);
        if (best < 0 || amp > best_amp + tol ||
            (std::abs(amp - best_amp) <= tol && dist < best_dist - 1e-12)) {
            best = e;
            best_amp = amp;
            best_dist = dist;
        }
    }
    if (best < 0 || best_amp <= 0.0) throw ValidationError("no interior edge with nonzero amplitude");
    return best;
}

ExperimentMeasurement measure_experiment(const ExperimentSetup& setup, const NamedScheme& scheme,
                                         int n)
{
    if (n < 2) throw ValidationError("experiment needs at least 2 cells per side");
    const ExactSolution sol = ExactSolution::from_root(setup.kx, setup.ky, setup.medium);
    const RectMesh mesh(n, n, 1.0, 1.0, BoundaryMode::PEC);
    const MfdParams params = scheme.params(setup.nu, mesh.gamma());

    SimConfig config{mesh, setup.medium, params, setup.nu, setup.final_time, {}, 0,
                     Formulation::Hybrid};
    const int probe = select_probe_edge(mesh, sol);
    config.probes = {probe};

    const QuadratureRule j_rule = QuadratureRule::gauss(4);
    const RunResult result = run(config, sol.initializers(config.dt()), j_rule);
    const double t_final = result.times.back();

    const QuadratureRule mid = QuadratureRule::midpoint();
    EdgeField e_ref = interpolate_edge_field(
        mesh, [&](double x, double y) { return sol.E(x, y, t_final); }, mid);
    EdgeField j_ref = interpolate_edge_field(
        mesh, [&](double x, double y) { return sol.J(x, y, t_final); }, j_rule);
    mesh.apply_pec(e_ref);
    mesh.apply_pec(j_ref);
    const SparseOperator mass = assemble_M(mesh, params, setup.norm);

    ExperimentMeasurement m;
    m.n = n;
    m.h = mesh.dx();
    m.scheme = scheme.name;
    m.final_time = t_final;
    m.probe_edge = probe;
    m.l2_e = l2_relative_error(result.final_state.e_curr, e_ref, mass);
    m.l2_j = l2_relative_error(result.final_state.j_curr, j_ref, mass);

    // Spatial DoF factors at the probe: each field's own interpolation rule.
    const auto phi = [&](double x, double y) { return sol.spatial(x, y); };
    const double amp_e = interpolate_edge_field(mesh, phi, mid)[probe];
    const double amp_j = interpolate_edge_field(mesh, phi, j_rule)[probe];
    const ProbeTrace& trace = result.probes.front();
    m.fit_e = fit_damped_cosine(trace.e, result.dt, FitModel::EField, amp_e, setup.medium, sol.a,
                                sol.b);
    m.fit_j = fit_damped_cosine(trace.j, result.dt, FitModel::JField, amp_j, setup.medium, sol.a,
                                sol.b);
    m.disp_e = dispersion_error_metric(m.fit_e, sol.a, sol.b);
    m.disp_j = dispersion_error_metric(m.fit_j, sol.a, sol.b);
    return m;
}

double observed_rate(double err_prev, double err, double h_prev, double h)
{
    return std::log(err_prev / err) / std::log(h_prev / h);
}

std::vector<ConvergenceRow> convergence_study(const ConvergenceStudyConfig& config)
{
    if (config.h_list.empty()) throw ValidationError("convergence study needs a non-empty h list");
    if (config.schemes.empty()) throw ValidationError("convergence study needs schemes");
    std::vector<int> cells;
    for (double h : config.h_list) {
        if (!(h > 0.0) || h > 0.5) throw ValidationError("h must lie in (0, 1/2]");
        const double inv = 1.0 / h;
        const long r = std::lround(inv);
        if (std::abs(inv - static_cast<double>(r)) > 1e-9 * inv) {
            throw ValidationError("1/h must be an integer on the unit square");
        }
        cells.push_back(static_cast<int>(r));
    }

    const std::size_t nh = cells.size();
    std::vector<ExperimentMeasurement> runs(config.schemes.size() * nh);
    detail::parallel_for(runs.size(), config.threads, [&](std::size_t idx) {
        runs[idx] = measure_experiment(config.setup, config.schemes[idx / nh], cells[idx % nh]);
    });

    std::vector<ConvergenceRow> rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t s = 0; s < config.schemes.size(); ++s) {
        for (const char* field : {"E", "J"}) {
            const bool is_e = field[0] == 'E';
            for (std::size_t i = 0; i < nh; ++i) {
                const auto& m = runs[s * nh + i];
                ConvergenceRow row;
                row.log2_h = std::log2(m.h);
                row.scheme = m.scheme;
                row.field = field;
                row.err_l2 = is_e ? m.l2_e : m.l2_j;
                row.err_disp = is_e ? m.disp_e : m.disp_j;
                row.rate_l2 = nan;
                row.rate_disp = nan;
                if (i > 0) {
                    const auto& p = runs[s * nh + i - 1];
                    row.rate_l2 = observed_rate(is_e ? p.l2_e : p.l2_j, row.err_l2, p.h, m.h);
                    row.rate_disp =
                        observed_rate(is_e ? p.disp_e : p.disp_j, row.err_disp, p.h, m.h);
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRow>& rows)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
    out << "log2_h,scheme,field,err_l2,rate_l2,err_disp,rate_disp\n";
    for (const auto& r : rows) {
        out << full(r.log2_h) << ',' << r.scheme << ',' << r.field << ',' << full(r.err_l2) << ','
            << full(r.rate_l2) << ',' << full(r.err_disp) << ',' << full(r.rate_disp) << '\n';
    }
}

}  // namespace etmfd
