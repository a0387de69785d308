#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "etmfd/dispersion.hpp"
#include "etmfd/error.hpp"
#include "etmfd/stepper.hpp"

namespace etmfd {

/// Standing-wave solution of Maxwell's equations in a cold plasma on the
/// unit square with PEC walls:
///   E = e^{a t} cos(b t) phi(x, y)
///   J = eps0 wp^2 e^{a t} ((a + wi) cos(b t) + b sin(b t)) / (b^2 + (a + wi)^2) phi(x, y)
///   phi = (-ky cos(kx x) sin(ky y), kx sin(kx x) cos(ky y)).
struct ExactSolution {
    double kx = 0.0;
    double ky = 0.0;
    double a = 0.0;  ///< decay rate
    double b = 0.0;  ///< angular frequency
    Medium medium;

    /// (a, b) = (Im omega, Re omega) of the propagating root for |k|.
    /// Throws ValidationError unless kx and ky are integer multiples of pi.
    static ExactSolution from_root(double kx, double ky, const Medium& medium);

    Eigen::Vector2d spatial(double x, double y) const;
    /// Scalar time factors multiplying phi.
    double e_time(double t) const;
    double j_time(double t) const;

    Eigen::Vector2d E(double x, double y, double t) const;
    Eigen::Vector2d J(double x, double y, double t) const;

    /// E at 0 and dt, J at 0.
    Initializers initializers(double dt) const;
};

/// sqrt(d^T M d) / sqrt(I^T M I) with d = fh - interpolant.
/// Throws ValidationError for a zero interpolant or mismatched sizes.
double l2_relative_error(const EdgeField& fh, const EdgeField& interpolant,
                         const SparseOperator& mass);

enum class FitModel {
    /// amplitude * e^{a t} cos(b t)
    EField,
    /// amplitude * eps0 wp^2 e^{a t} ((a + wi) cos(b t) + b sin(b t)) / (b^2 + (a + wi)^2)
    JField,
};

std::string to_string(FitModel model);

struct FitResult {
    double a_h = 0.0;
    double b_h = 0.0;
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Fit did not converge; carries the best parameters found.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, FitResult best)
        : NumericalError(what), best_(best) {}
    const FitResult& best() const noexcept { return best_; }

private:
    FitResult best_;
};

/// Model value at time t for parameters (a, b).
double fit_model(FitModel model, double a, double b, double t, double amplitude,
                 const Medium& medium);

struct FitOptions {
    int max_iterations = 200;
    double step_tolerance = 1e-12;
};

/// Levenberg-damped Gauss-Newton fit of trace[n] ~ model(n dt) over
/// (a_h, b_h) with the amplitude held fixed. A step is only accepted if it
/// lowers the sum of squares, so the result is never worse than the guess.
/// Throws ValidationError for traces shorter than 8 samples and
/// ConvergenceError for degenerate input or non-convergence.
FitResult fit_damped_cosine(const std::vector<double>& trace, double dt, FitModel model,
                            double amplitude, const Medium& medium, double a_guess,
                            double b_guess, const FitOptions& options = {});

/// sqrt(((a - a_h)^2 + (b - b_h)^2) / (a^2 + b^2)).
double dispersion_error_metric(const FitResult& fit, double a_true, double b_true);

/// Interior edge with the largest |midpoint E factor|; ties go to the edge
/// nearest the domain center, then to the lowest index.
int select_probe_edge(const RectMesh& mesh, const ExactSolution& sol);

/// Errors of one scheme at one mesh size.
struct ExperimentMeasurement {
    int n = 0;           ///< cells per side
    double h = 0.0;
    std::string scheme;
    double final_time = 0.0;
    int probe_edge = -1;
    double l2_e = 0.0;
    double l2_j = 0.0;
    FitResult fit_e;
    FitResult fit_j;
    double disp_e = 0.0;
    double disp_j = 0.0;
};

struct ExperimentSetup {
    Medium medium;
    double kx = 3.14159265358979323846;
    double ky = 3.14159265358979323846;
    double nu = 0.5;
    double final_time = 4.0;
    /// Inner product for the relative L^2 errors.
    NormMatrix norm = NormMatrix::Assembled;
};

/// Full pipeline on the unit square with n x n cells: run, L^2 errors at
/// the final level and damped-cosine fits at the probe edge.
ExperimentMeasurement measure_experiment(const ExperimentSetup& setup, const NamedScheme& scheme,
                                         int n);

struct ConvergenceRow {
    double log2_h = 0.0;
    std::string scheme;
    std::string field;  ///< "E" or "J"
    double err_l2 = 0.0;
    double rate_l2 = 0.0;  ///< NaN on the coarsest row
    double err_disp = 0.0;
    double rate_disp = 0.0;
};

struct ConvergenceStudyConfig {
    ExperimentSetup setup;
    std::vector<double> h_list{1.0 / 16, 1.0 / 32, 1.0 / 64};
    std::vector<NamedScheme> schemes;
    int threads = 1;
};

/// Observed order between consecutive rows, log(err_prev / err) / log(h_prev / h).
double observed_rate(double err_prev, double err, double h_prev, double h);

/// Rows ordered scheme, field, h (as given). Each 1/h must be an integer.
std::vector<ConvergenceRow> convergence_study(const ConvergenceStudyConfig& config);

/// CSV with header log2_h,scheme,field,err_l2,rate_l2,err_disp,rate_disp at
/// full precision; undefined rates are written as empty cells.
void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRow>& rows);

}  // namespace etmfd
