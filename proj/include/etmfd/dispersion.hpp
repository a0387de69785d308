#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "etmfd/operators.hpp"
#include "etmfd/plasma.hpp"

namespace etmfd {

using Complex = std::complex<double>;

/// Wave vector k (cos theta, sin theta).
struct WaveVec {
    double k = 0.0;
    double theta = 0.0;

    double kx() const;
    double ky() const;
    static WaveVec from_components(double kx, double ky);
};

/// Non-zero eigenvalue of the Bloch-reduced W_E A_h, times -c0^2, on a mesh
/// with dx = h and dy = gamma h. Approximates -c0^2 |k|^2.
double spatial_symbol(const WaveVec& wv, double h, double gamma, const MfdParams& params,
                      double c0);

/// Discrete temporal symbol of the leapfrog-eliminated ETD step, for time
/// dependence exp(-i omega t):
///   T = Y^{-1} (e^{-i omega dt} I - (I + e^{X dt}) + e^{i omega dt} e^{X dt}) / dt.
/// Throws SingularMatrixError if Y is singular.
Eigen::Matrix2cd temporal_symbol(Complex omega, const Medium& medium, double dt);

/// diag(1, 0): the spatial symbol acts on the E row only.
Eigen::Matrix2d e_projector();

enum class CubicConvention {
    /// det(-omega^2 I + i omega X + c0^2 k^2 P1) = 0 divided by omega:
    /// -i w^3 + wi w^2 + i (wp^2 + c0^2 k^2) w - wi c0^2 k^2 = 0.
    /// The physical relation for fields ~ exp(-i omega t).
    Determinant,
    /// Same cubic with the linear coefficient negated:
    /// -i w^3 + wi w^2 - i (wp^2 + c0^2 k^2) w - wi c0^2 k^2 = 0.
    NegatedLinear,
};

/// Coefficients (c3, c2, c1, c0) of c3 w^3 + c2 w^2 + c1 w + c0.
std::array<Complex, 4> dispersion_cubic(double k, const Medium& medium,
                                        CubicConvention convention = CubicConvention::Determinant);

/// The three roots, sorted by real part then imaginary part.
std::array<Complex, 3> continuous_roots(double k, const Medium& medium,
                                        CubicConvention convention = CubicConvention::Determinant);

/// Propagating root of the determinant cubic: the one with the largest
/// positive real (oscillatory) part. Throws NumericalError if none
/// oscillates.
Complex oscillatory_root(double k, const Medium& medium);

/// det(T_dt(omega) - S_h(k) P1); c0 is taken from the medium.
Complex dispersion_determinant(Complex omega, const WaveVec& wv, const Medium& medium, double dt,
                               double h, double gamma, const MfdParams& params);

/// det(T_dt(omega) - S_h(k) P1) / |omega|.
Complex relative_dispersion_error(Complex omega, const WaveVec& wv, const Medium& medium,
                                  double dt, double h, double gamma, const MfdParams& params);

struct SymbolSample {
    double spatial = 0.0;
    Eigen::Matrix2cd temporal = Eigen::Matrix2cd::Zero();
    Complex err{};
};

SymbolSample sample_symbols(Complex omega, const WaveVec& wv, const Medium& medium, double dt,
                            double h, double gamma, const MfdParams& params);

/// A family member chosen as a function of (nu, gamma).
struct NamedScheme {
    std::string name;
    std::function<MfdParams(double nu, double gamma)> params;
};

NamedScheme et_yee_scheme();
NamedScheme etmfd_scheme();

struct AnisotropySweepConfig {
    std::vector<double> thetas;
    double k = 4.0;
    std::vector<double> ppw{12.0, 24.0};
    double nu = 0.5;
    double gamma = 1.0;
    Medium medium;
    std::vector<NamedScheme> schemes;
    /// When set, dx dy is held at this value (dx = sqrt(area / gamma))
    /// instead of deriving dx from points per wavelength.
    std::optional<double> cell_area;
    int threads = 1;
};

struct AnisotropyRow {
    double theta = 0.0;
    double k = 0.0;
    double ppw = 0.0;
    std::string scheme;
    Complex err{};
    double h = 0.0;
    double gamma = 1.0;
};

/// Evenly spaced angles on [0, 2 pi).
std::vector<double> uniform_theta_grid(int n);

/// |E(omega)| over angles, resolutions and schemes, with omega the
/// continuous propagating root. Rows are ordered scheme, ppw, theta.
std::vector<AnisotropyRow> anisotropy_sweep(const AnisotropySweepConfig& config);

/// h^2 coefficient of the leapfrog dispersion residual for a conductive
/// medium (tau = eps0 / sigma), after eliminating c0^2 k^2:
///   (nu^2 w^2 (w^2 + 2 i w / tau) - 12 gamma w2 (w^2 + i w / tau)^2) / (12 c0^2).
Complex conductive_leapfrog_residual(Complex omega, double tau, double nu, double gamma,
                                     double w2, double c0);

/// The (complex) w2 that zeroes conductive_leapfrog_residual at omega.
Complex conductive_zeroing_w2(Complex omega, double tau, double nu, double gamma);

struct RootPolishResult {
    Complex omega{};
    int iterations = 0;
    double residual = 0.0;  ///< |det(T - S P1)| / |omega| at the result
};

/// Newton polish of det(T_dt(omega) - S_h(k) P1) = 0 from omega_guess.
/// Throws NumericalError after max_iterations without convergence.
RootPolishResult discrete_root_polish(const WaveVec& wv, const Medium& medium, double dt, double h,
                                      double gamma, const MfdParams& params, Complex omega_guess,
                                      int max_iterations = 100, double tolerance = 1e-12);

}  // namespace etmfd
