#include "etmfd/dispersion.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "etmfd/error.hpp"
#include "parallel.hpp"

namespace etmfd {

namespace {

constexpr Complex kI{0.0, 1.0};

// exp(w) - 1 without cancellation for small |w|.
Complex expm1(Complex w)
{
    const double half_sin = std::sin(0.5 * w.imag());
    return {std::expm1(w.real()) * std::cos(w.imag()) - 2.0 * half_sin * half_sin,
            std::exp(w.real()) * std::sin(w.imag())};
}

Eigen::Matrix2d inverse_2x2(const Eigen::Matrix2d& m)
{
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double scale = m.cwiseAbs().maxCoeff();
    if (!(std::abs(det) > 1e-14 * scale * scale)) {
        throw SingularMatrixError("exponential integrator Y is singular");
    }
    Eigen::Matrix2d inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return inv / det;
}

}  // namespace

double WaveVec::kx() const { return k * std::cos(theta); }
double WaveVec::ky() const { return k * std::sin(theta); }

WaveVec WaveVec::from_components(double kx, double ky)
{
    return {std::hypot(kx, ky), std::atan2(ky, kx)};
}

double spatial_symbol(const WaveVec& wv, double h, double gamma, const MfdParams& p, double c0)
{
    const double sx = std::sin(0.5 * wv.kx() * h);
    const double sy = std::sin(0.5 * wv.ky() * gamma * h);
    const double x = sx * sx;
    const double y = sy * sy;
    const double c2 = c0 * c0;
    return -4.0 * c2 / (h * h) * x * (1.0 - (1.0 - 4.0 * p.w3) * x) -
           32.0 * c2 / (gamma * h * h) * p.w2 * x * y -
           4.0 * c2 / (gamma * gamma * h * h) * y * (1.0 - (1.0 - 4.0 * p.w1) * y);
}

Eigen::Matrix2cd temporal_symbol(Complex omega, const Medium& medium, double dt)
{
    const ExpOperators ops = exp_operators(medium, dt);
    const Eigen::Matrix2d x = coupling_matrix(medium);
    const Eigen::Matrix2d y_inv_exp = inverse_2x2(ops.integral()) * ops.exponential();
    // Equivalent to the bracketed definition using e^{X dt} - I = X Y and
    // X Y = Y X; avoids the O(dt^2) cancellation inside the bracket.
    const Complex z = kI * omega * dt;
    const Complex sh = std::sinh(0.5 * z);
    const Complex quad = 4.0 * sh * sh;
    return (-expm1(-z) * x.cast<Complex>() + quad * y_inv_exp.cast<Complex>()) / dt;
}

Eigen::Matrix2d e_projector()
{
    Eigen::Matrix2d p;
    p << 1.0, 0.0, 0.0, 0.0;
    return p;
}

std::array<Complex, 4> dispersion_cubic(double k, const Medium& medium, CubicConvention convention)
{
    medium.validate();
    const double ck2 = medium.c0 * medium.c0 * k * k;
    const double wp2 = medium.omega_p * medium.omega_p;
    const double sign = convention == CubicConvention::Determinant ? 1.0 : -1.0;
    return {-kI, Complex(medium.omega_i), sign * kI * (wp2 + ck2), Complex(-medium.omega_i * ck2)};
}

std::array<Complex, 3> continuous_roots(double k, const Medium& medium, CubicConvention convention)
{
    const auto c = dispersion_cubic(k, medium, convention);
    Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
    companion(0, 0) = -c[1] / c[0];
    companion(0, 1) = -c[2] / c[0];
    companion(0, 2) = -c[3] / c[0];
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericalError("cubic root solve failed");

    std::array<Complex, 3> roots;
    for (int i = 0; i < 3; ++i) {
        Complex w = solver.eigenvalues()[i];
        for (int it = 0; it < 3; ++it) {
            const Complex p = ((c[0] * w + c[1]) * w + c[2]) * w + c[3];
            const Complex dp = (3.0 * c[0] * w + 2.0 * c[1]) * w + c[2];
            if (std::abs(dp) == 0.0) break;
            w -= p / dp;
        }
        roots[i] = w;
    }
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

Complex oscillatory_root(double k, const Medium& medium)
{
    const auto roots = continuous_roots(k, medium, CubicConvention::Determinant);
    const Complex best = *std::max_element(
        roots.begin(), roots.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    if (!(best.real() > 1e-12 * (1.0 + std::abs(best)))) {
        throw NumericalError("no oscillatory root for k = " + std::to_string(k));
    }
    return best;
}

Complex dispersion_determinant(Complex omega, const WaveVec& wv, const Medium& medium, double dt,
                               double h, double gamma, const MfdParams& params)
{
    Eigen::Matrix2cd m = temporal_symbol(omega, medium, dt);
    m(0, 0) -= spatial_symbol(wv, h, gamma, params, medium.c0);
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

Complex relative_dispersion_error(Complex omega, const WaveVec& wv, const Medium& medium,
                                  double dt, double h, double gamma, const MfdParams& params)
{
    if (std::abs(omega) == 0.0) throw ValidationError("relative dispersion error needs omega != 0");
    return dispersion_determinant(omega, wv, medium, dt, h, gamma, params) / std::abs(omega);
}

SymbolSample sample_symbols(Complex omega, const WaveVec& wv, const Medium& medium, double dt,
                            double h, double gamma, const MfdParams& params)
{
    SymbolSample s;
    s.spatial = spatial_symbol(wv, h, gamma, params, medium.c0);
    s.temporal = temporal_symbol(omega, medium, dt);
    Eigen::Matrix2cd m = s.temporal;
    m(0, 0) -= s.spatial;
    s.err = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / std::abs(omega);
    return s;
}

NamedScheme et_yee_scheme()
{
    return {"ET-Yee", [](double, double) { return yee_params(); }};
}

NamedScheme etmfd_scheme()
{
    return {"ETMFD", [](double nu, double gamma) { return optimal_params(nu, gamma); }};
}

std::vector<double> uniform_theta_grid(int n)
{
    if (n < 1) throw ValidationError("theta grid needs at least one point");
    std::vector<double> thetas(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) thetas[i] = 2.0 * std::numbers::pi * i / n;
    return thetas;
}

std::vector<AnisotropyRow> anisotropy_sweep(const AnisotropySweepConfig& cfg)
{
    cfg.medium.validate();
    if (cfg.thetas.empty()) throw ValidationError("anisotropy sweep needs angles");
    if (cfg.ppw.empty() && !cfg.cell_area) throw ValidationError("anisotropy sweep needs ppw values");
    if (cfg.schemes.empty()) throw ValidationError("anisotropy sweep needs schemes");
    if (!(cfg.k > 0.0)) throw ValidationError("anisotropy sweep needs k > 0");
    if (!(cfg.gamma > 0.0)) throw ValidationError("aspect ratio must be positive");
    if (!(cfg.nu > 0.0)) throw ValidationError("Courant number must be positive");

    const Complex omega = oscillatory_root(cfg.k, cfg.medium);

    struct Resolution {
        double h;
        double ppw;
    };
    std::vector<Resolution> resolutions;
    if (cfg.cell_area) {
        if (!(*cfg.cell_area > 0.0)) throw ValidationError("cell area must be positive");
        const double h = std::sqrt(*cfg.cell_area / cfg.gamma);
        resolutions.push_back({h, 2.0 * std::numbers::pi / (cfg.k * h)});
    } else {
        for (double ppw : cfg.ppw) {
            if (!(ppw > 0.0)) throw ValidationError("points per wavelength must be positive");
            resolutions.push_back({2.0 * std::numbers::pi / (cfg.k * ppw), ppw});
        }
    }

    const std::size_t n_theta = cfg.thetas.size();
    const std::size_t per_scheme = resolutions.size() * n_theta;
    std::vector<AnisotropyRow> rows(cfg.schemes.size() * per_scheme);
    detail::parallel_for(rows.size(), cfg.threads, [&](std::size_t idx) {
        const auto& scheme = cfg.schemes[idx / per_scheme];
        const auto& res = resolutions[(idx % per_scheme) / n_theta];
        const double theta = cfg.thetas[idx % n_theta];
        const double dt = cfg.nu * res.h / cfg.medium.c0;
        const MfdParams params = scheme.params(cfg.nu, cfg.gamma);
        AnisotropyRow& row = rows[idx];
        row.theta = theta;
        row.k = cfg.k;
        row.ppw = res.ppw;
        row.scheme = scheme.name;
        row.h = res.h;
        row.gamma = cfg.gamma;
        row.err = relative_dispersion_error(omega, {cfg.k, theta}, cfg.medium, dt, res.h,
                                            cfg.gamma, params);
    });
    return rows;
}

Complex conductive_leapfrog_residual(Complex omega, double tau, double nu, double gamma,
                                     double w2, double c0)
{
    const Complex w2sq = omega * omega;
    const Complex lhs = nu * nu * w2sq * (w2sq + 2.0 * kI * omega / tau);
    const Complex shifted = w2sq + kI * omega / tau;
    return (lhs - 12.0 * gamma * w2 * shifted * shifted) / (12.0 * c0 * c0);
}

Complex conductive_zeroing_w2(Complex omega, double tau, double nu, double gamma)
{
    const Complex w2sq = omega * omega;
    const Complex shifted = w2sq + kI * omega / tau;
    return nu * nu * w2sq * (w2sq + 2.0 * kI * omega / tau) / (12.0 * gamma * shifted * shifted);
}

RootPolishResult discrete_root_polish(const WaveVec& wv, const Medium& medium, double dt, double h,
                                      double gamma, const MfdParams& params, Complex omega_guess,
                                      int max_iterations, double tolerance)
{
    const auto f = [&](Complex w) {
        return dispersion_determinant(w, wv, medium, dt, h, gamma, params);
    };
    RootPolishResult result{omega_guess, 0, std::abs(f(omega_guess)) / std::abs(omega_guess)};
    if (result.residual < tolerance) return result;

    Complex w = omega_guess;
    for (int it = 1; it <= max_iterations; ++it) {
        const double delta = 1e-6 * std::max(1.0, std::abs(w));
        const Complex df = (f(w + delta) - f(w - delta)) / (2.0 * delta);
        if (std::abs(df) == 0.0) break;
        const Complex update = f(w) / df;
        w -= update;
        result = {w, it, std::abs(f(w)) / std::abs(w)};
        if (result.residual < tolerance) return result;
        if (std::abs(update) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(w)) break;
    }
    throw NumericalError("discrete root polish did not converge (residual " +
                         std::to_string(result.residual) + ")");
}

}  // namespace etmfd
