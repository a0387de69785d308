#include "etmfd/plasma.hpp"

#include <cmath>
#include <string>

#include "etmfd/error.hpp"

namespace etmfd {

void Medium::validate() const
{
    const auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!finite_positive(eps0)) throw ValidationError("eps0 must be positive");
    if (!finite_positive(c0)) throw ValidationError("c0 must be positive");
    if (!finite_positive(omega_p)) throw ValidationError("omega_p must be positive");
    if (!std::isfinite(omega_i) || omega_i < 0.0) {
        throw ValidationError("omega_i must be non-negative");
    }
    if (omega_i * omega_i >= 4.0 * omega_p * omega_p) {
        throw RegimeError("medium is not underdamped: omega_i^2 = " +
                          std::to_string(omega_i * omega_i) +
                          " >= 4 omega_p^2 = " + std::to_string(4.0 * omega_p * omega_p));
    }
    if (!(beta() > 1e-12 * omega_p)) {
        throw RegimeError("medium too close to critical damping (beta ~ 0)");
    }
}

double Medium::beta() const
{
    return 0.5 * std::sqrt(4.0 * omega_p * omega_p - omega_i * omega_i);
}

Eigen::Matrix2d coupling_matrix(const Medium& medium)
{
    medium.validate();
    const double a = medium.alpha();
    const double b = medium.beta();
    Eigen::Matrix2d x;
    x << 0.0, -1.0 / medium.eps0, medium.eps0 * (a * a + b * b), 2.0 * a;
    return x;
}

Eigen::Matrix2d ExpOperators::exponential() const
{
    Eigen::Matrix2d m;
    m << alpha1, alpha2, beta2, beta1;
    return m;
}

Eigen::Matrix2d ExpOperators::integral() const
{
    Eigen::Matrix2d m;
    m << alpha3, alpha4, beta3, beta4;
    return m;
}

ExpOperators exp_operators(const Medium& medium, double dt)
{
    medium.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be positive");

    const double a = medium.alpha();
    const double b = medium.beta();
    const double eps = medium.eps0;
    const double r2 = a * a + b * b;
    const double decay = std::exp(a * dt);
    const double c = std::cos(b * dt);
    const double s = std::sin(b * dt);

    ExpOperators ops;
    ops.dt = dt;
    ops.alpha1 = decay * (c - a * s / b);
    ops.alpha2 = -decay * s / (eps * b);
    ops.beta2 = eps * r2 * decay * s / b;
    ops.beta1 = decay * (c + a * s / b);

    ops.alpha3 = (decay * (2.0 * a * b * c + (b * b - a * a) * s) - 2.0 * a * b) / (r2 * b);
    ops.alpha4 = -(b + decay * (a * s - b * c)) / (eps * r2 * b);
    ops.beta3 = eps * (b + decay * (a * s - b * c)) / b;
    ops.beta4 = decay * s / b;
    return ops;
}

}  // namespace etmfd
