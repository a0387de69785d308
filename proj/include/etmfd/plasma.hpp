#pragma once

#include <Eigen/Core>

namespace etmfd {

/// Cold isotropic plasma. Defaults are the normalized units
/// eps0 = c0 = omega_i = omega_p = 1.
struct Medium {
    double eps0 = 1.0;
    double c0 = 1.0;
    double omega_i = 1.0;  ///< collision frequency
    double omega_p = 1.0;  ///< plasma frequency

    /// Throws ValidationError for non-positive constants and RegimeError
    /// outside the underdamped branch omega_i^2 < 4 omega_p^2.
    void validate() const;

    /// Damped-oscillator decay rate, -omega_i / 2.
    double alpha() const { return -0.5 * omega_i; }
    /// Damped-oscillator frequency, sqrt(4 omega_p^2 - omega_i^2) / 2.
    double beta() const;

    bool operator==(const Medium&) const = default;
};

/// X in d/dt (E, J) = X (E, J) + forcing:
/// [[0, -1/eps0], [eps0 (alpha^2 + beta^2), 2 alpha]].
Eigen::Matrix2d coupling_matrix(const Medium& medium);

/// Entries of exp(X dt) and of its integral Y = \int_0^dt exp(X s) ds.
///
///   exp(X dt) = [[alpha1, alpha2], [beta2, beta1]]
///   Y         = [[alpha3, alpha4], [beta3, beta4]]
struct ExpOperators {
    double alpha1 = 1.0;
    double alpha2 = 0.0;
    double beta1 = 1.0;
    double beta2 = 0.0;
    double alpha3 = 0.0;
    double alpha4 = 0.0;
    double beta3 = 0.0;
    double beta4 = 0.0;
    double dt = 0.0;

    Eigen::Matrix2d exponential() const;
    Eigen::Matrix2d integral() const;
};

/// Closed-form underdamped coefficients for one step dt > 0.
ExpOperators exp_operators(const Medium& medium, double dt);

}  // namespace etmfd
