#pragma once

// Verification checks shared by `etmfd selftest` and the acceptance binary.
// Each returns a named pass/fail result with the measured quantities.

#include <string>
#include <vector>

#include "etmfd/analysis.hpp"

namespace etmfd::checks {

struct CheckResult {
    std::string id;
    std::string title;
    bool pass = false;
    std::string detail;
};

/// Convergence rates of the L^2 errors and of the fitted dispersion errors
/// on h = 1/16, 1/32, 1/64 (T = 4, nu = 1/2, kx = ky = pi).
struct ConvergenceChecks {
    CheckResult l2;
    CheckResult dispersion;
    std::vector<ConvergenceRow> rows;
};
ConvergenceChecks check_convergence(int threads = 1);

/// Least-squares slope of log|E(omega)| against log h.
double fitted_slope(const std::vector<double>& h, const std::vector<double>& err);

/// Symbol-level order over ppw in {12, 24, 48} at k = 4, nu = 1/2. With
/// `flip_w2` the optimal member is perturbed by negating w2 (mutation check).
CheckResult check_symbol_order(bool flip_w2 = false);

/// Oracle equivalences: exponentials, dense step, Bloch symbol, optimal W.
CheckResult check_oracles();

/// Conductive leapfrog residual: w2 cannot be chosen independent of omega.
CheckResult check_conductive_w2();

/// Curl-free mode: the stepper reproduces the 2x2 ODE solution.
CheckResult check_ode_exactness();

}  // namespace etmfd::checks
