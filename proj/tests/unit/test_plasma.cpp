#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "doctest.h"
#include "etmfd/error.hpp"
#include "etmfd/oracles.hpp"
#include "etmfd/plasma.hpp"

using namespace etmfd;
using std::numbers::pi;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

const Medium kMedia[] = {{1.0, 1.0, 1.0, 1.0},
                         {1.0, 1.0, 0.0, 1.0},
                         {2.0, 1.0, 0.5, 1.5},
                         {0.5, 3.0, 1.9, 1.0},
                         {1.0, 1.0, 0.01, 3.0}};
const double kSteps[] = {1e-3, 1e-2, 0.1, 0.5, 1.0};

}  // namespace

TEST_CASE("medium validation")
{
    CHECK_NOTHROW(Medium{}.validate());
    CHECK_THROWS_AS((Medium{1.0, 1.0, 2.0, 1.0}.validate()), RegimeError);
    CHECK_THROWS_AS((Medium{1.0, 1.0, 3.0, 1.0}.validate()), RegimeError);
    CHECK_THROWS_AS((Medium{0.0, 1.0, 1.0, 1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((Medium{1.0, -1.0, 1.0, 1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((Medium{1.0, 1.0, -0.1, 1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((Medium{1.0, 1.0, 1.0, 0.0}.validate()), ValidationError);
    CHECK_THROWS_AS(exp_operators(Medium{1.0, 1.0, 2.5, 1.0}, 0.1), RegimeError);
    CHECK_THROWS_AS(exp_operators(Medium{}, 0.0), ValidationError);
}

TEST_CASE("coupling matrix")
{
    Eigen::Matrix2d rot;
    rot << 0, -1, 1, 0;
    CHECK(max_abs(coupling_matrix({1.0, 1.0, 0.0, 1.0}) - rot) == 0.0);
    Eigen::Matrix2d damped;
    damped << 0, -1, 1, -1;
    CHECK(max_abs(coupling_matrix({}) - damped) < 1e-15);
    CHECK(Medium{}.alpha() == -0.5);
    CHECK(Medium{}.beta() == doctest::Approx(std::sqrt(3.0) / 2));
    for (const auto& m : kMedia) {
        CHECK(m.alpha() * m.alpha() + m.beta() * m.beta() ==
              doctest::Approx(m.omega_p * m.omega_p).epsilon(1e-14));
        CHECK(max_abs(coupling_matrix(m) - oracle::coupling(m)) < 1e-13);
    }
}

TEST_CASE("pure rotation at a quarter period")
{
    const ExpOperators ops = exp_operators({1.0, 1.0, 0.0, 1.0}, pi / 2);
    Eigen::Matrix2d rot;
    rot << 0, -1, 1, 0;
    CHECK(max_abs(ops.exponential() - rot) < 1e-15);
}

TEST_CASE("small step limit")
{
    const ExpOperators ops = exp_operators({}, 1e-8);
    CHECK(max_abs(ops.exponential() - Eigen::Matrix2d::Identity()) < 1e-7);
    CHECK(max_abs(ops.integral()) < 1e-7);
}

TEST_CASE("closed forms match the series and quadrature oracles")
{
    const ExpOperators ops = exp_operators({}, 0.1);
    const Eigen::Matrix2d x = coupling_matrix({});
    CHECK(max_abs(ops.exponential() - oracle::series_exp(x * 0.1)) < 1e-12);
    CHECK(max_abs(ops.integral() - oracle::simpson_exp_integral(x, 0.1)) < 1e-12);
    for (const auto& m : kMedia) {
        for (double dt : kSteps) {
            const ExpOperators o = exp_operators(m, dt);
            const Eigen::Matrix2d xm = coupling_matrix(m);
            const Eigen::Matrix2d ex = oracle::series_exp(xm * dt);
            const Eigen::Matrix2d y = oracle::block_exp_integral(xm, dt);
            CHECK(max_abs(o.exponential() - ex) < 1e-12 * std::max(1.0, max_abs(ex)));
            CHECK(max_abs(o.integral() - y) < 1e-12 * std::max(1.0, max_abs(y)));
        }
    }
}

TEST_CASE("series oracle examples")
{
    CHECK(max_abs(oracle::series_exp(Eigen::Matrix2d::Zero()) - Eigen::Matrix2d::Identity()) == 0.0);
    Eigen::Matrix2d nil;
    nil << 0, 1, 0, 0;
    Eigen::Matrix2d shear;
    shear << 1, 1, 0, 1;
    CHECK(max_abs(oracle::series_exp(nil) - shear) < 1e-15);
    Eigen::Matrix2d d = Eigen::Vector2d(0.7, -2.5).asDiagonal();
    CHECK(std::abs(oracle::series_exp(d)(0, 0) - std::exp(0.7)) < 1e-14);
    CHECK(std::abs(oracle::series_exp(d)(1, 1) - std::exp(-2.5)) < 1e-15);
    // Accurate for |X| dt up to 10.
    Eigen::Matrix2d big;
    big << 0, -10, 10, 0;
    CHECK(std::abs(oracle::series_exp(big)(0, 0) - std::cos(10.0)) < 1e-13);
}

TEST_CASE("determinant, defining identity and semigroup")
{
    for (const auto& m : kMedia) {
        for (double dt : kSteps) {
            const ExpOperators o = exp_operators(m, dt);
            const Eigen::Matrix2d e = o.exponential();
            CHECK(std::abs(e.determinant() - std::exp(-m.omega_i * dt)) < 1e-12);
            CHECK(max_abs(coupling_matrix(m) * o.integral() - (e - Eigen::Matrix2d::Identity())) <
                  1e-12 * std::max(1.0, max_abs(e)));
            const Eigen::Matrix2d twice = exp_operators(m, 2 * dt).exponential();
            CHECK(max_abs(twice - e * e) < 1e-12 * std::max(1.0, max_abs(twice)));
        }
    }
}
