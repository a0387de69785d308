#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "etmfd/dispersion.hpp"
#include "etmfd/error.hpp"
#include "etmfd/oracles.hpp"

using namespace etmfd;
using std::numbers::pi;

namespace {

const Complex kI(0.0, 1.0);

double max_abs(const Eigen::Matrix2cd& m) { return m.cwiseAbs().maxCoeff(); }

/// Dispersion residual of a scheme at the continuous root for ppw points per
/// wavelength, with dt = nu h / c0.
double residual_at(const MfdParams& p, double k, double theta, double ppw, double nu = 0.5)
{
    const Medium m;
    const double h = 2 * pi / (k * ppw);
    const Complex w = oscillatory_root(k, m);
    return std::abs(relative_dispersion_error(w, {k, theta}, m, nu * h, h, 1.0, p));
}

}  // namespace

TEST_CASE("Yee spatial symbol along the x axis")
{
    const double s = spatial_symbol({pi, 0.0}, 1.0 / 8, 1.0, yee_params(), 1.0);
    CHECK(s == doctest::Approx(-256.0 * std::pow(std::sin(pi / 16), 2)).epsilon(1e-14));
    CHECK(s == doctest::Approx(-9.7434).epsilon(1e-4));
    CHECK(spatial_symbol({0.0, 0.3}, 0.1, 2.0, optimal_params(0.5, 2.0), 1.0) == 0.0);
}

TEST_CASE("spatial symbol agrees with the oracle Bloch reduction")
{
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> uk(0.1, 20.0), ut(0.0, 2 * pi), uh(0.01, 0.3),
        ug(0.2, 5.0), uw(-0.5, 0.5);
    for (int i = 0; i < 50; ++i) {
        const WaveVec wv{uk(rng), ut(rng)};
        const double h = uh(rng), g = ug(rng), c0 = 1.5;
        const MfdParams p{uw(rng), uw(rng), uw(rng)};
        const double closed = spatial_symbol(wv, h, g, p, c0);
        const double bloch = oracle::bloch_spatial_symbol(wv.kx(), wv.ky(), h, g * h, p, c0);
        CHECK(std::abs(closed - bloch) < 1e-12 * std::max(1.0, std::abs(bloch)));
    }
}

TEST_CASE("assembled operators act on discrete plane waves through the reduced symbol")
{
    // Periodic 8 x 6 mesh with dy = 2 dx; admissible wave vectors are
    // 2 pi (m / lx, l / ly).
    const RectMesh mesh(8, 6, 1.0, 1.5, BoundaryMode::Periodic);
    const double dx = mesh.dx(), dy = mesh.dy();
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> um(-3, 4), ul(-2, 3);
    std::uniform_real_distribution<double> uw(-0.4, 0.4);
    for (int i = 0; i < 20; ++i) {
        const double kx = 2 * pi * um(rng) / mesh.lx();
        const double ky = 2 * pi * ul(rng) / mesh.ly();
        const MfdParams p{0.25 + uw(rng), uw(rng), 0.25 + uw(rng)};
        const SparseOperator w = assemble_W(mesh, p);
        const SparseOperator a = assemble_curl_curl(mesh);
        const Eigen::Matrix2cd rw = oracle::bloch_reduce(local_W(p, dx, dy), kx, ky, dx, dy);
        const Eigen::Matrix2cd ra = oracle::bloch_reduce(local_curl_curl(dx, dy), kx, ky, dx, dy);
        const Eigen::Matrix2cd r = rw * ra;

        const Complex ref_h(0.7, -0.2), ref_v(-0.3, 1.1);
        const Eigen::VectorXcd v = oracle::bloch_wave(mesh, kx, ky, ref_h, ref_v);
        const Eigen::VectorXcd wav = w.matrix().cast<Complex>() * (a.matrix().cast<Complex>() * v);
        const Eigen::Vector2cd reduced = r * Eigen::Vector2cd(ref_h, ref_v);
        const Eigen::VectorXcd expected = oracle::bloch_wave(mesh, kx, ky, reduced[0], reduced[1]);
        CHECK((wav - expected).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, expected.norm()));

        if (kx == 0.0 && ky == 0.0) continue;
        // The range of the reduced curl-curl is one-dimensional; its image
        // under W is the propagating eigenvector with eigenvalue -S / c0^2.
        const Eigen::Vector2cd q = r.col(ra.col(0).norm() > ra.col(1).norm() ? 0 : 1);
        const Eigen::VectorXcd u = oracle::bloch_wave(mesh, kx, ky, q[0], q[1]);
        const Eigen::VectorXcd wau =
            w.matrix().cast<Complex>() * (a.matrix().cast<Complex>() * u);
        const double lambda = -spatial_symbol(WaveVec::from_components(kx, ky), dx, mesh.gamma(), p, 1.0);
        CHECK((wau - lambda * u).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, lambda * u.norm()));
    }
}

TEST_CASE("optimal-family spatial symbol has the predicted h^2 term")
{
    // With w1, w3 tied to w2 the symbol is -c0^2 k^2 (1 + gamma w2 k^2 h^2) + O(h^4).
    for (double gamma : {1.0, 2.0}) {
        const MfdParams p = optimal_params(0.5, gamma);
        const double k = 3.0, theta = 0.3;
        const double predicted = -gamma * p.w2 * std::pow(k, 4);
        const auto defect = [&](double h) { return spatial_symbol({k, theta}, h, gamma, p, 1.0) + k * k; };
        const double h = 1e-3;
        CHECK(defect(h) / (h * h) == doctest::Approx(predicted).epsilon(0.02));
        const double slope = std::log(defect(2e-2) / defect(1e-2)) / std::log(2.0);
        CHECK(slope == doctest::Approx(2.0).epsilon(0.02));
    }
}

TEST_CASE("temporal symbol")
{
    const Medium m;
    CHECK(max_abs(temporal_symbol(0.0, m, 0.1)) == 0.0);

    // Recomposition from the defining bracket with oracle exponentials.
    const Eigen::Matrix2d x = oracle::coupling(m);
    for (double dt : {0.5, 0.1, 0.02}) {
        for (Complex w : {Complex(1.3, 0.0), Complex(4.5, -0.02), Complex(-2.0, 0.7)}) {
            const Eigen::Matrix2cd ex = oracle::series_exp(x * dt).cast<Complex>();
            const Eigen::Matrix2cd y = oracle::block_exp_integral(x, dt).cast<Complex>();
            const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
            const Eigen::Matrix2cd bracket =
                std::exp(-kI * w * dt) * id - (id + ex) + std::exp(kI * w * dt) * ex;
            const Eigen::Matrix2cd direct = y.inverse() * bracket / dt;
            const Eigen::Matrix2cd t = temporal_symbol(w, m, dt);
            CHECK(max_abs(t - direct) < 1e-11 * std::max(1.0, max_abs(direct)));
        }
    }

    // T = T0 + (dt^2 / 12) T0^2 + O(dt^4) with T0 = -w^2 I + i w X.
    const Complex w(2.0, -0.1);
    const Eigen::Matrix2cd t0 = -w * w * Eigen::Matrix2cd::Identity() + kI * w * x.cast<Complex>();
    const Eigen::Matrix2cd coeff = t0 * t0 / 12.0;
    for (double dt : {1e-2, 5e-3}) {
        const Eigen::Matrix2cd measured = (temporal_symbol(w, m, dt) - t0) / (dt * dt);
        CHECK(max_abs(measured - coeff) < 0.05 * max_abs(coeff));
    }
}

TEST_CASE("continuous roots")
{
    const Medium m;
    const auto r0 = continuous_roots(0.0, m);
    // omega (omega^2 + i wi omega - wp^2) = 0
    CHECK(std::abs(r0[0] - Complex(-std::sqrt(3.0) / 2, -0.5)) < 1e-12);
    CHECK(std::abs(r0[1]) < 1e-12);
    CHECK(std::abs(r0[2] - Complex(std::sqrt(3.0) / 2, -0.5)) < 1e-12);

    const Complex w = oscillatory_root(std::sqrt(2.0) * pi, m);
    CHECK(w.real() == doctest::Approx(4.5491).epsilon(1e-4));
    CHECK(w.imag() == doctest::Approx(-0.0231).epsilon(1e-2));

    for (double k : {0.5, 3.0, 10.0}) {
        for (auto conv : {CubicConvention::Determinant, CubicConvention::NegatedLinear}) {
            const auto c = dispersion_cubic(k, m, conv);
            const auto r = continuous_roots(k, m, conv);
            for (const Complex& z : r) {
                const Complex p = ((c[0] * z + c[1]) * z + c[2]) * z + c[3];
                CHECK(std::abs(p) < 1e-10 * (1 + std::pow(std::abs(z), 3)));
            }
            CHECK(std::abs(r[0] + r[1] + r[2] + c[1] / c[0]) < 1e-12 * (1 + k * k));
            CHECK(std::abs(r[0] * r[1] + r[0] * r[2] + r[1] * r[2] - c[2] / c[0]) <
                  1e-11 * (1 + k * k));
            CHECK(std::abs(r[0] * r[1] * r[2] + c[3] / c[0]) < 1e-11 * (1 + k * k));
        }
    }
}

TEST_CASE("optimal member has smaller dispersion residual and faster convergence")
{
    for (double theta : {0.0, 0.4, pi / 4, 1.2}) {
        const double opt12 = residual_at(optimal_params(0.5, 1.0), 4.0, theta, 12);
        const double opt24 = residual_at(optimal_params(0.5, 1.0), 4.0, theta, 24);
        const double yee12 = residual_at(yee_params(), 4.0, theta, 12);
        const double yee24 = residual_at(yee_params(), 4.0, theta, 24);
        CHECK(yee12 >= 10.0 * opt12);
        CHECK(opt12 / opt24 == doctest::Approx(16.0).epsilon(0.3));
        CHECK(yee12 / yee24 == doctest::Approx(4.0).epsilon(0.3));
    }
    CHECK_THROWS_AS(relative_dispersion_error(0.0, {4.0, 0.0}, Medium{}, 0.1, 0.1, 1.0,
                                              yee_params()),
                    ValidationError);
}

TEST_CASE("discrete roots are found by Newton polishing")
{
    const Medium m;
    const WaveVec wv{4.0, 0.3};
    const double h = 2 * pi / (4.0 * 12), dt = 0.5 * h;
    for (const MfdParams& p : {yee_params(), optimal_params(0.5, 1.0)}) {
        const RootPolishResult r =
            discrete_root_polish(wv, m, dt, h, 1.0, p, oscillatory_root(4.0, m));
        CHECK(std::abs(relative_dispersion_error(r.omega, wv, m, dt, h, 1.0, p)) < 1e-12);
        const RootPolishResult again = discrete_root_polish(wv, m, dt, h, 1.0, p, r.omega);
        CHECK(again.omega == r.omega);
        CHECK(again.iterations == 0);
    }
}

TEST_CASE("anisotropy sweep")
{
    AnisotropySweepConfig cfg;
    cfg.thetas = uniform_theta_grid(16);
    cfg.schemes = {etmfd_scheme(), et_yee_scheme()};
    const auto rows = anisotropy_sweep(cfg);
    REQUIRE(rows.size() == 2 * 2 * 16);
    CHECK(rows.front().scheme == "ETMFD");
    CHECK(rows.front().ppw == 12.0);
    CHECK(rows[1].theta > rows[0].theta);

    // Angles k and k + 4 differ by pi / 2; on square cells the error is
    // invariant under that rotation.
    for (std::size_t block = 0; block < rows.size(); block += 16) {
        for (std::size_t i = 0; i < 12; ++i) {
            const double a = std::abs(rows[block + i].err), b = std::abs(rows[block + i + 4].err);
            CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, a));
        }
    }
    double yee_min = 1e300, yee_max = 0.0;
    for (const auto& r : rows) {
        if (r.scheme != "ET-Yee" || r.ppw != 12.0) continue;
        yee_min = std::min(yee_min, std::abs(r.err));
        yee_max = std::max(yee_max, std::abs(r.err));
    }
    CHECK(yee_max / yee_min > 1.01);

    CHECK_THROWS_AS(uniform_theta_grid(0), ValidationError);
    const auto grid = uniform_theta_grid(4);
    CHECK(grid[1] == doctest::Approx(pi / 2));
}

TEST_CASE("anisotropy sweep at fixed cell area over aspect ratios")
{
    for (double gamma : {0.25, 1.0, 4.0}) {
        AnisotropySweepConfig cfg;
        cfg.thetas = uniform_theta_grid(8);
        cfg.schemes = {etmfd_scheme()};
        cfg.gamma = gamma;
        cfg.nu = 0.5 / (gamma * gamma * gamma);
        cfg.cell_area = 0.01;
        const auto rows = anisotropy_sweep(cfg);
        REQUIRE(rows.size() == 8);
        for (const auto& r : rows) {
            CHECK(r.h == doctest::Approx(std::sqrt(0.01 / gamma)));
            CHECK(r.gamma == gamma);
            CHECK(std::isfinite(std::abs(r.err)));
        }
    }
}

TEST_CASE("E projector is idempotent")
{
    const Eigen::Matrix2d p = e_projector();
    CHECK((p * p - p).cwiseAbs().maxCoeff() == 0.0);
    CHECK(p.trace() == 1.0);
}

TEST_CASE("conductive leapfrog residual and its zeroing w2")
{
    const double tau = 1.0, nu = 0.5, gamma = 1.0;
    const Complex w1 = conductive_zeroing_w2(1.0, tau, nu, gamma);
    const Complex w2 = conductive_zeroing_w2(2.0, tau, nu, gamma);
    CHECK(std::abs(w1 - Complex(1.0 / 48, -1.0 / 96)) < 1e-12);
    CHECK(std::abs(w2 - Complex(0.0233333333333333, -0.0033333333333333)) < 1e-12);
    CHECK(std::abs(w1 - w2) > 1e-3);

    // Residual is linear in w2; check it vanishes at the complex root by
    // evaluating the two real-argument pieces.
    const Complex r0 = conductive_leapfrog_residual(1.0, tau, nu, gamma, 0.0, 1.0);
    const Complex r1 = conductive_leapfrog_residual(1.0, tau, nu, gamma, 1.0, 1.0);
    CHECK(std::abs(r0 + (r1 - r0) * w1) < 1e-14);

    const Complex vacuum = conductive_zeroing_w2(1.0, 1e15, nu, gamma);
    CHECK(vacuum.real() == doctest::Approx(nu * nu / (12 * gamma)).epsilon(1e-12));
    CHECK(std::abs(vacuum.imag()) < 1e-12);
}
