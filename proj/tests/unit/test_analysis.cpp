#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "etmfd/analysis.hpp"
#include "etmfd/error.hpp"
#include "etmfd/oracles.hpp"

using namespace etmfd;
using std::numbers::pi;

namespace {

std::vector<double> sample(double dt, int n, const std::function<double(double)>& f)
{
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = f(i * dt);
    return out;
}

double rms_of(const std::vector<double>& trace, double dt, FitModel model, double amp,
              const Medium& m, double a, double b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double r = trace[i] - fit_model(model, a, b, i * dt, amp, m);
        s += r * r;
    }
    return std::sqrt(s / trace.size());
}

}  // namespace

TEST_CASE("exact solution at t = 0")
{
    const Medium m;
    const ExactSolution s = ExactSolution::from_root(pi, pi, m);
    const double w = s.a + m.omega_i;
    const double j0 = m.eps0 * m.omega_p * m.omega_p * w / (s.b * s.b + w * w);
    for (auto [x, y] : {std::pair{0.1, 0.2}, {0.5, 0.5}, {0.9, 0.35}}) {
        CHECK((s.E(x, y, 0.0) - s.spatial(x, y)).norm() < 1e-15);
        CHECK((s.J(x, y, 0.0) - j0 * s.spatial(x, y)).norm() < 1e-14);
    }
}

TEST_CASE("exact solution satisfies the continuous equations")
{
    // J_t = eps0 wp^2 E - wi J and E_tt = -c0^2 |k|^2 E - J_t / eps0 for a
    // divergence-free standing mode; checked with finite differences in t.
    const Medium m{1.0, 1.0, 1.0, 1.0};
    const ExactSolution s = ExactSolution::from_root(pi, 2 * pi, m);
    const double k2 = 5 * pi * pi;
    const double x = 0.3, y = 0.7, dt = 1e-4;
    for (double t : {0.0, 0.8, 2.5}) {
        const double tc = t + 2 * dt;
        const Eigen::Vector2d jt = (s.J(x, y, tc + dt) - s.J(x, y, tc - dt)) / (2 * dt);
        const Eigen::Vector2d ett =
            (s.E(x, y, tc + dt) - 2 * s.E(x, y, tc) + s.E(x, y, tc - dt)) / (dt * dt);
        CHECK((jt - (m.eps0 * m.omega_p * m.omega_p * s.E(x, y, tc) - m.omega_i * s.J(x, y, tc)))
                  .norm() < 1e-6);
        CHECK((ett - (-m.c0 * m.c0 * k2 * s.E(x, y, tc) - jt / m.eps0)).norm() < 1e-4);
    }
}

TEST_CASE("exact solution is tangentially zero on the walls and divergence free")
{
    const ExactSolution s = ExactSolution::from_root(2 * pi, pi, Medium{});
    for (double u : {0.0, 0.13, 0.5, 0.77}) {
        CHECK(std::abs(s.spatial(u, 0.0).x()) < 1e-14);
        CHECK(std::abs(s.spatial(u, 1.0).x()) < 1e-14);
        CHECK(std::abs(s.spatial(0.0, u).y()) < 1e-14);
        CHECK(std::abs(s.spatial(1.0, u).y()) < 1e-14);
        const double d = 1e-5, x = 0.3, y = u;
        const double div = (s.spatial(x + d, y).x() - s.spatial(x - d, y).x()) / (2 * d) +
                           (s.spatial(x, y + d).y() - s.spatial(x, y - d).y()) / (2 * d);
        CHECK(std::abs(div) < 1e-7);
    }
    CHECK_THROWS_AS(ExactSolution::from_root(1.0, pi, Medium{}), ValidationError);
    CHECK_THROWS_AS(ExactSolution::from_root(0.0, 0.0, Medium{}), ValidationError);
}

TEST_CASE("relative L2 error")
{
    const RectMesh mesh(6, 6, 1.0, 1.0);
    const SparseOperator mass = assemble_M(mesh, optimal_params(0.5, 1.0));
    const ExactSolution s = ExactSolution::from_root(pi, pi, Medium{});
    EdgeField ref = interpolate_edge_field(mesh, [&](double x, double y) { return s.spatial(x, y); });
    mesh.apply_pec(ref);
    CHECK(l2_relative_error(ref, ref, mass) == 0.0);
    CHECK(l2_relative_error(2.0 * ref, ref, mass) == doctest::Approx(1.0).epsilon(1e-14));

    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1e-3, 1e-3);
    EdgeField noisy = ref;
    for (auto& v : noisy) v += u(rng);
    const Eigen::MatrixXd dense = mass.to_dense();
    const EdgeField d = noisy - ref;
    const double oracle = std::sqrt(d.dot(dense * d) / ref.dot(dense * ref));
    CHECK(std::abs(l2_relative_error(noisy, ref, mass) - oracle) < 1e-13);
    CHECK(std::abs(l2_relative_error(3.5 * noisy, 3.5 * ref, mass) -
                   l2_relative_error(noisy, ref, mass)) < 1e-14);

    CHECK_THROWS_AS(l2_relative_error(ref, EdgeField::Zero(ref.size()), mass), ValidationError);
    CHECK_THROWS_AS(l2_relative_error(ref.head(4), ref.head(4), mass), ValidationError);
}

TEST_CASE("damped cosine fit")
{
    const Medium m;
    const double dt = 0.01;
    const auto clean = sample(dt, 400, [](double t) { return std::exp(0.1 * t) * std::cos(2 * t); });
    const FitResult f = fit_damped_cosine(clean, dt, FitModel::EField, 1.0, m, 0.0, 1.5);
    CHECK(f.converged);
    CHECK(std::abs(f.a_h - 0.1) < 1e-10);
    CHECK(std::abs(f.b_h - 2.0) < 1e-10);
    CHECK(f.rms_residual < 1e-10);
    CHECK(f.rms_residual <= rms_of(clean, dt, FitModel::EField, 1.0, m, 0.0, 1.5));

    std::mt19937 rng(1);
    std::normal_distribution<double> noise(0.0, 1e-8);
    auto noisy = clean;
    for (auto& v : noisy) v += noise(rng);
    const FitResult g = fit_damped_cosine(noisy, dt, FitModel::EField, 1.0, m, 0.0, 1.5);
    CHECK(std::abs(g.a_h - 0.1) < 1e-6);
    CHECK(std::abs(g.b_h - 2.0) < 1e-6);

    // J model with the same (a, b) substituted into its amplitude law.
    const double a = -0.03, b = 4.5, amp = 0.8;
    const auto j = sample(dt, 500, [&](double t) {
        const double w = a + m.omega_i;
        return amp * m.eps0 * m.omega_p * m.omega_p * std::exp(a * t) *
               (w * std::cos(b * t) + b * std::sin(b * t)) / (b * b + w * w);
    });
    const FitResult fj = fit_damped_cosine(j, dt, FitModel::JField, amp, m, -0.02, 4.4);
    CHECK(std::abs(fj.a_h - a) < 1e-9);
    CHECK(std::abs(fj.b_h - b) < 1e-9);

    CHECK_THROWS_AS(fit_damped_cosine(std::vector<double>(400, 0.0), dt, FitModel::EField, 1.0, m,
                                      0.0, 1.5),
                    ConvergenceError);
    CHECK_THROWS_AS(fit_damped_cosine(clean, dt, FitModel::EField, 0.0, m, 0.0, 1.5),
                    ConvergenceError);
    CHECK_THROWS_AS(fit_damped_cosine({1.0, 0.9, 0.8}, dt, FitModel::EField, 1.0, m, 0.0, 1.5),
                    ValidationError);
    try {
        fit_damped_cosine(clean, dt, FitModel::EField, 1.0, m, 0.0, 1.5, FitOptions{1, 1e-30});
    } catch (const ConvergenceError& e) {
        CHECK(e.best().rms_residual <= rms_of(clean, dt, FitModel::EField, 1.0, m, 0.0, 1.5));
    }
}

TEST_CASE("dispersion error metric")
{
    FitResult f;
    f.a_h = 0.0;
    f.b_h = 1.0;
    CHECK(dispersion_error_metric(f, 0.0, 1.0) == 0.0);
    f.b_h = 1.1;
    CHECK(dispersion_error_metric(f, 0.0, 1.0) == doctest::Approx(0.1));
    f.a_h = 0.3;
    f.b_h = 4.0;
    CHECK(dispersion_error_metric(f, 0.0, 4.0) == doctest::Approx(0.075));
    FitResult g;
    g.a_h = -0.3;
    g.b_h = -4.0;
    CHECK(dispersion_error_metric(g, 0.0, -4.0) == doctest::Approx(0.075));
    CHECK_THROWS_AS(dispersion_error_metric(f, 0.0, 0.0), ValidationError);
}

TEST_CASE("probe edge selection")
{
    for (int n : {8, 16}) {
        const RectMesh mesh(n, n, 1.0, 1.0);
        const ExactSolution s = ExactSolution::from_root(pi, pi, Medium{});
        const int probe = select_probe_edge(mesh, s);
        REQUIRE(probe >= 0);
        CHECK_FALSE(mesh.is_boundary_edge(probe));
        const auto amp = [&](int e) {
            const Eigen::Vector2d c = mesh.edge_midpoint(e);
            return std::abs(mesh.edge_tangent(e).dot(s.spatial(c.x(), c.y())));
        };
        const Eigen::Vector2d center(0.5, 0.5);
        for (int e = 0; e < mesh.num_edges(); ++e) {
            if (mesh.is_boundary_edge(e)) continue;
            CHECK(amp(e) <= amp(probe) + 1e-12);
            if (std::abs(amp(e) - amp(probe)) <= 1e-12) {
                CHECK((mesh.edge_midpoint(e) - center).norm() >=
                      (mesh.edge_midpoint(probe) - center).norm() - 1e-12);
            }
        }
    }
}

TEST_CASE("observed rate and convergence CSV")
{
    CHECK(observed_rate(4.0, 1.0, 0.5, 0.25) == doctest::Approx(2.0));
    CHECK(observed_rate(16.0, 1.0, 0.5, 0.25) == doctest::Approx(4.0));

    ConvergenceStudyConfig cfg;
    cfg.h_list = {1.0 / 8, 1.0 / 16};
    cfg.schemes = {etmfd_scheme()};
    cfg.setup.final_time = 1.0;
    const auto rows = convergence_study(cfg);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].field == "E");
    CHECK(rows[2].field == "J");
    CHECK(std::isnan(rows[0].rate_l2));
    CHECK(rows[1].log2_h == -4.0);
    CHECK(rows[1].rate_l2 == doctest::Approx(
                                 observed_rate(rows[0].err_l2, rows[1].err_l2, 1.0 / 8, 1.0 / 16)));

    const auto path = std::filesystem::temp_directory_path() / "etmfd_test_convergence.csv";
    write_convergence_csv(path, rows);
    std::ifstream in(path);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "log2_h,scheme,field,err_l2,rate_l2,err_disp,rate_disp");
    CHECK(first.rfind("-3,ETMFD,E,", 0) == 0);
    CHECK(first.find(",,") != std::string::npos);
    std::filesystem::remove(path);

    cfg.h_list = {0.3};
    CHECK_THROWS_AS(convergence_study(cfg), ValidationError);
    cfg.h_list.clear();
    CHECK_THROWS_AS(convergence_study(cfg), ValidationError);
}

TEST_CASE("lumped error norm gives the same rates as the assembled one")
{
    ExperimentSetup setup;
    setup.final_time = 1.0;
    const auto coarse = measure_experiment(setup, etmfd_scheme(), 8);
    const auto fine = measure_experiment(setup, etmfd_scheme(), 16);
    setup.norm = NormMatrix::Lumped;
    const auto lc = measure_experiment(setup, etmfd_scheme(), 8);
    const auto lf = measure_experiment(setup, etmfd_scheme(), 16);
    CHECK(lc.l2_e != coarse.l2_e);
    CHECK(lc.l2_e == doctest::Approx(coarse.l2_e).epsilon(0.5));
    CHECK(observed_rate(lc.l2_e, lf.l2_e, 1.0 / 8, 1.0 / 16) ==
          doctest::Approx(observed_rate(coarse.l2_e, fine.l2_e, 1.0 / 8, 1.0 / 16)).epsilon(0.1));
}
