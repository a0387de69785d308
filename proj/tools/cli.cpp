#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "etmfd/checks.hpp"
#include "etmfd/snapshot_io.hpp"

namespace etmfd::cli {

namespace {

using nlohmann::json;

std::string full(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_csv(const std::filesystem::path& path)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
    return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ValidationError("unknown config key '" + where + key + "'");
    }
}

template <typename T>
void read(const json& doc, const char* key, T& target)
{
    if (doc.contains(key)) target = doc.at(key).get<T>();
}

const std::set<std::string> kCommands{"params", "converge", "anisotropy",
                                      "simulate", "roots", "selftest"};

}  // namespace

std::string sig(double v, int digits)
{
    char buf[64];
    // Print signed zeros as plain 0 in tables.
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v == 0.0 ? 0.0 : v);
    return buf;
}

NamedScheme scheme_by_name(const std::string& name)
{
    if (name == "ETMFD") return etmfd_scheme();
    if (name == "ET-Yee") return et_yee_scheme();
    throw ValidationError("unknown scheme '" + name + "' (expected ETMFD or ET-Yee)");
}

AppConfig parse_config(const json& doc, const std::string& command)
{
    if (!doc.is_object()) throw ValidationError("config must be a JSON object");
    reject_unknown(doc,
                   {"experiment", "medium", "nu", "gamma", "final_time", "mode", "h_list",
                    "schemes", "k", "ppw", "theta_points", "gammas", "scale_nu_by_gamma_cubed",
                    "cell_area", "n", "scheme", "probes", "snapshot_stride", "root_k", "norm"},
                   "");
    AppConfig cfg;
    try {
        read(doc, "experiment", cfg.experiment);
        if (doc.contains("medium")) {
            const json& m = doc.at("medium");
            if (!m.is_object()) throw ValidationError("'medium' must be an object");
            reject_unknown(m, {"eps0", "c0", "omega_i", "omega_p"}, "medium.");
            read(m, "eps0", cfg.medium.eps0);
            read(m, "c0", cfg.medium.c0);
            read(m, "omega_i", cfg.medium.omega_i);
            read(m, "omega_p", cfg.medium.omega_p);
        }
        read(doc, "nu", cfg.nu);
        read(doc, "gamma", cfg.gamma);
        read(doc, "final_time", cfg.final_time);
        if (doc.contains("mode")) {
            const auto mode = doc.at("mode").get<std::vector<int>>();
            if (mode.size() != 2) throw ValidationError("'mode' must be [mx, my]");
            cfg.mode_x = mode[0];
            cfg.mode_y = mode[1];
        }
        read(doc, "h_list", cfg.h_list);
        read(doc, "schemes", cfg.schemes);
        read(doc, "k", cfg.k);
        read(doc, "ppw", cfg.ppw);
        read(doc, "theta_points", cfg.theta_points);
        read(doc, "gammas", cfg.gammas);
        read(doc, "scale_nu_by_gamma_cubed", cfg.scale_nu_by_gamma_cubed);
        if (doc.contains("cell_area")) cfg.cell_area = doc.at("cell_area").get<double>();
        read(doc, "n", cfg.n);
        read(doc, "scheme", cfg.scheme);
        read(doc, "probes", cfg.probes);
        read(doc, "snapshot_stride", cfg.snapshot_stride);
        read(doc, "root_k", cfg.root_k);
        if (doc.contains("norm")) {
            const auto norm = doc.at("norm").get<std::string>();
            if (norm == "assembled") {
                cfg.norm = NormMatrix::Assembled;
            } else if (norm == "lumped") {
                cfg.norm = NormMatrix::Lumped;
            } else {
                throw ValidationError("'norm' must be \"assembled\" or \"lumped\"");
            }
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config type error: ") + e.what());
    }

    if (!cfg.experiment.empty()) {
        if (!kCommands.count(cfg.experiment)) {
            throw ValidationError("unknown experiment '" + cfg.experiment + "'");
        }
        if (cfg.experiment != command) {
            throw ValidationError("config is for '" + cfg.experiment + "', not '" + command + "'");
        }
    }
    cfg.medium.validate();
    if (!(cfg.nu >= 0.0) || !std::isfinite(cfg.nu)) throw ValidationError("nu must be >= 0");
    if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) throw ValidationError("gamma must be > 0");
    if (!(cfg.final_time > 0.0)) throw ValidationError("final_time must be > 0");
    for (const auto& s : cfg.schemes) scheme_by_name(s);
    scheme_by_name(cfg.scheme);
    if (cfg.theta_points < 1) throw ValidationError("theta_points must be >= 1");
    if (cfg.n < 2) throw ValidationError("n must be >= 2");
    if (cfg.snapshot_stride < 0) throw ValidationError("snapshot_stride must be >= 0");
    for (double g : cfg.gammas) {
        if (!(g > 0.0)) throw ValidationError("gammas must be > 0");
    }
    if (command == "converge" && cfg.h_list.empty()) {
        throw ValidationError("h_list must not be empty");
    }
    if (command == "converge" && cfg.schemes.empty()) {
        throw ValidationError("schemes must not be empty");
    }
    if (command == "anisotropy" && cfg.ppw.empty() && !cfg.cell_area) {
        throw ValidationError("ppw must not be empty");
    }
    return cfg;
}

AppConfig load_config(const std::optional<std::filesystem::path>& path, const std::string& command)
{
    if (!path) return parse_config(json::object(), command);
    std::ifstream in(*path);
    if (!in) throw ValidationError("cannot read config " + path->string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config " + path->string() + " is not valid JSON: " + e.what());
    }
    return parse_config(doc, command);
}

namespace {

struct Globals {
    std::optional<std::filesystem::path> config;
    std::filesystem::path out_dir = "out";
    int threads = 1;
};

int cmd_params(double nu, double gamma, std::ostream& out)
{
    const MfdParams p = optimal_params(nu, gamma);
    out << "optimal parameters for nu = " << sig(nu) << ", gamma = " << sig(gamma) << "\n";
    out << "  w1 = " << sig(p.w1) << "\n  w2 = " << sig(p.w2) << "\n  w3 = " << sig(p.w3) << "\n";
    out << "optimal local W times 12 dx dy (nu_x = " << sig(nu) << ", nu_y = " << sig(nu / gamma)
        << "):\n";
    const LocalMatrix w = optimal_local_W(nu, nu / gamma, 1.0, 1.0) * 12.0;
    for (int r = 0; r < 4; ++r) {
        out << " ";
        for (int c = 0; c < 4; ++c) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), " %12s", sig(w(r, c)).c_str());
            out << buf;
        }
        out << "\n";
    }
    return 0;
}

int cmd_converge(const AppConfig& cfg, const Globals& g, std::ostream& out)
{
    ConvergenceStudyConfig study;
    study.setup = {cfg.medium, cfg.mode_x * std::numbers::pi, cfg.mode_y * std::numbers::pi,
                   cfg.nu, cfg.final_time, cfg.norm};
    study.h_list = cfg.h_list;
    for (const auto& s : cfg.schemes) study.schemes.push_back(scheme_by_name(s));
    study.threads = g.threads;
    const auto rows = convergence_study(study);
    const auto path = g.out_dir / "convergence.csv";
    write_convergence_csv(path, rows);

    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-8s %-7s %-5s %-12s %-8s %-12s %-8s\n", "log2_h", "scheme",
                  "field", "err_l2", "rate_l2", "err_disp", "rate_disp");
    out << buf;
    for (const auto& r : rows) {
        const auto rate = [](double v) { return std::isnan(v) ? std::string("-") : sig(v); };
        std::snprintf(buf, sizeof(buf), "%-8s %-7s %-5s %-12s %-8s %-12s %-8s\n",
                      sig(r.log2_h).c_str(), r.scheme.c_str(), r.field.c_str(),
                      sig(r.err_l2).c_str(), rate(r.rate_l2).c_str(), sig(r.err_disp).c_str(),
                      rate(r.rate_disp).c_str());
        out << buf;
    }
    out << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_anisotropy(const AppConfig& cfg, const Globals& g, std::ostream& out)
{
    const auto path = g.out_dir / "anisotropy.csv";
    auto csv = open_csv(path);
    csv << "theta,k,ppw,scheme,abs_err,re_err,im_err,gamma,nu,h\n";
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%-7s %-8s %-10s %-8s %-12s %-12s\n", "scheme", "gamma", "nu",
                  "ppw", "min|err|", "max|err|");
    out << buf;
    for (double gamma : cfg.gammas) {
        AnisotropySweepConfig sweep;
        sweep.thetas = uniform_theta_grid(cfg.theta_points);
        sweep.k = cfg.k;
        sweep.ppw = cfg.ppw;
        sweep.nu = cfg.scale_nu_by_gamma_cubed ? cfg.nu * std::min(gamma * gamma * gamma, 1.0)
                                               : cfg.nu;
        sweep.gamma = gamma;
        sweep.medium = cfg.medium;
        for (const auto& s : cfg.schemes) sweep.schemes.push_back(scheme_by_name(s));
        sweep.cell_area = cfg.cell_area;
        sweep.threads = g.threads;
        const auto rows = anisotropy_sweep(sweep);
        for (const auto& r : rows) {
            csv << full(r.theta) << ',' << full(r.k) << ',' << full(r.ppw) << ',' << r.scheme
                << ',' << full(std::abs(r.err)) << ',' << full(r.err.real()) << ','
                << full(r.err.imag()) << ',' << full(r.gamma) << ',' << full(sweep.nu) << ','
                << full(r.h) << '\n';
        }
        // Rows are grouped by (scheme, ppw) in blocks of theta_points.
        for (std::size_t start = 0; start < rows.size(); start += sweep.thetas.size()) {
            double lo = 1e300, hi = 0.0;
            for (std::size_t i = start; i < start + sweep.thetas.size(); ++i) {
                lo = std::min(lo, std::abs(rows[i].err));
                hi = std::max(hi, std::abs(rows[i].err));
            }
            std::snprintf(buf, sizeof(buf), "%-7s %-8s %-10s %-8s %-12s %-12s\n",
                          rows[start].scheme.c_str(), sig(gamma).c_str(), sig(sweep.nu).c_str(),
                          sig(rows[start].ppw).c_str(), sig(lo).c_str(), sig(hi).c_str());
            out << buf;
        }
    }
    out << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_simulate(const AppConfig& cfg, const Globals& g, std::ostream& out)
{
    const ExactSolution sol = ExactSolution::from_root(cfg.mode_x * std::numbers::pi,
                                                       cfg.mode_y * std::numbers::pi, cfg.medium);
    const RectMesh mesh(cfg.n, cfg.n, 1.0, 1.0, BoundaryMode::PEC);
    const NamedScheme scheme = scheme_by_name(cfg.scheme);
    SimConfig sim{mesh, cfg.medium, scheme.params(cfg.nu, mesh.gamma()), cfg.nu, cfg.final_time,
                  cfg.probes, cfg.snapshot_stride, Formulation::Hybrid};
    if (sim.probes.empty()) sim.probes = {select_probe_edge(mesh, sol)};

    const QuadratureRule j_rule = QuadratureRule::gauss(4);
    const RunResult result = run(sim, sol.initializers(sim.dt()), j_rule);
    write_probe_traces(g.out_dir / "probes.csv", result);
    for (const auto& snap : result.snapshots) {
        char name[32];
        std::snprintf(name, sizeof(name), "step_%06ld", snap.step);
        write_snapshot(g.out_dir / "snapshots" / name, mesh, snap, result.dt);
    }

    const double t = result.times.back();
    EdgeField e_ref = interpolate_edge_field(
        mesh, [&](double x, double y) { return sol.E(x, y, t); }, QuadratureRule::midpoint());
    EdgeField j_ref =
        interpolate_edge_field(mesh, [&](double x, double y) { return sol.J(x, y, t); }, j_rule);
    mesh.apply_pec(e_ref);
    mesh.apply_pec(j_ref);
    const SparseOperator mass = assemble_M(mesh, sim.params, cfg.norm);
    out << cfg.scheme << " on " << cfg.n << "x" << cfg.n << ", nu = " << sig(cfg.nu)
        << ", dt = " << sig(result.dt) << ", steps = " << result.times.size() - 1
        << ", t = " << sig(t) << "\n";
    out << "  relative L2 error E: " << sig(l2_relative_error(result.final_state.e_curr, e_ref, mass))
        << "\n  relative L2 error J: "
        << sig(l2_relative_error(result.final_state.j_curr, j_ref, mass)) << "\n";
    out << "  probes: " << result.probes.size() << ", snapshots: " << result.snapshots.size()
        << "\nwrote " << (g.out_dir / "probes.csv").string() << "\n";
    return 0;
}

int cmd_roots(const AppConfig& cfg, const Globals& g, std::ostream& out)
{
    const auto path = g.out_dir / "roots.csv";
    auto csv = open_csv(path);
    csv << "k,convention,index,re,im\n";
    for (double k : cfg.root_k) {
        out << "k = " << sig(k) << "\n";
        for (auto conv : {CubicConvention::Determinant, CubicConvention::NegatedLinear}) {
            const char* name = conv == CubicConvention::Determinant ? "determinant" : "negated_linear";
            const auto roots = continuous_roots(k, cfg.medium, conv);
            out << "  " << name << ":";
            for (int i = 0; i < 3; ++i) {
                out << "  " << sig(roots[i].real()) << (roots[i].imag() < 0 ? " - " : " + ")
                    << sig(std::abs(roots[i].imag())) << "i";
                csv << full(k) << ',' << name << ',' << i << ',' << full(roots[i].real()) << ','
                    << full(roots[i].imag()) << '\n';
            }
            out << "\n";
        }
        if (k > 0.0) {
            try {
                const Complex w = oscillatory_root(k, cfg.medium);
                out << "  propagating root: a = Im = " << sig(w.imag()) << ", b = Re = "
                    << sig(w.real()) << "\n";
            } catch (const NumericalError&) {
                out << "  propagating root: none (no oscillatory root)\n";
            }
        }
    }
    out << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_selftest(bool flip_w2, const Globals& g, std::ostream& out)
{
    std::vector<checks::CheckResult> results;
    const auto conv = checks::check_convergence(g.threads);
    results.push_back(conv.l2);
    results.push_back(conv.dispersion);
    results.push_back(checks::check_symbol_order(flip_w2));
    results.push_back(checks::check_oracles());
    results.push_back(checks::check_conductive_w2());
    results.push_back(checks::check_ode_exactness());
    bool ok = true;
    for (const auto& r : results) {
        out << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.title << ": " << r.detail << "\n";
        ok = ok && r.pass;
    }
    out << (ok ? "selftest passed" : "selftest FAILED") << "\n";
    return ok ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cold-plasma Maxwell solver (mimetic finite differences, exponential time "
                 "differencing)",
                 "etmfd"};
    Globals g;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.require_subcommand(1, 1);

    double nu = 0.5;
    double gamma = 1.0;
    auto* params = app.add_subcommand("params", "optimal parameters and local W");
    auto* nu_opt = params->add_option("--nu", nu, "Courant number")->capture_default_str();
    auto* gamma_opt = params->add_option("--gamma", gamma, "aspect ratio dy/dx")->capture_default_str();
    app.add_subcommand("converge", "convergence tables (L2 and fitted dispersion errors)");
    app.add_subcommand("anisotropy", "dispersion error versus propagation angle");
    app.add_subcommand("simulate", "run the standing-wave experiment with probes/snapshots");
    app.add_subcommand("roots", "continuous dispersion roots");
    bool flip_w2 = false;
    auto* selftest = app.add_subcommand("selftest", "oracle and convergence self-checks");
    selftest->add_flag("--inject-w2-sign-flip", flip_w2,
                       "negate w2 of the optimal member (the symbol-order check must fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    if (!config_path.empty()) g.config = config_path;

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        AppConfig cfg = load_config(g.config, command);
        if (command == "params") {
            if (nu_opt->count() == 0) nu = cfg.nu;
            if (gamma_opt->count() == 0) gamma = cfg.gamma;
            return cmd_params(nu, gamma, out);
        }
        if (command == "converge") return cmd_converge(cfg, g, out);
        if (command == "anisotropy") return cmd_anisotropy(cfg, g, out);
        if (command == "simulate") return cmd_simulate(cfg, g, out);
        if (command == "roots") return cmd_roots(cfg, g, out);
        return cmd_selftest(flip_w2, g, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace etmfd::cli
