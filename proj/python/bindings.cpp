#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "etmfd/analysis.hpp"
#include "etmfd/dispersion.hpp"
#include "etmfd/operators.hpp"
#include "etmfd/plasma.hpp"
#include "etmfd/stepper.hpp"

namespace py = pybind11;
using namespace etmfd;

namespace {

NamedScheme scheme_by_name(const std::string& name)
{
    if (name == "ETMFD") return etmfd_scheme();
    if (name == "ET-Yee") return et_yee_scheme();
    throw ValidationError("unknown scheme '" + name + "' (expected ETMFD or ET-Yee)");
}

}  // namespace

PYBIND11_MODULE(etmfd, m)
{
    m.doc() = "Cold-plasma Maxwell solver: mimetic finite differences with exponential time "
              "differencing, dispersion analysis and convergence studies.";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<Medium>(m, "Medium")
        .def(py::init([](double eps0, double c0, double omega_i, double omega_p) {
                 return Medium{eps0, c0, omega_i, omega_p};
             }),
             py::arg("eps0") = 1.0, py::arg("c0") = 1.0, py::arg("omega_i") = 1.0,
             py::arg("omega_p") = 1.0)
        .def_readwrite("eps0", &Medium::eps0)
        .def_readwrite("c0", &Medium::c0)
        .def_readwrite("omega_i", &Medium::omega_i)
        .def_readwrite("omega_p", &Medium::omega_p)
        .def("validate", &Medium::validate)
        .def("alpha", &Medium::alpha)
        .def("beta", &Medium::beta);

    py::class_<MfdParams>(m, "MfdParams")
        .def(py::init([](double w1, double w2, double w3) { return MfdParams{w1, w2, w3}; }),
             py::arg("w1") = 0.25, py::arg("w2") = 0.0, py::arg("w3") = 0.25)
        .def_readwrite("w1", &MfdParams::w1)
        .def_readwrite("w2", &MfdParams::w2)
        .def_readwrite("w3", &MfdParams::w3)
        .def("__repr__", [](const MfdParams& p) {
            return "MfdParams(w1=" + std::to_string(p.w1) + ", w2=" + std::to_string(p.w2) +
                   ", w3=" + std::to_string(p.w3) + ")";
        });

    m.def("yee_params", &yee_params);
    m.def("optimal_params", &optimal_params, py::arg("nu"), py::arg("gamma") = 1.0);
    m.def("local_W", [](const MfdParams& p, double dx, double dy) -> Eigen::MatrixXd {
        return local_W(p, dx, dy);
    });
    m.def("optimal_local_W", [](double nu_x, double nu_y, double dx, double dy) -> Eigen::MatrixXd {
        return optimal_local_W(nu_x, nu_y, dx, dy);
    });

    py::class_<ExpOperators>(m, "ExpOperators")
        .def_readonly("alpha1", &ExpOperators::alpha1)
        .def_readonly("alpha2", &ExpOperators::alpha2)
        .def_readonly("beta1", &ExpOperators::beta1)
        .def_readonly("beta2", &ExpOperators::beta2)
        .def_readonly("alpha3", &ExpOperators::alpha3)
        .def_readonly("alpha4", &ExpOperators::alpha4)
        .def_readonly("beta3", &ExpOperators::beta3)
        .def_readonly("beta4", &ExpOperators::beta4)
        .def_readonly("dt", &ExpOperators::dt)
        .def("exponential", [](const ExpOperators& o) -> Eigen::MatrixXd { return o.exponential(); })
        .def("integral", [](const ExpOperators& o) -> Eigen::MatrixXd { return o.integral(); });
    m.def("exp_operators", &exp_operators, py::arg("medium"), py::arg("dt"));
    m.def("coupling_matrix", [](const Medium& md) -> Eigen::MatrixXd { return coupling_matrix(md); });

    m.def(
        "spatial_symbol",
        [](double k, double theta, double h, double gamma, const MfdParams& p, double c0) {
            return spatial_symbol({k, theta}, h, gamma, p, c0);
        },
        py::arg("k"), py::arg("theta"), py::arg("h"), py::arg("gamma"), py::arg("params"),
        py::arg("c0") = 1.0);
    m.def(
        "temporal_symbol",
        [](Complex omega, const Medium& md, double dt) -> Eigen::MatrixXcd {
            return temporal_symbol(omega, md, dt);
        },
        py::arg("omega"), py::arg("medium"), py::arg("dt"));
    m.def(
        "relative_dispersion_error",
        [](Complex omega, double k, double theta, const Medium& md, double dt, double h,
           double gamma, const MfdParams& p) {
            return relative_dispersion_error(omega, {k, theta}, md, dt, h, gamma, p);
        },
        py::arg("omega"), py::arg("k"), py::arg("theta"), py::arg("medium"), py::arg("dt"),
        py::arg("h"), py::arg("gamma"), py::arg("params"));
    m.def(
        "continuous_roots",
        [](double k, const Medium& md, const std::string& convention) {
            if (convention != "determinant" && convention != "negated_linear") {
                throw ValidationError("convention must be 'determinant' or 'negated_linear'");
            }
            const auto r = continuous_roots(k, md,
                                            convention == "determinant"
                                                ? CubicConvention::Determinant
                                                : CubicConvention::NegatedLinear);
            return std::vector<Complex>(r.begin(), r.end());
        },
        py::arg("k"), py::arg("medium"), py::arg("convention") = "determinant");
    m.def("oscillatory_root", &oscillatory_root, py::arg("k"), py::arg("medium"));
    m.def("conductive_zeroing_w2", &conductive_zeroing_w2, py::arg("omega"), py::arg("tau"),
          py::arg("nu"), py::arg("gamma"));
    m.def("conductive_leapfrog_residual", &conductive_leapfrog_residual, py::arg("omega"),
          py::arg("tau"), py::arg("nu"), py::arg("gamma"), py::arg("w2"), py::arg("c0") = 1.0);

    m.def(
        "anisotropy_sweep",
        [](int theta_points, double k, std::vector<double> ppw, double nu, double gamma,
           const Medium& md, std::vector<std::string> schemes, int threads) {
            AnisotropySweepConfig cfg;
            cfg.thetas = uniform_theta_grid(theta_points);
            cfg.k = k;
            cfg.ppw = std::move(ppw);
            cfg.nu = nu;
            cfg.gamma = gamma;
            cfg.medium = md;
            for (const auto& s : schemes) cfg.schemes.push_back(scheme_by_name(s));
            cfg.threads = threads;
            py::list out;
            for (const auto& r : anisotropy_sweep(cfg)) {
                py::dict row;
                row["scheme"] = r.scheme;
                row["theta"] = r.theta;
                row["ppw"] = r.ppw;
                row["h"] = r.h;
                row["err"] = r.err;
                out.append(row);
            }
            return out;
        },
        py::arg("theta_points") = 72, py::arg("k") = 4.0,
        py::arg("ppw") = std::vector<double>{12.0, 24.0}, py::arg("nu") = 0.5,
        py::arg("gamma") = 1.0, py::arg("medium") = Medium{},
        py::arg("schemes") = std::vector<std::string>{"ETMFD", "ET-Yee"}, py::arg("threads") = 1);

    py::class_<ExactSolution>(m, "ExactSolution")
        .def_static("from_root", &ExactSolution::from_root, py::arg("kx"), py::arg("ky"),
                    py::arg("medium"))
        .def_readonly("kx", &ExactSolution::kx)
        .def_readonly("ky", &ExactSolution::ky)
        .def_readonly("a", &ExactSolution::a)
        .def_readonly("b", &ExactSolution::b)
        .def("E", [](const ExactSolution& s, double x, double y, double t) -> Eigen::VectorXd {
            return s.E(x, y, t);
        })
        .def("J", [](const ExactSolution& s, double x, double y, double t) -> Eigen::VectorXd {
            return s.J(x, y, t);
        });

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("a_h", &FitResult::a_h)
        .def_readonly("b_h", &FitResult::b_h)
        .def_readonly("rms_residual", &FitResult::rms_residual)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("converged", &FitResult::converged);
    m.def(
        "fit_damped_cosine",
        [](const std::vector<double>& trace, double dt, const std::string& model,
           double amplitude, const Medium& md, double a_guess, double b_guess) {
            if (model != "E" && model != "J") throw ValidationError("model must be 'E' or 'J'");
            return fit_damped_cosine(trace, dt, model == "E" ? FitModel::EField : FitModel::JField,
                                     amplitude, md, a_guess, b_guess);
        },
        py::arg("trace"), py::arg("dt"), py::arg("model") = "E", py::arg("amplitude") = 1.0,
        py::arg("medium") = Medium{}, py::arg("a_guess") = 0.0, py::arg("b_guess") = 1.0);
    m.def("dispersion_error_metric", &dispersion_error_metric, py::arg("fit"), py::arg("a"),
          py::arg("b"));

    m.def(
        "measure_experiment",
        [](const std::string& scheme, int n, double nu, double final_time, const Medium& md) {
            ExperimentSetup setup;
            setup.medium = md;
            setup.nu = nu;
            setup.final_time = final_time;
            const auto r = measure_experiment(setup, scheme_by_name(scheme), n);
            py::dict out;
            out["n"] = r.n;
            out["h"] = r.h;
            out["scheme"] = r.scheme;
            out["final_time"] = r.final_time;
            out["probe_edge"] = r.probe_edge;
            out["l2_e"] = r.l2_e;
            out["l2_j"] = r.l2_j;
            out["disp_e"] = r.disp_e;
            out["disp_j"] = r.disp_j;
            return out;
        },
        py::arg("scheme"), py::arg("n"), py::arg("nu") = 0.5, py::arg("final_time") = 4.0,
        py::arg("medium") = Medium{});

    m.def(
        "convergence_study",
        [](std::vector<double> h_list, std::vector<std::string> schemes, double nu,
           double final_time, int threads) {
            ConvergenceStudyConfig cfg;
            cfg.h_list = std::move(h_list);
            for (const auto& s : schemes) cfg.schemes.push_back(scheme_by_name(s));
            cfg.setup.nu = nu;
            cfg.setup.final_time = final_time;
            cfg.threads = threads;
            py::list out;
            for (const auto& r : convergence_study(cfg)) {
                py::dict row;
                row["log2_h"] = r.log2_h;
                row["scheme"] = r.scheme;
                row["field"] = r.field;
                row["err_l2"] = r.err_l2;
                row["rate_l2"] = r.rate_l2;
                row["err_disp"] = r.err_disp;
                row["rate_disp"] = r.rate_disp;
                out.append(row);
            }
            return out;
        },
        py::arg("h_list") = std::vector<double>{1.0 / 16, 1.0 / 32, 1.0 / 64},
        py::arg("schemes") = std::vector<std::string>{"ETMFD", "ET-Yee"}, py::arg("nu") = 0.5,
        py::arg("final_time") = 4.0, py::arg("threads") = 1);
}
