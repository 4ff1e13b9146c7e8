#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "gnv/cli.hpp"
#include "gnv/config.hpp"
#include "gnv/errors.hpp"
#include "gnv/estimators.hpp"
#include "gnv/kernels.hpp"
#include "gnv/mc.hpp"
#include "gnv/report.hpp"
#include "gnv/sampler.hpp"
#include "gnv/vasicek.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::object from_json(const nlohmann::json& doc) {
    return py::module_::import("json").attr("loads")(doc.dump());
}

nlohmann::json to_json(const py::dict& d) {
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(d).cast<std::string>());
}

gnv::GaussianPath sample(const gnv::Kernel& kernel, double T, double dt, std::uint64_t seed,
                         const std::string& method) {
    const gnv::Grid grid = gnv::Grid::from_horizon(T, dt);
    const bool circulant = method == "auto" ? kernel.name == "fbm" : gnv::parse_sampler_method(method) == gnv::SamplerMethod::circulant;
    if (circulant) {
        if (kernel.name != "fbm") {
            throw gnv::DomainError("circulant sampling needs stationary increments (fbm kernel)");
        }
        return gnv::sample_fgn_circulant(kernel.beta, grid.n(), grid.dt(), seed);
    }
    return gnv::sample_path_cholesky(kernel, grid, seed);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Vasicek model driven by Gaussian noise: simulation and parameter estimation";

    auto base = py::register_exception<gnv::Error>(m, "GnvError", PyExc_RuntimeError);
    py::register_exception<gnv::DomainError>(m, "DomainError", base.ptr());
    py::register_exception<gnv::NumericError>(m, "NumericError", base.ptr());
    py::register_exception<gnv::DecompositionError>(m, "DecompositionError", base.ptr());
    py::register_exception<gnv::EmbeddingError>(m, "EmbeddingError", base.ptr());
    py::register_exception<gnv::IntegrationError>(m, "IntegrationError", base.ptr());
    py::register_exception<gnv::NonPositiveVariance>(m, "NonPositiveVariance", base.ptr());
    py::register_exception<gnv::DegenerateDesign>(m, "DegenerateDesign", base.ptr());
    py::register_exception<gnv::StiffnessError>(m, "StiffnessError", base.ptr());
    py::register_exception<gnv::ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<gnv::IoError>(m, "IoError", base.ptr());
    py::register_exception<gnv::ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<gnv::ExperimentError>(m, "ExperimentError", base.ptr());

    py::class_<gnv::Kernel>(m, "Kernel")
        .def(py::init([](const std::string& name, double hurst) { return gnv::make_kernel(name, hurst); }),
             "name"_a, "H"_a)
        .def_readonly("name", &gnv::Kernel::name)
        .def_readonly("beta", &gnv::Kernel::beta)
        .def_readonly("c_beta", &gnv::Kernel::c_beta)
        .def_readonly("c_beta_prime", &gnv::Kernel::c_beta_prime)
        .def("R", &gnv::Kernel::R, "t"_a, "s"_a)
        .def("phi", &gnv::Kernel::phi, "t"_a, "s"_a)
        .def("perturbation", &gnv::Kernel::perturbation, "t"_a, "s"_a)
        .def("__repr__", [](const gnv::Kernel& k) {
            return "Kernel('" + k.name + "', H=" + gnv::format_double(k.beta) + ")";
        });

    m.def("check_assumption", [](const gnv::Kernel& kernel, double T, double dt) {
        const auto r = gnv::check_assumption(kernel, gnv::Grid::from_horizon(T, dt));
        return py::dict("max_ratio"_a = r.max_ratio, "worst_t"_a = r.worst_t, "worst_s"_a = r.worst_s,
                        "bound"_a = r.bound, "passes"_a = r.passes,
                        "max_phi_fd_rel_error"_a = r.max_phi_fd_rel_error);
    }, "kernel"_a, "T"_a = 5.0, "dt"_a = 0.1);

    m.def("increment_bound_constant", &gnv::increment_bound_constant, "kernel"_a);

    m.def("sample_noise", [](const gnv::Kernel& kernel, double T, double dt, std::uint64_t seed,
                             const std::string& method) {
        return to_array(sample(kernel, T, dt, seed, method).values);
    }, "kernel"_a, "T"_a, "dt"_a, "seed"_a = 0, "method"_a = "auto",
       "Noise path on the grid 0, dt, ..., T; method is auto, cholesky or circulant.");

    m.def("simulate", [](const std::vector<double>& g, double dt, double k, double mu, double sigma,
                         const std::string& scheme, double x0) {
        if (g.size() < 2) {
            throw gnv::ShapeError("noise path needs at least two grid points");
        }
        const gnv::Grid grid(g.size() - 1, dt);
        return to_array(gnv::simulate_vasicek({k, mu, sigma}, grid, g, gnv::parse_scheme(scheme), x0).values);
    }, "G"_a, "dt"_a, "k"_a, "mu"_a, "sigma"_a = 1.0, "scheme"_a = "exact_recursion", "x0"_a = 0.0);

    m.def("estimate", [](const std::vector<double>& x, double dt, const gnv::Kernel& kernel,
                         const std::string& mode, std::optional<double> k, double sigma) {
        const auto e = gnv::estimate_all(x, dt, kernel, gnv::parse_integral_mode(mode), k, sigma);
        return py::dict("mode"_a = std::string(gnv::to_string(e.mode)), "mu_hat"_a = e.mu_hat,
                        "k_hat"_a = e.k_hat, "mu_ls"_a = e.mu_ls, "k_ls"_a = e.k_ls,
                        "correction"_a = e.diagnostics.correction, "xdx"_a = e.diagnostics.xdx);
    }, "X"_a, "dt"_a, "kernel"_a, "mode"_a = "pathwise", "k"_a = py::none(), "sigma"_a = 1.0);

    m.def("skorohod_correction", &gnv::skorohod_correction, "kernel"_a, "k"_a, "T"_a);
    m.def("stationary_variance", &gnv::stationary_variance, "kernel"_a, "k"_a);
    m.def("asymptotic_constants", [](const gnv::Kernel& kernel, double k) {
        const auto c = gnv::asymptotic_constants(kernel, k);
        return py::dict("a"_a = c.a, "sigma_beta_sq"_a = c.sigma_beta_sq, "var_mu"_a = c.var_mu,
                        "var_k_moment_a"_a = c.var_k_moment_a, "var_k_moment_b"_a = c.var_k_moment_b,
                        "var_k_moment_c"_a = c.var_k_moment_c, "var_k_ls"_a = c.var_k_ls);
    }, "kernel"_a, "k"_a);

    m.def("run_experiment", [](const py::dict& config, unsigned threads, std::optional<std::string> out_dir) {
        const auto cfg = gnv::config_from_json(to_json(config));
        std::vector<gnv::ReplicationRecord> records;
        {
            py::gil_scoped_release release;
            records = gnv::run_experiment(cfg, threads);
        }
        const auto summary = gnv::summarize(records, cfg);
        if (out_dir) {
            gnv::emit_report(summary, records, cfg, *out_dir);
        }
        std::ostringstream csv;
        gnv::write_replications_csv(csv, records);
        return py::make_tuple(from_json(gnv::summary_to_json(summary, cfg)), csv.str());
    }, "config"_a, "threads"_a = 0, "out_dir"_a = py::none(),
       "Run a Monte Carlo study; returns (summary, replications CSV text).");

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = gnv::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, "args"_a, "Run the gnv command line; returns (exit code, stdout, stderr).");
}
