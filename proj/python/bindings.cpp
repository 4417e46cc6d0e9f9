#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/numpy.h>

#include "lrdcma/cli.hpp"
#include "lrdcma/config.hpp"
#include "lrdcma/error.hpp"
#include "lrdcma/estimate.hpp"
#include "lrdcma/kernel.hpp"
#include "lrdcma/levy.hpp"
#include "lrdcma/limits.hpp"
#include "lrdcma/mc.hpp"
#include "lrdcma/simulate.hpp"

namespace py = pybind11;
using namespace lrdcma;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Long-memory continuous-time moving averages: simulation, estimators and limit laws";

    py::register_exception<ParameterError>(mod, "ParameterError", PyExc_ValueError);
    py::register_exception<NumericError>(mod, "NumericError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
    py::register_exception<StateError>(mod, "StateError", PyExc_RuntimeError);

    py::class_<LevyModel>(mod, "LevyModel")
        .def(py::init<>())
        .def_readwrite("brownian_sd", &LevyModel::brownian_sd)
        .def_readwrite("jump_rate", &LevyModel::jump_rate)
        .def_readwrite("alpha", &LevyModel::alpha)
        .def_readwrite("x0", &LevyModel::x0)
        .def_readwrite("bounded_jumps", &LevyModel::bounded_jumps)
        .def("validate", &LevyModel::validate);
    mod.def("brownian", &brownian, py::arg("sd") = 1.0);
    mod.def("pareto_jumps", &pareto_jumps, py::arg("rate"), py::arg("alpha"), py::arg("x0") = 1.0,
            py::arg("bounded") = false);
    mod.def("variance", &variance);
    mod.def("sample_increments", [](const LevyModel& m, double dt, std::size_t n, std::uint64_t seed) {
        return to_array(sample_increments(m, dt, n, seed));
    });

    py::class_<Kernel>(mod, "Kernel")
        .def("__call__", [](const Kernel& k, double t) { return k(t); })
        .def_property_readonly("d", &Kernel::d)
        .def_property_readonly("C_d", &Kernel::C_d)
        .def_property_readonly("variant", [](const Kernel& k) { return to_string(k.variant()); });
    mod.def(
        "make_kernel",
        [](const std::string& variant, double d, double C_d, std::vector<double> a, std::vector<double> b) {
            KernelSpec s;
            s.variant = kernel_variant_from_string(variant);
            s.d = d;
            s.C_d = C_d;
            s.a = std::move(a);
            s.b = std::move(b);
            return Kernel(s);
        },
        py::arg("variant") = "power_law", py::arg("d") = 0.3, py::arg("C_d") = 1.0,
        py::arg("a") = std::vector<double>{}, py::arg("b") = std::vector<double>{});
    mod.def("autocovariance", [](const Kernel& k, double sigma2, double h) { return autocovariance(k, sigma2, h); });
    mod.def("step_autocovariance_sequence", [](const Kernel& k, double sigma2, int m, long H) {
        return to_array(step_autocovariance_sequence(k, sigma2, m, H));
    });

    mod.def(
        "simulate",
        [](const Kernel& k, const LevyModel& model, int m, long N, long H, std::uint64_t seed, bool far_past) {
            SimulationGrid g;
            g.m = m;
            g.N = N;
            g.H = H;
            g.far_past = far_past;
            return to_array(simulate_path(k, model, g, seed).values);
        },
        py::arg("kernel"), py::arg("model"), py::arg("m") = 1, py::arg("N") = 1024, py::arg("H") = 0,
        py::arg("seed") = 1, py::arg("far_past") = true);

    mod.def("sample_acv", [](const std::vector<double>& x, long N, long H) { return sample_acv(x, N, H).gamma_hat; });
    mod.def("estimate_d", [](double rho1) {
        const auto e = estimate_d(rho1);
        return py::make_tuple(e.value, e.in_range);
    });
    mod.def("classify_regime", [](double d, const LevyModel& m) { return to_string(classify_regime(d, m)); });
    mod.def(
        "theoretical_limits",
        [](const Kernel& k, const LevyModel& m, long H, int mesh) {
            LimitOptions opt;
            opt.mesh = mesh;
            const auto law = theoretical_limits(k, m, H, opt);
            py::dict out;
            out["regime"] = to_string(law.regime);
            out["scaling"] = to_string(law.scaling);
            out["rate_exponent"] = law.rate_exponent;
            out["reason"] = law.reason;
            out["coefficient"] = law.coefficient;
            std::vector<std::vector<double>> V(static_cast<std::size_t>(law.V.rows()));
            for (Eigen::Index i = 0; i < law.V.rows(); ++i)
                for (Eigen::Index j = 0; j < law.V.cols(); ++j) V[static_cast<std::size_t>(i)].push_back(law.V(i, j));
            out["V"] = V;
            return out;
        },
        py::arg("kernel"), py::arg("model"), py::arg("H") = 0, py::arg("mesh") = 0);

    mod.def("rosenblatt_variance", &rosenblatt_variance);
    mod.def(
        "rosenblatt_draws",
        [](double d, std::size_t n, std::uint64_t seed, long n_grid, int threads) {
            RosenblattOptions o;
            o.n_grid = n_grid;
            return to_array(RosenblattSampler(d, o).draws(n, seed, threads));
        },
        py::arg("d"), py::arg("n"), py::arg("seed") = 1, py::arg("n_grid") = 1024, py::arg("threads") = 1);
    mod.def("sample_stable",
            [](double alpha, double tau, double beta, double mu, std::uint64_t seed) {
                return sample_stable(alpha, tau, beta, mu, seed);
            });

    mod.def("ks_two_sample", [](const std::vector<double>& a, const std::vector<double>& b) { return ks_two_sample(a, b); });
    mod.def("hill_tail_index", [](const std::vector<double>& x, std::size_t k) { return hill_tail_index(x, k); });

    mod.def("parse_config_text", [](const std::string& text) {
        const RunConfig c = parse_config_text(text);
        py::dict out;
        out["hash"] = c.hash;
        out["seed"] = c.seed;
        out["canonical"] = c.canonical_text();
        return out;
    });
    mod.def(
        "run_experiment",
        [](const std::string& config_text, int threads) {
            RunConfig c = parse_config_text(config_text);
            c.experiment.threads = threads;
            ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = run_experiment(c.experiment);
            }
            py::dict out;
            out["regime"] = to_string(r.regime);
            out["scale"] = r.scale;
            out["lags"] = r.lags;
            out["scaled"] = r.scaled;
            out["raw"] = r.raw;
            out["config_hash"] = c.hash;
            return out;
        },
        py::arg("config_text"), py::arg("threads") = 1);

    mod.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });

#ifdef VERSION_INFO
#define LRDCMA_STR2(x) #x
#define LRDCMA_STR(x) LRDCMA_STR2(x)
    mod.attr("__version__") = LRDCMA_STR(VERSION_INFO);
#else
    mod.attr("__version__") = "dev";
#endif
}
