#include "lscp/lscp.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace lscp;

namespace {

// Accepts a 1-d array (one column) or a 2-d array with observations in rows.
RawSeries to_series(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() == 1) {
        return RawSeries::from_values(std::span<const double>(arr.data(), static_cast<std::size_t>(arr.shape(0))));
    }
    if (arr.ndim() != 2) {
        throw Error(ErrorCode::InvalidArgument, "expected a 1-d or 2-d array");
    }
    Matrix m = Eigen::Map<const Matrix>(arr.data(), arr.shape(0), arr.shape(1));
    return RawSeries(std::move(m));
}

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::array_t<double> column_or_matrix(const Matrix& m) {
    if (m.cols() == 1) {
        return py::array_t<double>(m.rows(), m.data());
    }
    return py::array_t<double>({m.rows(), m.cols()}, m.data());
}

TestOptions make_options(double c, std::size_t boot_m, std::uint64_t seed, const std::vector<double>& levels,
                         const std::string& weight, std::optional<std::size_t> bandwidth,
                         std::optional<std::size_t> lag) {
    TestOptions o;
    o.lag_factor = c;
    o.boot_m = boot_m;
    o.seed = seed;
    o.levels = levels;
    o.weight = parse_bootstrap_weight(weight);
    o.bandwidth = bandwidth;
    o.lag = lag;
    return o;
}

McScenario make_scenario(const std::string& model, const std::string& hypothesis, std::size_t n, std::size_t reps,
                         std::size_t boot_m, double c, std::uint64_t seed, const std::vector<double>& levels,
                         std::size_t threads) {
    McScenario s;
    if (model == "tvar-autocorr") {
        s.model = McModel::TvarAutocorr;
    } else if (model == "regression-coef") {
        s.model = McModel::RegressionCoef;
    } else {
        throw Error(ErrorCode::InvalidArgument, "model must be 'tvar-autocorr' or 'regression-coef'");
    }
    s.hypothesis = design::parse_hypothesis(hypothesis);
    s.n = n;
    s.reps = reps;
    s.boot_m = boot_m;
    s.c = c;
    s.master_seed = seed;
    s.levels = levels;
    s.threads = threads;
    return s;
}

py::dict estimation_dict(const Estimation& est) {
    py::dict d;
    d["m"] = est.m();
    d["lag"] = est.config.lag;
    d["block"] = est.config.block;
    d["bandwidth"] = est.config.k;
    d["tau"] = est.config.tau;
    d["u_n"] = est.u_n;
    d["integrated"] = to_array(est.integrated.values());
    d["plugin"] = to_array(est.plugin.values());
    d["variance"] = to_array(est.variance.values());
    d["block_sums"] = to_array(est.sums);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Estimation and bootstrap CUSUM tests for integrated parameters";
    py::register_exception<Error>(m, "LscpError", PyExc_ValueError);

    m.def(
        "simulate",
        [](const std::string& model, const std::string& scenario, std::size_t n, std::uint64_t seed) {
            const auto h = design::parse_hypothesis(scenario);
            if (model == "tvar") return column_or_matrix(simulate_tvar(design::tvar(h, n), seed).data());
            if (model == "regression") {
                return column_or_matrix(simulate_regression(design::regression(h, n), seed).combined().data());
            }
            throw Error(ErrorCode::InvalidArgument, "model must be 'tvar' or 'regression'");
        },
        py::arg("model") = "tvar", py::arg("scenario") = "h0", py::arg("n") = 1000, py::arg("seed") = 1,
        "Series from a built-in design. Regression output columns are (z, w1, w2).");

    m.def(
        "simulate_tvar",
        [](std::size_t n, const std::function<double(double)>& a, const std::function<double(double)>& sigma,
           const std::function<double(double)>& alpha, bool gaussian, std::uint64_t seed) {
            TvarSpec spec;
            spec.n = n;
            spec.a = a;
            spec.sigma = sigma;
            spec.alpha = alpha;
            spec.innovation = gaussian ? Innovation::Gaussian : Innovation::SymmetrizedGamma;
            return column_or_matrix(simulate_tvar(spec, seed).data());
        },
        py::arg("n"), py::arg("a"), py::arg("sigma"), py::arg("alpha"), py::arg("gaussian") = false,
        py::arg("seed") = 1, "tvAR(1) path with user coefficient functions of u in [0, 1].");

    m.def(
        "run_test",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, const std::string& functional,
           double c, std::size_t boot_m, std::uint64_t seed, const std::vector<double>& levels,
           const std::string& weight, std::optional<std::size_t> bandwidth, std::optional<std::size_t> lag) {
            const RawSeries raw = to_series(x);
            TestReport report =
                run_test(raw, functional, make_options(c, boot_m, seed, levels, weight, bandwidth, lag));
            py::dict d = py::module_::import("json").attr("loads")(report_to_json(report));
            d["integrated_path"] = to_array(report.integrated.values());
            d["cusum_path"] = to_array(report.cusum_path.values());
            return d;
        },
        py::arg("x"), py::arg("functional") = "autocorr:1", py::arg("c") = 0.1, py::arg("boot_m") = 1000,
        py::arg("seed") = 1, py::arg("levels") = std::vector<double>{0.05, 0.10}, py::arg("weight") = "adjusted",
        py::arg("bandwidth") = py::none(), py::arg("lag") = py::none(),
        "Bootstrap CUSUM test; returns the report as a dict with the M_n and T_n paths.");

    m.def(
        "estimate",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, const std::string& functional,
           double c, std::optional<std::size_t> bandwidth, std::optional<std::size_t> lag) {
            const RawSeries raw = to_series(x);
            const auto f = make_functional(functional, raw.dim());
            return estimation_dict(estimate(raw, f, make_options(c, 1, 1, {0.1}, "adjusted", bandwidth, lag)));
        },
        py::arg("x"), py::arg("functional") = "autocorr:1", py::arg("c") = 0.1, py::arg("bandwidth") = py::none(),
        py::arg("lag") = py::none(), "M_n, plug-in and Q_n paths without the bootstrap.");

    m.def(
        "functional_value",
        [](const std::string& spec, std::size_t raw_dim, const Vector& mu) {
            return make_functional(spec, raw_dim).value(mu);
        },
        py::arg("spec"), py::arg("raw_dim"), py::arg("mu"));
    m.def(
        "functional_gradient",
        [](const std::string& spec, std::size_t raw_dim, const Vector& mu) {
            return Vector(make_functional(spec, raw_dim).gradient(mu));
        },
        py::arg("spec"), py::arg("raw_dim"), py::arg("mu"));

    m.def(
        "nw_pilot",
        [](const Matrix& y, std::size_t k) { return Matrix(nw_pilot(LiftedSeries{y, 0}, k).mu_hat); },
        py::arg("y"), py::arg("k"), "One-sided window means of a lifted series (rows are times).");
    m.def(
        "cv_bandwidth",
        [](const Matrix& y, std::size_t lag, std::vector<std::size_t> grid) {
            const LiftedSeries lifted{y, 0};
            if (grid.empty()) grid = default_bandwidth_grid(lifted.m());
            return cv_bandwidth(lifted, lag, grid);
        },
        py::arg("y"), py::arg("lag"), py::arg("grid") = std::vector<std::size_t>{});
    m.def("default_bandwidth_grid", &default_bandwidth_grid, py::arg("m"), py::arg("count") = 25);

    m.def(
        "log_returns",
        [](const std::vector<double>& prices) { return column_or_matrix(log_returns(PriceSeries{prices, {}}).data()); },
        py::arg("prices"));
    m.def(
        "arctan_transform",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, double gamma) {
            return column_or_matrix(arctan_transform(to_series(x), gamma).data());
        },
        py::arg("x"), py::arg("gamma"));

    m.def(
        "stability_check",
        [](const std::function<Eigen::MatrixXd(double)>& a, std::size_t grid, std::size_t horizon) {
            const auto r = stability_check(a, grid, horizon);
            py::dict d;
            d["rho_max"] = r.rho_max;
            d["decay_ok"] = r.decay_ok;
            d["k_hat"] = r.k_hat;
            return d;
        },
        py::arg("a"), py::arg("grid") = 1001, py::arg("horizon") = 100);

    m.def(
        "size_power_cell",
        [](const std::string& model, const std::string& hypothesis, std::size_t n, std::size_t reps,
           std::size_t boot_m, double c, std::uint64_t seed, const std::vector<double>& levels, std::size_t threads) {
            const auto s = make_scenario(model, hypothesis, n, reps, boot_m, c, seed, levels, threads);
            SizePowerCell cell;
            {
                py::gil_scoped_release release;
                cell = size_power_cell(s);
            }
            py::dict d;
            d["rejection_rate"] = cell.rejection_rate;
            d["p_values"] = to_array(cell.p_values);
            d["mean_runtime_seconds"] = cell.mean_runtime_seconds;
            return d;
        },
        py::arg("model") = "tvar-autocorr", py::arg("hypothesis") = "h0", py::arg("n") = 1000,
        py::arg("reps") = 500, py::arg("boot_m") = 200, py::arg("c") = 0.1, py::arg("seed") = 1,
        py::arg("levels") = std::vector<double>{0.05, 0.10}, py::arg("threads") = 0);

    m.def(
        "estimator_error_cell",
        [](const std::string& model, const std::string& hypothesis, std::size_t n, std::size_t reps, double c,
           std::uint64_t seed, std::size_t threads) {
            const auto s = make_scenario(model, hypothesis, n, reps, 1, c, seed, {0.1}, threads);
            EstimatorErrorCell cell;
            {
                py::gil_scoped_release release;
                cell = estimator_error_cell(s);
            }
            py::dict d;
            d["target"] = cell.target;
            d["linearized"] = py::dict(py::arg("mae") = cell.linearized.mae, py::arg("bias") = cell.linearized.bias);
            d["plugin"] = py::dict(py::arg("mae") = cell.plugin.mae, py::arg("bias") = cell.plugin.bias);
            return d;
        },
        py::arg("model") = "tvar-autocorr", py::arg("hypothesis") = "h0", py::arg("n") = 1000,
        py::arg("reps") = 500, py::arg("c") = 0.1, py::arg("seed") = 1, py::arg("threads") = 0);

    m.def(
        "pvalue_histogram",
        [](std::size_t n, std::size_t reps, std::size_t boot_m, double c, std::uint64_t seed, std::size_t threads) {
            const auto s = make_scenario("tvar-autocorr", "h0", n, reps, boot_m, c, seed, {0.1}, threads);
            PValueHistogram h;
            {
                py::gil_scoped_release release;
                h = pvalue_histogram(s);
            }
            return py::make_tuple(to_array(h.p_values), h.ks_distance);
        },
        py::arg("n") = 1000, py::arg("reps") = 500, py::arg("boot_m") = 200, py::arg("c") = 0.1, py::arg("seed") = 1,
        py::arg("threads") = 0);
}
