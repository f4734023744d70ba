#include "lscp/cusum.hpp"

#include "lscp/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lscp {

StepProcess cusum_process(const StepProcess& integrated, double u_n) {
    if (!(u_n >= 0.0 && u_n < 1.0)) {
        throw Error(ErrorCode::InvalidOffset, "u_n must lie in [0, 1), got " + std::to_string(u_n));
    }
    const std::size_t n = integrated.n();
    const double end = integrated.final_value();
    std::vector<double> values(n + 1);
    for (std::size_t t = 0; t <= n; ++t) {
        const double u = n > 0 ? static_cast<double>(t) / static_cast<double>(n) : 1.0;
        values[t] = integrated[t] - bridge_weight(u, u_n, BootstrapWeight::Adjusted) * end;
    }
    values[n] = 0.0;  // w(1) = 1 exactly; avoid a rounding residue.
    return StepProcess(std::move(values));
}

double cusum_statistic(const StepProcess& cusum_path, double u_n) { return cusum_path.sup_abs_from(u_n); }

bool TestReport::rejects(double level) const {
    const auto it = critical_values.find(level);
    if (it == critical_values.end()) {
        throw Error(ErrorCode::InvalidLevel, "level " + std::to_string(level) + " was not computed");
    }
    return statistic > it->second;
}

namespace {

template <typename F>
auto stage(std::string_view name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error& e) {
        throw e.with_context(name);
    }
}

}  // namespace

Estimation estimate(const RawSeries& raw, const ParameterFunctional& functional, const TestOptions& options) {
    Estimation est;
    est.lifted = stage("lift", [&] { return functional.lift(raw); });
    const std::size_t m = est.m();

    est.config = stage("config", [&] {
        EstimatorConfig cfg;
        cfg.lag_factor = options.lag_factor;
        cfg.lag = options.lag ? *options.lag : EstimatorConfig::lag_from_factor(m, options.lag_factor);
        cfg.block = options.block ? *options.block : cfg.lag;
        if (cfg.lag < 1 || cfg.block < 1) {
            throw Error(ErrorCode::ConfigInfeasible, "L and b must be at least 1");
        }
        return cfg;
    });

    est.config.k = stage("bandwidth", [&] {
        if (options.bandwidth) {
            return *options.bandwidth;
        }
        std::vector<std::size_t> grid;
        for (const std::size_t k : default_bandwidth_grid(m)) {
            if (k + est.config.lag + est.config.block < m) {
                grid.push_back(k);
            }
        }
        if (grid.empty()) {
            throw Error(ErrorCode::ConfigInfeasible,
                        "no bandwidth candidate leaves room for L and b in " + std::to_string(m) + " observations");
        }
        return cv_bandwidth(est.lifted, est.config.lag, grid);
    });
    est.config.tau = est.config.k;
    stage("config", [&] { est.config.validate(m); });

    est.pilot = stage("pilot", [&] { return nw_pilot(est.lifted, est.config.k); });
    est.integrated = stage("estimate",
                           [&] { return linearized_integrated(est.lifted, functional, est.pilot, est.config); });
    est.plugin = stage("plugin", [&] { return plugin_integrated(est.lifted, functional, est.pilot, est.config); });
    est.sums = stage("block sums", [&] { return block_sums(est.lifted, functional, est.pilot, est.config); });
    est.variance = stage("variance", [&] {
        return variance_process(est.lifted, functional, est.pilot, est.config);
    });
    est.u_n = est.config.start_offset(m);
    return est;
}

TestReport run_test(const RawSeries& raw, std::string_view functional_spec, const TestOptions& options) {
    const auto functional = stage("functional", [&] { return make_functional(functional_spec, raw.dim()); });
    return run_test(raw, functional, options);
}

TestReport run_test(const RawSeries& raw, const ParameterFunctional& functional, const TestOptions& options) {
    for (const double level : options.levels) {
        if (!(level > 0.0 && level < 1.0)) {
            throw Error(ErrorCode::InvalidLevel, "test level must lie in (0, 1)");
        }
    }
    Estimation est = estimate(raw, functional, options);
    const std::size_t m = est.m();

    TestReport report;
    report.functional = functional.name();
    report.n = raw.n();
    report.m = m;
    report.offset = est.lifted.offset;
    report.config = est.config;
    report.u_n = est.u_n;
    report.boot_m = options.boot_m;
    report.seed = options.seed;
    report.weight = options.weight;
    report.levels = options.levels;

    report.cusum_path = stage("cusum", [&] { return cusum_process(est.integrated, est.u_n); });
    report.statistic = cusum_statistic(report.cusum_path, est.u_n);
    const double root_m = std::sqrt(static_cast<double>(m));
    report.scaled_statistic = root_m * report.statistic;

    const auto draws = stage("bootstrap", [&] {
        return bootstrap_cusum_stats(est.sums, est.config, m, options.boot_m, options.seed, options.weight);
    });
    report.p_value = p_value(draws, report.scaled_statistic);
    for (const double level : options.levels) {
        report.critical_values[level] = quantile(draws, 1.0 - level) / root_m;
    }

    report.integrated_at_1 = est.integrated.final_value();
    report.plugin_at_1 = est.plugin.final_value();
    report.variance_at_1 = est.variance.final_value();
    report.standard_error = std::sqrt(report.variance_at_1 / static_cast<double>(m));
    if (report.variance_at_1 < 1e-12) {
        report.warnings.emplace_back("Q_n(1) < 1e-12: the variance process is degenerate and the test is vacuous");
    }
    report.integrated = std::move(est.integrated);
    return report;
}

std::string report_to_json(const TestReport& report) {
    nlohmann::ordered_json j;
    j["functional"] = report.functional;
    j["statistic"] = report.statistic;
    j["scaled_statistic"] = report.scaled_statistic;
    j["p_value"] = report.p_value;
    auto& crit = j["critical_values"];
    crit = nlohmann::ordered_json::object();
    for (const auto& [level, value] : report.critical_values) {
        std::ostringstream key;
        key << level;
        crit[key.str()] = value;
    }
    auto& reject = j["reject"];
    reject = nlohmann::ordered_json::object();
    for (const auto& [level, value] : report.critical_values) {
        std::ostringstream key;
        key << level;
        reject[key.str()] = report.statistic > value;
    }
    j["integrated_at_1"] = report.integrated_at_1;
    j["plugin_at_1"] = report.plugin_at_1;
    j["variance_at_1"] = report.variance_at_1;
    j["standard_error"] = report.standard_error;
    j["config"] = {
        {"n", report.n},
        {"m", report.m},
        {"offset", report.offset},
        {"lag_factor", report.config.lag_factor},
        {"lag", report.config.lag},
        {"block", report.config.block},
        {"bandwidth", report.config.k},
        {"tau", report.config.tau},
        {"u_n", report.u_n},
        {"boot_m", report.boot_m},
        {"seed", report.seed},
        {"bootstrap_weight", std::string(to_string(report.weight))},
        {"levels", report.levels},
    };
    j["warnings"] = report.warnings;
    return j.dump(2);
}

void write_report_paths(const TestReport& report, const std::string& prefix) {
    report.integrated.write_csv(prefix + "_Mn.csv");
    report.cusum_path.write_csv(prefix + "_Tn.csv");
    std::ofstream out(prefix + "_thresholds.csv");
    if (!out) {
        throw Error(ErrorCode::InvalidArgument, "cannot open '" + prefix + "_thresholds.csv' for writing");
    }
    out << "level,threshold\n";
    for (const auto& [level, value] : report.critical_values) {
        out << std::setprecision(6) << level << ',' << std::setprecision(17) << value << '\n';
    }
}

}  // namespace lscp
