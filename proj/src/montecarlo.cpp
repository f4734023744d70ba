#include "lscp/montecarlo.hpp"

#include "lscp/cusum.hpp"
#include "lscp/error.hpp"
#include "lscp/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace lscp {

namespace {

/// Runs body(i) for i in [0, count) on a small worker pool. Results must be
/// written by index. The exception of the lowest failing index is rethrown.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, count);
    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::size_t failed_index = count;
    std::exception_ptr failure;

    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        const std::string ctx = "replicate " + std::to_string(failed_index);
        try {
            std::rethrow_exception(failure);
        } catch (const Error& e) {
            throw e.with_context(ctx);
        }
    }
}

double simpson(const ScalarFn& f, std::size_t intervals = 2000) {
    const double h = 1.0 / static_cast<double>(intervals);
    double sum = f(0.0) + f(1.0);
    for (std::size_t i = 1; i < intervals; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f(static_cast<double>(i) * h);
    }
    return sum * h / 3.0;
}

TestOptions scenario_options(const McScenario& scenario, std::size_t rep) {
    TestOptions options;
    options.lag_factor = scenario.c;
    options.boot_m = scenario.boot_m;
    options.levels = scenario.levels;
    options.weight = scenario.weight;
    options.seed = derive_seed(replicate_seed(scenario.master_seed, rep), stream::bootstrap);
    return options;
}

}  // namespace

std::string McScenario::name() const {
    if (!label.empty()) {
        return label;
    }
    const std::string model_name = model == McModel::TvarAutocorr ? "tvar-autocorr" : "regression-coef";
    return model_name + ":" + std::string(design::to_string(hypothesis));
}

void McScenario::validate() const {
    if (reps < 1 || boot_m < 1 || n < 2) {
        throw Error(ErrorCode::InvalidArgument, "scenario needs reps >= 1, boot_m >= 1 and n >= 2");
    }
    if (!(c > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "lag factor must be positive");
    }
    if (ar_override && model != McModel::TvarAutocorr) {
        throw Error(ErrorCode::InvalidArgument, "AR override applies to the tvAR model only");
    }
}

ScalarFn scenario_ar_coefficient(const McScenario& scenario) {
    if (scenario.ar_override) {
        return scenario.ar_override;
    }
    const auto h = scenario.hypothesis;
    return [h](double u) { return design::ar_coefficient(h, u); };
}

double scenario_target(const McScenario& scenario) {
    if (scenario.model == McModel::RegressionCoef) {
        const auto h = scenario.hypothesis;
        return simpson([h](double u) { return design::regression_beta(h, u)[0]; });
    }
    if (!scenario.ar_override) {
        return design::integrated_ar_coefficient(scenario.hypothesis);
    }
    return simpson(scenario.ar_override);
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t rep) {
    return derive_seed(derive_seed(master_seed, stream::replicate), rep);
}

RawSeries simulate_replicate(const McScenario& scenario, std::size_t rep) {
    const std::uint64_t seed = derive_seed(replicate_seed(scenario.master_seed, rep), stream::simulation);
    if (scenario.model == McModel::RegressionCoef) {
        return simulate_regression(design::regression(scenario.hypothesis, scenario.n), seed).combined();
    }
    TvarSpec spec = design::tvar(scenario.hypothesis, scenario.n);
    spec.a = scenario_ar_coefficient(scenario);
    return simulate_tvar(spec, seed);
}

ParameterFunctional scenario_functional(const McScenario& scenario) {
    if (scenario.model == McModel::RegressionCoef) {
        return regression_coefficient_functional(2, 1);
    }
    return autocorrelation_functional(1);
}

SizePowerCell size_power_cell(const McScenario& scenario) {
    scenario.validate();
    const auto functional = scenario_functional(scenario);
    SizePowerCell cell;
    cell.p_values.assign(scenario.reps, 1.0);
    std::vector<double> runtimes(scenario.reps, 0.0);

    parallel_for(scenario.reps, scenario.threads, [&](std::size_t rep) {
        const auto start = std::chrono::steady_clock::now();
        const RawSeries raw = simulate_replicate(scenario, rep);
        const TestReport report = run_test(raw, functional, scenario_options(scenario, rep));
        cell.p_values[rep] = report.p_value;
        runtimes[rep] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    for (const double level : scenario.levels) {
        const auto hits = std::count_if(cell.p_values.begin(), cell.p_values.end(),
                                        [level](double p) { return p <= level; });
        cell.rejection_rate[level] = static_cast<double>(hits) / static_cast<double>(scenario.reps);
    }
    double total = 0.0;
    for (const double r : runtimes) total += r;
    cell.mean_runtime_seconds = total / static_cast<double>(scenario.reps);
    return cell;
}

EstimatorErrorCell estimator_error_cell(const McScenario& scenario) {
    scenario.validate();
    const auto functional = scenario_functional(scenario);
    EstimatorErrorCell cell;
    cell.target = scenario_target(scenario);
    std::vector<double> linearized(scenario.reps), plugin(scenario.reps);

    parallel_for(scenario.reps, scenario.threads, [&](std::size_t rep) {
        const RawSeries raw = simulate_replicate(scenario, rep);
        const Estimation est = estimate(raw, functional, scenario_options(scenario, rep));
        linearized[rep] = est.integrated.final_value();
        plugin[rep] = est.plugin.final_value();
    });

    auto summarize = [&](const std::vector<double>& values) {
        ErrorStats s;
        for (const double v : values) {
            s.mae += std::abs(v - cell.target);
            s.bias += v - cell.target;
        }
        s.mae /= static_cast<double>(values.size());
        s.bias /= static_cast<double>(values.size());
        return s;
    };
    cell.linearized = summarize(linearized);
    cell.plugin = summarize(plugin);
    return cell;
}

double ks_distance_uniform(std::vector<double> sample) {
    if (sample.empty()) {
        throw Error(ErrorCode::InvalidArgument, "KS distance of an empty sample");
    }
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double x = std::clamp(sample[i], 0.0, 1.0);
        d = std::max({d, static_cast<double>(i + 1) / n - x, x - static_cast<double>(i) / n});
    }
    return d;
}

PValueHistogram pvalue_histogram(const McScenario& scenario) {
    if (scenario.hypothesis != design::Hypothesis::H0 || scenario.ar_override) {
        throw Error(ErrorCode::InvalidArgument, "p-value histograms are defined under the null design only");
    }
    const SizePowerCell cell = size_power_cell(scenario);
    return PValueHistogram{cell.p_values, ks_distance_uniform(cell.p_values)};
}

McScenario local_alternative_scenario(const ScalarFn& base, const ScalarFn& drift, std::size_t n) {
    if (!base || !drift || n < 1) {
        throw Error(ErrorCode::InvalidArgument, "local alternative needs base, drift and n >= 1");
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    constexpr std::size_t kGrid = 1001;
    for (std::size_t i = 0; i < kGrid; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(kGrid - 1);
        const double d = drift(u);
        if (!std::isfinite(d)) {
            throw Error(ErrorCode::InvalidArgument, "drift is not finite", i);
        }
        if (!(std::abs(base(u) + d * scale) < 1.0)) {
            throw Error(ErrorCode::UnstableCoefficient, "drifted AR coefficient leaves (-1, 1)", i);
        }
    }
    McScenario scenario;
    scenario.model = McModel::TvarAutocorr;
    scenario.hypothesis = design::Hypothesis::H0;
    scenario.n = n;
    scenario.ar_override = [base, drift, scale](double u) { return base(u) + drift(u) * scale; };
    scenario.label = "tvar-autocorr:local";
    return scenario;
}

}  // namespace lscp
