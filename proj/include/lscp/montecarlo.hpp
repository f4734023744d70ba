#pragma once

#include "lscp/bootstrap.hpp"
#include "lscp/designs.hpp"
#include "lscp/functionals.hpp"
#include "lscp/simulate.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lscp {

enum class McModel {
    TvarAutocorr,    // tvAR design, lag-1 autocorrelation
    RegressionCoef,  // regression design, first coefficient
};

struct McScenario {
    McModel model = McModel::TvarAutocorr;
    design::Hypothesis hypothesis = design::Hypothesis::H0;
    /// Replaces the design AR coefficient when set (local alternatives).
    ScalarFn ar_override;
    std::string label;

    std::size_t n = 1000;
    std::size_t reps = 500;
    std::size_t boot_m = 200;
    double c = 0.1;
    std::vector<double> levels{0.05, 0.10};
    std::uint64_t master_seed = 1;
    BootstrapWeight weight = BootstrapWeight::Adjusted;
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t threads = 0;

    [[nodiscard]] std::string name() const;
    /// Throws InvalidArgument for reps, boot_m or n of zero.
    void validate() const;
};

/// AR coefficient function of a tvAR scenario (override or design).
ScalarFn scenario_ar_coefficient(const McScenario& scenario);

/// Integral over [0, 1] of the tested parameter: the AR coefficient for
/// TvarAutocorr, beta_1 for RegressionCoef.
double scenario_target(const McScenario& scenario);

/// Seed of replicate `rep`; independent of thread count and execution order.
[[nodiscard]] std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t rep);

/// Raw data of one replicate.
RawSeries simulate_replicate(const McScenario& scenario, std::size_t rep);

/// Functional tested by the scenario.
ParameterFunctional scenario_functional(const McScenario& scenario);

struct SizePowerCell {
    std::map<double, double> rejection_rate;  // level -> fraction with p <= level
    std::vector<double> p_values;             // by replicate id
    double mean_runtime_seconds = 0.0;
};

SizePowerCell size_power_cell(const McScenario& scenario);

struct ErrorStats {
    double mae = 0.0;
    double bias = 0.0;
};

/// Error of M_n(1) and the plug-in estimate against scenario_target. The raw
/// values are used; the sums skip the first tau (+ L) points, so the
/// skipped range is part of the error.
struct EstimatorErrorCell {
    double target = 0.0;
    ErrorStats linearized;
    ErrorStats plugin;
};

EstimatorErrorCell estimator_error_cell(const McScenario& scenario);

struct PValueHistogram {
    std::vector<double> p_values;
    double ks_distance = 0.0;
};

/// Null p-values and their Kolmogorov-Smirnov distance from U(0, 1). Requires
/// hypothesis H0 without an override.
PValueHistogram pvalue_histogram(const McScenario& scenario);

/// sup_x |F_emp(x) - x| for a sample on [0, 1].
double ks_distance_uniform(std::vector<double> sample);

/// tvAR autocorrelation scenario with a(u) = base(u) + drift(u)/sqrt(n).
/// Throws UnstableCoefficient if the drifted coefficient leaves (-1, 1).
McScenario local_alternative_scenario(const ScalarFn& base, const ScalarFn& drift, std::size_t n);

}  // namespace lscp
