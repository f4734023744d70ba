#pragma once

#include "lscp/bootstrap.hpp"
#include "lscp/estimator.hpp"
#include "lscp/functionals.hpp"
#include "lscp/series.hpp"
#include "lscp/smoothing.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lscp {

/// T_n(u) = M_n(u) - ((u - u_n)_+ / (1 - u_n)) M_n(1). Throws InvalidOffset
/// unless 0 <= u_n < 1.
StepProcess cusum_process(const StepProcess& integrated, double u_n);

/// max |T_n(t/n)| over grid indices t >= ceil(n u_n).
double cusum_statistic(const StepProcess& cusum_path, double u_n);

struct TestOptions {
    double lag_factor = 0.1;  // c in L = ceil(c log(m)^2)
    std::size_t boot_m = 1000;
    std::uint64_t seed = 1;
    std::vector<double> levels{0.05, 0.10};
    BootstrapWeight weight = BootstrapWeight::Adjusted;
    /// Fixed bandwidth; cross-validated over default_bandwidth_grid when unset.
    std::optional<std::size_t> bandwidth;
    /// Fixed lag L (b follows L unless `block` is set).
    std::optional<std::size_t> lag;
    std::optional<std::size_t> block;
};

/// Everything computed before the bootstrap: lifted data, tuning, pilot and
/// the three estimator processes.
struct Estimation {
    LiftedSeries lifted;
    EstimatorConfig config;
    PilotTrajectory pilot;
    StepProcess integrated;  // M_n
    StepProcess plugin;      // plug-in comparator
    StepProcess variance;    // Q_n
    std::vector<double> sums;
    double u_n = 0.0;

    [[nodiscard]] std::size_t m() const noexcept { return lifted.m(); }
};

Estimation estimate(const RawSeries& raw, const ParameterFunctional& functional, const TestOptions& options);

struct TestReport {
    std::string functional;
    std::size_t n = 0;       // raw sample size
    std::size_t m = 0;       // effective (lifted) sample size
    std::size_t offset = 0;  // raw rows consumed by lags
    EstimatorConfig config;
    double u_n = 0.0;

    double statistic = 0.0;         // T*_n
    double scaled_statistic = 0.0;  // sqrt(m) T*_n, the scale of the bootstrap draws
    double p_value = 1.0;
    std::map<double, double> critical_values;  // level -> threshold on the T_n scale
    double integrated_at_1 = 0.0;              // M_n(1)
    double plugin_at_1 = 0.0;
    double variance_at_1 = 0.0;                // Q_n(1)
    double standard_error = 0.0;               // sqrt(Q_n(1) / m)
    StepProcess integrated;                    // M_n
    StepProcess cusum_path;                    // T_n

    std::size_t boot_m = 0;
    std::uint64_t seed = 0;
    BootstrapWeight weight = BootstrapWeight::Adjusted;
    std::vector<double> levels;
    std::vector<std::string> warnings;

    [[nodiscard]] bool rejects(double level) const;
};

/// lift -> bandwidth selection -> pilot -> M_n, Q_n, block sums -> CUSUM ->
/// bootstrap. Deterministic given the data and options.seed. Upstream errors
/// are rethrown with the failing stage prefixed.
TestReport run_test(const RawSeries& raw, std::string_view functional_spec, const TestOptions& options = {});
TestReport run_test(const RawSeries& raw, const ParameterFunctional& functional, const TestOptions& options = {});

/// Report as pretty-printed JSON (no path data; see write_report_paths).
std::string report_to_json(const TestReport& report);

/// Writes <prefix>_Mn.csv, <prefix>_Tn.csv and <prefix>_thresholds.csv.
void write_report_paths(const TestReport& report, const std::string& prefix);

}  // namespace lscp
