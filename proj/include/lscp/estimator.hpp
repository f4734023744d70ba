#pragma once

#include "lscp/functionals.hpp"
#include "lscp/series.hpp"
#include "lscp/smoothing.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lscp {

/// Right-continuous step function on [0, 1] with jumps at t/n; the value on
/// [t/n, (t+1)/n) is values()[t], t = 0..n.
class StepProcess {
public:
    StepProcess() = default;
    explicit StepProcess(std::vector<double> values);

    [[nodiscard]] std::size_t n() const noexcept { return values_.empty() ? 0 : values_.size() - 1; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t t) const { return values_.at(t); }
    [[nodiscard]] double at(double u) const;
    [[nodiscard]] double final_value() const { return values_.back(); }

    /// max |value| over grid indices t >= ceil(n a).
    [[nodiscard]] double sup_abs_from(double a) const;

    /// Two columns `u,value` with a header row, 17 significant digits.
    void write_csv(std::ostream& out) const;
    void write_csv(const std::string& path) const;

private:
    std::vector<double> values_;
};

/// Smallest grid index t with t >= n*u, tolerant to rounding in n*u.
[[nodiscard]] std::size_t grid_index_ceil(std::size_t n, double u);

/// Tuning of the linearized estimator. All indices are one-based lifted times.
struct EstimatorConfig {
    std::size_t lag = 1;    // L
    std::size_t tau = 1;    // initial offset
    std::size_t block = 1;  // b
    std::size_t k = 1;      // pilot bandwidth
    double lag_factor = 0.1;

    /// L = max(1, ceil(c log(m)^2)), b = L, tau = k.
    static EstimatorConfig from_lag_factor(std::size_t m, double c, std::size_t k);
    [[nodiscard]] static std::size_t lag_from_factor(std::size_t m, double c);

    /// u_n = (tau + L - 1) / m.
    [[nodiscard]] double start_offset(std::size_t m) const noexcept;
    /// Throws ConfigInfeasible unless tau, L, b >= 1 and tau + L + b < m.
    void validate(std::size_t m) const;
};

/// M_n(u) = (1/m) sum_{t=tau+L}^{floor(mu)} [f(mu_{t-L}) + Df(mu_{t-L}) (Y_t - mu_{t-L})].
StepProcess linearized_integrated(const LiftedSeries& y, const ParameterFunctional& functional,
                                  const PilotTrajectory& pilot, const EstimatorConfig& cfg);

/// Plug-in comparator (1/m) sum_{t=tau}^{floor(mu)} f(mu_t).
StepProcess plugin_integrated(const LiftedSeries& y, const ParameterFunctional& functional,
                              const PilotTrajectory& pilot, const EstimatorConfig& cfg);

/// B_t = b^{-1/2} Df(mu_{t-L}) sum_{i=1}^{b} (Y_{t+i} - mu_{t-L}) for t = tau+L..m-b;
/// element 0 belongs to t = tau+L.
std::vector<double> block_sums(const LiftedSeries& y, const ParameterFunctional& functional,
                               const PilotTrajectory& pilot, const EstimatorConfig& cfg);

/// Q_n(u) = (1/m) sum_{t=tau+L}^{floor(mu)-b} B_t^2; nonnegative and nondecreasing.
StepProcess variance_process(const LiftedSeries& y, const ParameterFunctional& functional,
                             const PilotTrajectory& pilot, const EstimatorConfig& cfg);

/// Grid process scale * sum_{s=first}^{t-shift} terms[s-first] for t = 0..m,
/// accumulated with compensated summation. Shared by M_n, Q_n and the
/// bootstrap paths.
StepProcess accumulate_step_process(std::span<const double> terms, std::size_t first, std::size_t shift,
                                    std::size_t m, double scale);

}  // namespace lscp
