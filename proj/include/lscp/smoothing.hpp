#pragma once

#include "lscp/series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lscp {

/// One-sided local averages mu_hat_t of the lifted series. Row t (zero-based)
/// is the mean of lifted rows max(0, t-k+1)..t, so it depends on the past only.
struct PilotTrajectory {
    Matrix mu_hat;
    std::size_t k = 1;
    std::size_t tau = 1;

    [[nodiscard]] std::size_t m() const noexcept { return static_cast<std::size_t>(mu_hat.rows()); }
    [[nodiscard]] Vector at(std::size_t t) const { return mu_hat.row(static_cast<Eigen::Index>(t)).transpose(); }
};

/// Running-sum window means; tau defaults to k. Throws InvalidBandwidth unless 1 <= k <= m.
PilotTrajectory nw_pilot(const LiftedSeries& y, std::size_t k);

/// Prediction error sum_t ||mu_hat^k_t - Y_{t+lag}||^2 over t = 1..m-lag.
double cv_criterion(const LiftedSeries& y, std::size_t lag, std::size_t k);

/// argmin of cv_criterion over `grid`; ties go to the smaller bandwidth.
std::size_t cv_bandwidth(const LiftedSeries& y, std::size_t lag, std::span<const std::size_t> grid);

/// `count` geometrically spaced integers in [ceil(m^0.35), floor(m^0.75)],
/// deduplicated and ascending.
std::vector<std::size_t> default_bandwidth_grid(std::size_t m, std::size_t count = 25);

/// (1/m) sum_t ||mu_hat_t - mu_true_t||^2.
double pilot_mse(const PilotTrajectory& pilot, const Matrix& mu_true);

}  // namespace lscp
