#include "lscp/smoothing.hpp"

#include "lscp/error.hpp"
#include "lscp/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace lscp {

namespace {

// Running sums drift; rebuild the window sum from scratch this often.
constexpr std::size_t kReanchorPeriod = 4096;

void check_bandwidth(std::size_t k, std::size_t m) {
    if (k < 1 || k > m) {
        throw Error(ErrorCode::InvalidBandwidth,
                    "bandwidth " + std::to_string(k) + " outside [1, " + std::to_string(m) + "]");
    }
}

/// Calls visit(t, mean_row) for t = 0..last with the one-sided window mean.
/// The window sums are compensated and rebuilt every kReanchorPeriod steps.
template <typename Visit>
void for_each_window_mean(const Matrix& y, std::size_t k, std::size_t last, Visit&& visit) {
    const auto d = y.cols();
    std::vector<CompensatedSum> sums(static_cast<std::size_t>(d));
    Eigen::RowVectorXd mean(d);
    for (std::size_t t = 0; t <= last; ++t) {
        const auto ti = static_cast<Eigen::Index>(t);
        const std::size_t first = t + 1 >= k ? t + 1 - k : 0;
        if (t > 0 && t % kReanchorPeriod == 0) {
            for (Eigen::Index j = 0; j < d; ++j) {
                CompensatedSum fresh;
                for (std::size_t i = first; i <= t; ++i) fresh.add(y(static_cast<Eigen::Index>(i), j));
                sums[static_cast<std::size_t>(j)] = fresh;
            }
        } else {
            for (Eigen::Index j = 0; j < d; ++j) {
                auto& s = sums[static_cast<std::size_t>(j)];
                s.add(y(ti, j));
                if (t >= k) s.add(-y(ti - static_cast<Eigen::Index>(k), j));
            }
        }
        const auto count = static_cast<double>(t - first + 1);
        for (Eigen::Index j = 0; j < d; ++j) mean[j] = sums[static_cast<std::size_t>(j)].value() / count;
        visit(t, mean);
    }
}

}  // namespace

PilotTrajectory nw_pilot(const LiftedSeries& y, std::size_t k) {
    check_bandwidth(k, y.m());
    PilotTrajectory out;
    out.k = k;
    out.tau = k;
    out.mu_hat.resize(y.data.rows(), y.data.cols());
    for_each_window_mean(y.data, k, y.m() - 1, [&](std::size_t t, const Eigen::RowVectorXd& mean) {
        out.mu_hat.row(static_cast<Eigen::Index>(t)) = mean;
    });
    return out;
}

double cv_criterion(const LiftedSeries& y, std::size_t lag, std::size_t k) {
    const std::size_t m = y.m();
    if (lag < 1) {
        throw Error(ErrorCode::InvalidArgument, "cross-validation lag must be at least 1");
    }
    if (m <= lag) {
        throw Error(ErrorCode::SeriesTooShort, "series of length " + std::to_string(m) +
                                                   " too short for lag " + std::to_string(lag));
    }
    check_bandwidth(k, m);
    double total = 0.0;
    for_each_window_mean(y.data, k, m - lag - 1, [&](std::size_t t, const Eigen::RowVectorXd& mean) {
        total += (mean - y.data.row(static_cast<Eigen::Index>(t + lag))).squaredNorm();
    });
    return total;
}

std::size_t cv_bandwidth(const LiftedSeries& y, std::size_t lag, std::span<const std::size_t> grid) {
    if (grid.empty()) {
        throw Error(ErrorCode::InvalidBandwidth, "empty bandwidth grid");
    }
    if (y.m() <= lag) {
        throw Error(ErrorCode::SeriesTooShort, "series too short for cross-validation lag");
    }
    std::size_t best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (const std::size_t k : grid) {
        const double score = cv_criterion(y, lag, k);
        if (score < best || (score == best && k < best_k)) {
            best = score;
            best_k = k;
        }
    }
    return best_k;
}

std::vector<std::size_t> default_bandwidth_grid(std::size_t m, std::size_t count) {
    if (m < 1) {
        throw Error(ErrorCode::SeriesTooShort, "empty series");
    }
    const double md = static_cast<double>(m);
    const auto lo = static_cast<std::size_t>(std::ceil(std::pow(md, 0.35)));
    auto hi = static_cast<std::size_t>(std::floor(std::pow(md, 0.75)));
    hi = std::max(std::min(hi, m), std::size_t{1});
    std::vector<std::size_t> grid;
    if (lo >= hi || count < 2) {
        grid.push_back(std::min(lo, hi));
        return grid;
    }
    const double ratio = std::log(static_cast<double>(hi) / static_cast<double>(lo));
    for (std::size_t i = 0; i < count; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
        auto k = static_cast<std::size_t>(std::llround(static_cast<double>(lo) * std::exp(ratio * frac)));
        grid.push_back(std::clamp(k, lo, hi));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

double pilot_mse(const PilotTrajectory& pilot, const Matrix& mu_true) {
    if (pilot.mu_hat.rows() != mu_true.rows() || pilot.mu_hat.cols() != mu_true.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "pilot and true mean trajectories differ in shape");
    }
    if (pilot.mu_hat.rows() == 0) {
        throw Error(ErrorCode::ShapeMismatch, "empty trajectory");
    }
    return (pilot.mu_hat - mu_true).squaredNorm() / static_cast<double>(pilot.mu_hat.rows());
}

}  // namespace lscp
