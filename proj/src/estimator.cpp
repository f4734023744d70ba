#include "lscp/estimator.hpp"

#include "lscp/error.hpp"
#include "lscp/summation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

namespace lscp {

StepProcess::StepProcess(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "step process needs at least one grid value");
    }
}

double StepProcess::at(double u) const {
    const std::size_t nn = n();
    const double clamped = std::clamp(u, 0.0, 1.0);
    auto t = static_cast<std::size_t>(std::floor(clamped * static_cast<double>(nn)));
    return values_[std::min(t, nn)];
}

std::size_t grid_index_ceil(std::size_t n, double u) {
    const double x = u * static_cast<double>(n);
    const double r = std::round(x);
    const double snapped = std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : std::ceil(x);
    if (snapped <= 0.0) {
        return 0;
    }
    return std::min(static_cast<std::size_t>(snapped), n);
}

double StepProcess::sup_abs_from(double a) const {
    double best = 0.0;
    for (std::size_t t = grid_index_ceil(n(), a); t < values_.size(); ++t) {
        best = std::max(best, std::abs(values_[t]));
    }
    return best;
}

void StepProcess::write_csv(std::ostream& out) const {
    const auto nn = static_cast<double>(n());
    out << "u,value\n" << std::setprecision(17);
    for (std::size_t t = 0; t < values_.size(); ++t) {
        const double u = nn > 0 ? static_cast<double>(t) / nn : 0.0;
        out << u << ',' << values_[t] << '\n';
    }
}

void StepProcess::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
    }
    write_csv(out);
}

std::size_t EstimatorConfig::lag_from_factor(std::size_t m, double c) {
    if (!(c > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "lag factor must be positive");
    }
    const double logm = std::log(static_cast<double>(std::max<std::size_t>(m, 1)));
    // Subtract a hair so that values like 4.0000000001 from rounding do not jump up.
    const double raw = c * logm * logm;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - 1e-12)));
}

EstimatorConfig EstimatorConfig::from_lag_factor(std::size_t m, double c, std::size_t k) {
    EstimatorConfig cfg;
    cfg.lag = lag_from_factor(m, c);
    cfg.block = cfg.lag;
    cfg.k = k;
    cfg.tau = k;
    cfg.lag_factor = c;
    return cfg;
}

double EstimatorConfig::start_offset(std::size_t m) const noexcept {
    return static_cast<double>(tau + lag - 1) / static_cast<double>(m);
}

void EstimatorConfig::validate(std::size_t m) const {
    if (tau < 1 || lag < 1 || block < 1) {
        throw Error(ErrorCode::ConfigInfeasible, "tau, L and b must all be at least 1");
    }
    if (tau + lag + block >= m) {
        throw Error(ErrorCode::ConfigInfeasible, "tau + L + b = " + std::to_string(tau + lag + block) +
                                                     " must be below the effective sample size " +
                                                     std::to_string(m));
    }
}

StepProcess accumulate_step_process(std::span<const double> terms, std::size_t first, std::size_t shift,
                                    std::size_t m, double scale) {
    std::vector<double> grid(m + 1, 0.0);
    CompensatedSum sum;
    std::size_t used = 0;
    for (std::size_t t = 0; t <= m; ++t) {
        if (t < first + shift) {
            continue;
        }
        const std::size_t upto = std::min(t - shift - first + 1, terms.size());
        while (used < upto) {
            sum.add(terms[used++]);
        }
        grid[t] = scale * sum.value();
    }
    return StepProcess(std::move(grid));
}

namespace {

void check_inputs(const LiftedSeries& y, const ParameterFunctional& functional, const PilotTrajectory& pilot) {
    if (y.dim() != functional.dim()) {
        throw Error(ErrorCode::ShapeMismatch, "lifted series dimension does not match the functional");
    }
    if (pilot.m() != y.m() || static_cast<std::size_t>(pilot.mu_hat.cols()) != y.dim()) {
        throw Error(ErrorCode::ShapeMismatch, "pilot trajectory does not match the lifted series");
    }
}

void check_start(const EstimatorConfig& cfg, std::size_t m) {
    if (cfg.tau < 1 || cfg.lag < 1) {
        throw Error(ErrorCode::ConfigInfeasible, "tau and L must be at least 1");
    }
    if (cfg.tau + cfg.lag >= m) {
        throw Error(ErrorCode::ConfigInfeasible, "tau + L must be below the effective sample size");
    }
}

// Guarded value/gradient at the pilot row of one-based time t - lag. Errors
// carry the summand time t.
struct Linearization {
    double value;
    Vector gradient;
    Vector mu;
};

Linearization linearize(const ParameterFunctional& functional, const PilotTrajectory& pilot, std::size_t t,
                        std::size_t lag) {
    Vector mu = pilot.at(t - lag - 1);
    if (!functional.in_domain(mu)) {
        throw Error(ErrorCode::DomainGuardViolation,
                    functional.name() + ": pilot estimate at time " + std::to_string(t - lag) +
                        " is outside the guarded domain (summand " + std::to_string(t) + ")",
                    t);
    }
    return {functional.value(mu), functional.gradient(mu), std::move(mu)};
}

}  // namespace

StepProcess linearized_integrated(const LiftedSeries& y, const ParameterFunctional& functional,
                                  const PilotTrajectory& pilot, const EstimatorConfig& cfg) {
    check_inputs(y, functional, pilot);
    const std::size_t m = y.m();
    check_start(cfg, m);
    const std::size_t first = cfg.tau + cfg.lag;
    std::vector<double> terms;
    terms.reserve(m - first + 1);
    for (std::size_t t = first; t <= m; ++t) {
        const auto lin = linearize(functional, pilot, t, cfg.lag);
        const Vector yt = y.data.row(static_cast<Eigen::Index>(t - 1)).transpose();
        terms.push_back(lin.value + lin.gradient.dot(yt - lin.mu));
    }
    return accumulate_step_process(terms, first, 0, m, 1.0 / static_cast<double>(m));
}

StepProcess plugin_integrated(const LiftedSeries& y, const ParameterFunctional& functional,
                              const PilotTrajectory& pilot, const EstimatorConfig& cfg) {
    check_inputs(y, functional, pilot);
    const std::size_t m = y.m();
    check_start(cfg, m);
    std::vector<double> terms;
    terms.reserve(m - cfg.tau + 1);
    for (std::size_t t = cfg.tau; t <= m; ++t) {
        const Vector mu = pilot.at(t - 1);
        if (!functional.in_domain(mu)) {
            throw Error(ErrorCode::DomainGuardViolation,
                        functional.name() + ": pilot estimate outside the guarded domain at time " +
                            std::to_string(t),
                        t);
        }
        terms.push_back(functional.value(mu));
    }
    return accumulate_step_process(terms, cfg.tau, 0, m, 1.0 / static_cast<double>(m));
}

std::vector<double> block_sums(const LiftedSeries& y, const ParameterFunctional& functional,
                               const PilotTrajectory& pilot, const EstimatorConfig& cfg) {
    check_inputs(y, functional, pilot);
    const std::size_t m = y.m();
    cfg.validate(m);
    const std::size_t first = cfg.tau + cfg.lag;
    const std::size_t last = m - cfg.block;
    const auto b = static_cast<Eigen::Index>(cfg.block);
    const double inv_sqrt_b = 1.0 / std::sqrt(static_cast<double>(cfg.block));
    constexpr std::size_t kReanchorPeriod = 4096;

    std::vector<double> out;
    out.reserve(last - first + 1);
    // window = sum of Y_{t+1..t+b}, i.e. zero-based rows t..t+b-1.
    Eigen::RowVectorXd window = y.data.middleRows(static_cast<Eigen::Index>(first), b).colwise().sum();
    for (std::size_t t = first; t <= last; ++t) {
        if (t > first) {
            if ((t - first) % kReanchorPeriod == 0) {
                window = y.data.middleRows(static_cast<Eigen::Index>(t), b).colwise().sum();
            } else {
                window += y.data.row(static_cast<Eigen::Index>(t + cfg.block - 1));
                window -= y.data.row(static_cast<Eigen::Index>(t - 1));
            }
        }
        const auto lin = linearize(functional, pilot, t, cfg.lag);
        const Vector centred = window.transpose() - static_cast<double>(cfg.block) * lin.mu;
        out.push_back(inv_sqrt_b * lin.gradient.dot(centred));
    }
    return out;
}

StepProcess variance_process(const LiftedSeries& y, const ParameterFunctional& functional,
                             const PilotTrajectory& pilot, const EstimatorConfig& cfg) {
    const auto sums = block_sums(y, functional, pilot, cfg);
    std::vector<double> squares(sums.size());
    std::transform(sums.begin(), sums.end(), squares.begin(), [](double v) { return v * v; });
    const std::size_t m = y.m();
    StepProcess q = accumulate_step_process(squares, cfg.tau + cfg.lag, cfg.block, m, 1.0 / static_cast<double>(m));
    // Compensated partial sums of nonnegative terms can dip by an ulp; pin monotonicity.
    std::vector<double> values = q.values();
    for (std::size_t t = 1; t < values.size(); ++t) {
        values[t] = std::max(values[t], values[t - 1]);
    }
    return StepProcess(std::move(values));
}

}  // namespace lscp
