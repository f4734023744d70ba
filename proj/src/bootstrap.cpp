#include "lscp/bootstrap.hpp"

#include "lscp/error.hpp"
#include "lscp/summation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lscp {

BootstrapWeight parse_bootstrap_weight(std::string_view text) {
    if (text == "adjusted") return BootstrapWeight::Adjusted;
    if (text == "literal") return BootstrapWeight::Literal;
    throw Error(ErrorCode::InvalidArgument, "unknown bootstrap weight '" + std::string(text) + "'");
}

std::string_view to_string(BootstrapWeight w) noexcept {
    return w == BootstrapWeight::Adjusted ? "adjusted" : "literal";
}

double bridge_weight(double u, double u_n, BootstrapWeight weight) {
    if (weight == BootstrapWeight::Literal) {
        return u;
    }
    return std::max(u - u_n, 0.0) / (1.0 - u_n);
}

StepProcess multiplier_path(std::span<const double> sums, const EstimatorConfig& cfg, std::size_t m, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> terms(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) {
        terms[i] = normal(rng) * sums[i];
    }
    return accumulate_step_process(terms, cfg.tau + cfg.lag, cfg.block, m, 1.0 / std::sqrt(static_cast<double>(m)));
}

double bridge_sup(const StepProcess& path, double u_n, BootstrapWeight weight) {
    const std::size_t n = path.n();
    const double end = path.final_value();
    const std::size_t start = weight == BootstrapWeight::Adjusted ? grid_index_ceil(n, u_n) : 0;
    double best = 0.0;
    for (std::size_t t = start; t <= n; ++t) {
        const double u = static_cast<double>(t) / static_cast<double>(n);
        best = std::max(best, std::abs(path[t] - bridge_weight(u, u_n, weight) * end));
    }
    return best;
}

BootstrapDraws bootstrap_cusum_stats(std::span<const double> sums, const EstimatorConfig& cfg, std::size_t m,
                                     std::size_t draws, std::uint64_t seed, BootstrapWeight weight) {
    if (draws < 1) {
        throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least one draw");
    }
    const double u_n = cfg.start_offset(m);
    if (!(u_n < 1.0)) {
        throw Error(ErrorCode::InvalidOffset, "start offset u_n must be below 1");
    }
    BootstrapDraws out;
    out.seed = seed;
    out.stats.resize(draws);
    const std::uint64_t base = derive_seed(seed, stream::bootstrap);
    for (std::size_t i = 0; i < draws; ++i) {
        Rng rng = make_rng(base, i);
        out.stats[i] = bridge_sup(multiplier_path(sums, cfg, m, rng), u_n, weight);
    }
    std::sort(out.stats.begin(), out.stats.end());
    return out;
}

double quantile(const BootstrapDraws& draws, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(ErrorCode::InvalidLevel, "quantile level must lie in (0, 1), got " + std::to_string(level));
    }
    if (draws.stats.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no bootstrap draws");
    }
    const auto count = static_cast<double>(draws.size());
    // level * M is often an integer up to rounding (0.9 * 100); snap before ceil.
    const double x = level * count;
    const double r = std::round(x);
    const double rank = std::abs(x - r) <= 1e-9 * count ? r : std::ceil(x);
    const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, count));
    if (std::is_sorted(draws.stats.begin(), draws.stats.end())) {
        return draws.stats[idx - 1];
    }
    std::vector<double> copy = draws.stats;
    std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(idx - 1), copy.end());
    return copy[idx - 1];
}

double p_value(const BootstrapDraws& draws, double observed) {
    const auto exceed = static_cast<double>(
        std::count_if(draws.stats.begin(), draws.stats.end(), [observed](double s) { return s >= observed; }));
    return (1.0 + exceed) / (static_cast<double>(draws.size()) + 1.0);
}

}  // namespace lscp
