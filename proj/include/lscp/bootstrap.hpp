#pragma once

#include "lscp/estimator.hpp"
#include "lscp/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lscp {

/// Weight w(u) in the bridge M(u) - w(u) M(1).
///   Adjusted: w(u) = (u - u_n)_+ / (1 - u_n), supremum over [u_n, 1]
///   Literal:  w(u) = u, supremum over [0, 1]
enum class BootstrapWeight { Adjusted, Literal };

BootstrapWeight parse_bootstrap_weight(std::string_view text);
std::string_view to_string(BootstrapWeight w) noexcept;

[[nodiscard]] double bridge_weight(double u, double u_n, BootstrapWeight weight);

/// Bootstrap replicates of the CUSUM statistic, sorted ascending. The scale is
/// sqrt(m) times that of the observed statistic.
struct BootstrapDraws {
    std::vector<double> stats;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t size() const noexcept { return stats.size(); }
};

/// One Gaussian multiplier path m^{-1/2} sum_{t=tau+L}^{floor(mu)-b} Y_t B_t,
/// with `sums` as returned by block_sums.
StepProcess multiplier_path(std::span<const double> sums, const EstimatorConfig& cfg, std::size_t m, Rng& rng);

/// sup |path(u) - w(u) path(1)| over the grid range implied by `weight`.
[[nodiscard]] double bridge_sup(const StepProcess& path, double u_n, BootstrapWeight weight);

/// `draws` independent bridge suprema; draw i uses the multiplier stream
/// derived from (seed, i), so results do not depend on evaluation order.
BootstrapDraws bootstrap_cusum_stats(std::span<const double> sums, const EstimatorConfig& cfg, std::size_t m,
                                     std::size_t draws, std::uint64_t seed,
                                     BootstrapWeight weight = BootstrapWeight::Adjusted);

/// ceil(level * M)-th order statistic. Throws InvalidLevel unless 0 < level < 1.
[[nodiscard]] double quantile(const BootstrapDraws& draws, double level);

/// (1 + #{draws >= observed}) / (M + 1).
[[nodiscard]] double p_value(const BootstrapDraws& draws, double observed);

}  // namespace lscp
