#pragma once

#include "lscp/rng.hpp"
#include "lscp/series.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace lscp {

using ScalarFn = std::function<double(double)>;
using VectorFn = std::function<Eigen::VectorXd(double)>;
using MatrixFn = std::function<Eigen::MatrixXd(double)>;

enum class Innovation { SymmetrizedGamma, Gaussian };

/// Scalar tvAR(1): X_t = a(t/n) X_{t-1} + sigma(t/n) eta_t, with eta_t of
/// shape alpha(t/n). The pre-sample value comes from `burn_in` steps of the
/// model frozen at u = 0.
struct TvarSpec {
    std::size_t n = 0;
    ScalarFn a;
    ScalarFn sigma;
    ScalarFn alpha;
    std::size_t burn_in = 1000;
    Innovation innovation = Innovation::SymmetrizedGamma;
};

/// d-dimensional tvVAR(1):
///   X_t = A(t/n)[X_{t-1} - mu((t-1)/n)] + B(t/n) eps_t + mu(t/n),
/// started from the stationary series at u = 0 truncated after `truncation` terms.
struct TvvarSpec {
    std::size_t n = 0;
    std::size_t d = 1;
    MatrixFn A;
    MatrixFn B;
    VectorFn mu;
    std::size_t truncation = 1000;
    Innovation innovation = Innovation::Gaussian;
    /// Shape for symmetrized-Gamma innovations; unused for Gaussian.
    ScalarFn alpha = [](double) { return 1.0; };
};

/// Z_t = beta(t/n)^T W_t + X_t with W_t ~ N(0, Sigma(t/n)), Sigma = F^T F for
/// the factor F = cov_factor(u), and X_t a tvAR noise path.
struct RegressionSpec {
    std::size_t n = 0;
    VectorFn beta;
    MatrixFn cov_factor;
    TvarSpec noise;
};

struct RegressionSample {
    RawSeries response;    // n x 1
    RawSeries covariates;  // n x p

    /// Columns (Z, W_1..W_p), the raw layout of the regression functional.
    [[nodiscard]] RawSeries combined() const;
};

struct StabilityReport {
    double rho_max = 0.0;
    bool decay_ok = false;
    double k_hat = 0.0;
};

/// S * G / sqrt(alpha (alpha + 1)) with S a fair random sign and
/// G ~ Gamma(alpha, 1): mean 0, variance 1. Throws InvalidShape if alpha <= 0.
double symmetrized_gamma_draw(double alpha, Rng& rng);

/// Sequential innovation generator over one RNG stream. simulate_tvar and
/// simulate_tvvar both consume innovations through this type, so a
/// one-dimensional tvVAR and a tvAR on the same stream see identical draws.
class InnovationSource {
public:
    InnovationSource(Innovation kind, Rng rng) : kind_(kind), rng_(std::move(rng)) {}
    double next(double alpha);

private:
    Innovation kind_;
    Rng rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

RawSeries simulate_tvar(const TvarSpec& spec, std::uint64_t seed);
RawSeries simulate_tvvar(const TvvarSpec& spec, std::uint64_t seed);
RegressionSample simulate_regression(const RegressionSpec& spec, std::uint64_t seed);

[[nodiscard]] double spectral_radius(const Eigen::MatrixXd& a);

/// Companion matrix of X_t = sum_j coefs[j] X_{t-j-1} + eps_t.
[[nodiscard]] Eigen::MatrixXd companion_matrix(std::span<const double> coefs);

/// Grid diagnostic for the product bound ||prod A(u - (j-1)/n)|| <= K rho^i.
/// The grid has `grid_size` points on [0, 1] with step h = 1/(grid_size - 1);
/// products run backwards from every grid point with A(u) = A(0) for u < 0.
/// decay_ok: every start reaches a product norm below 1e-8 within `horizon`
/// factors. k_hat: max of ||product_i|| / rho^i with rho = (1 + rho_max) / 2.
StabilityReport stability_check(const MatrixFn& a, std::size_t grid_size = 1001, std::size_t horizon = 100);

}  // namespace lscp
