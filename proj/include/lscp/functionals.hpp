#pragma once

#include "lscp/series.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace lscp {

/// Default margin for variance-type denominators and covariance eigenvalues.
inline constexpr double kDefaultGuardMargin = 1e-8;

/// A parameter theta = f(E h(X)) built from a moment map h (the lift) and a
/// smooth scalar function f with gradient Df. The guard describes the region
/// where f and Df are bounded; evaluation outside it throws
/// DomainGuardViolation.
///
/// Instances are immutable and safe to share across threads.
class ParameterFunctional {
public:
    /// Writes h(X_{t-offset..t}) into `out` (length dim()). `t` is a zero-based
    /// raw index with t >= offset.
    using LiftFn = std::function<void(const RawSeries&, std::size_t, std::span<double>)>;
    using ValueFn = std::function<double(const Vector&)>;
    using GradientFn = std::function<Vector(const Vector&)>;
    using GuardFn = std::function<bool(const Vector&)>;

    ParameterFunctional(std::string name, std::size_t raw_dim, std::size_t dim, std::size_t offset,
                        LiftFn lift, ValueFn f, GradientFn grad, GuardFn guard, double guard_margin);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t raw_dim() const noexcept { return raw_dim_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
    [[nodiscard]] double guard_margin() const noexcept { return guard_margin_; }

    /// Lifted rows for raw t = offset+1..n. Throws SeriesTooShort if n <= offset
    /// and ShapeMismatch if the raw dimension is wrong.
    [[nodiscard]] LiftedSeries lift(const RawSeries& raw) const;

    [[nodiscard]] bool in_domain(const Vector& mu) const;
    [[nodiscard]] double value(const Vector& mu) const;
    [[nodiscard]] Vector gradient(const Vector& mu) const;

    // Skip the guard; for finite-difference checks only.
    [[nodiscard]] double value_unchecked(const Vector& mu) const { return f_(mu); }

private:
    void require_domain(const Vector& mu) const;

    std::string name_;
    std::size_t raw_dim_;
    std::size_t dim_;
    std::size_t offset_;
    LiftFn lift_;
    ValueFn f_;
    GradientFn grad_;
    GuardFn guard_;
    double guard_margin_;
};

/// f(x) = x_1 on the lift (x).
ParameterFunctional mean_functional();
/// Var(X) from the lift (x, x^2).
ParameterFunctional variance_functional(double margin = kDefaultGuardMargin);
/// Cor(X_t, X_{t-h}) from (X_t, X_{t-h}, X_t^2, X_{t-h}^2, X_t X_{t-h}).
ParameterFunctional autocorrelation_functional(std::size_t lag, double margin = kDefaultGuardMargin);
/// E(X - EX)^4 / Var(X)^2 from (x, x^2, x^3, x^4).
ParameterFunctional kurtosis_functional(double margin = kDefaultGuardMargin);
/// E(X - EX)^3 / Var(X)^{3/2} from (x, x^2, x^3).
ParameterFunctional skewness_functional(double margin = kDefaultGuardMargin);
/// sqrt(Var X) / EX from (x, x^2); guard also keeps |EX| > margin.
ParameterFunctional coefficient_of_variation_functional(double margin = kDefaultGuardMargin);

/// Coordinate j (one-based) of beta = Cov(W)^{-1} Cov(W, Z) for raw rows
/// (Z, W_1..W_p). Lift layout: (W, Z, vec(W W^T) row-major, W Z), dimension
/// 2p + 1 + p^2. Guard: smallest eigenvalue of the symmetrized Cov(W) > margin.
ParameterFunctional regression_coefficient_functional(std::size_t covariates, std::size_t coordinate,
                                                      double margin = kDefaultGuardMargin);

/// Parses "mean", "variance", "autocorr:<h>", "kurtosis", "skewness", "cv",
/// "regression:<j>". Regression takes its covariate count from raw_dim - 1.
ParameterFunctional make_functional(std::string_view spec, std::size_t raw_dim = 1);

}  // namespace lscp
