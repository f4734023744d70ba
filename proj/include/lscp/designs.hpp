#pragma once

// Coefficient functions of the standard simulation designs: a tvAR(1) with
// heteroscedastic, shape-switching innovations, and a bivariate regression
// with a time-varying covariate covariance.

#include "lscp/simulate.hpp"

#include <cstddef>
#include <string_view>

namespace lscp::design {

enum class Hypothesis { H0, H1, H2 };

Hypothesis parse_hypothesis(std::string_view text);
std::string_view to_string(Hypothesis h) noexcept;

/// sigma(u) = 0.5 + |sin(2 pi u)|
double innovation_scale(double u);
/// alpha(u) = 1 for u <= 0.7, 2 otherwise
double innovation_shape(double u);

/// a_0 = 0.2, a_1 = 0.2 + u/2, a_2 = 0.2 + u/10
double ar_coefficient(Hypothesis h, double u);
/// Closed-form integral of the AR coefficient over [0, 1].
double integrated_ar_coefficient(Hypothesis h);

TvarSpec tvar(Hypothesis h, std::size_t n);

/// beta^0 = (1, 2), beta^1 = (1 + u, 2 + u^2), beta^2 = (1 + u/3, 2 + u^2/3)
Eigen::VectorXd regression_beta(Hypothesis h, double u);
/// F(u) = [[1, 2 + |sin 2 pi u|], [0, 1]]^2 with Sigma(u) = F^T F.
Eigen::MatrixXd regression_cov_factor(double u);
/// Regression design; the noise is the tvAR with coefficient a_1.
RegressionSpec regression(Hypothesis h, std::size_t n);

}  // namespace lscp::design
