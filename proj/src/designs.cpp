#include "lscp/designs.hpp"

#include "lscp/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lscp::design {

Hypothesis parse_hypothesis(std::string_view text) {
    if (text == "h0" || text == "H0") return Hypothesis::H0;
    if (text == "h1" || text == "H1") return Hypothesis::H1;
    if (text == "h2" || text == "H2") return Hypothesis::H2;
    throw Error(ErrorCode::InvalidArgument, "unknown hypothesis '" + std::string(text) + "'");
}

std::string_view to_string(Hypothesis h) noexcept {
    switch (h) {
        case Hypothesis::H0: return "h0";
        case Hypothesis::H1: return "h1";
        case Hypothesis::H2: return "h2";
    }
    return "?";
}

double innovation_scale(double u) { return 0.5 + std::abs(std::sin(2.0 * std::numbers::pi * u)); }

double innovation_shape(double u) { return u <= 0.7 ? 1.0 : 2.0; }

double ar_coefficient(Hypothesis h, double u) {
    switch (h) {
        case Hypothesis::H0: return 0.2;
        case Hypothesis::H1: return 0.2 + u / 2.0;
        case Hypothesis::H2: return 0.2 + u / 10.0;
    }
    return 0.2;
}

double integrated_ar_coefficient(Hypothesis h) {
    switch (h) {
        case Hypothesis::H0: return 0.2;
        case Hypothesis::H1: return 0.45;
        case Hypothesis::H2: return 0.25;
    }
    return 0.2;
}

TvarSpec tvar(Hypothesis h, std::size_t n) {
    TvarSpec spec;
    spec.n = n;
    spec.a = [h](double u) { return ar_coefficient(h, u); };
    spec.sigma = innovation_scale;
    spec.alpha = innovation_shape;
    return spec;
}

Eigen::VectorXd regression_beta(Hypothesis h, double u) {
    Eigen::VectorXd beta(2);
    switch (h) {
        case Hypothesis::H0: beta << 1.0, 2.0; break;
        case Hypothesis::H1: beta << 1.0 + u, 2.0 + u * u; break;
        case Hypothesis::H2: beta << 1.0 + u / 3.0, 2.0 + u * u / 3.0; break;
    }
    return beta;
}

Eigen::MatrixXd regression_cov_factor(double u) {
    Eigen::MatrixXd base(2, 2);
    base << 1.0, 2.0 + std::abs(std::sin(2.0 * std::numbers::pi * u)), 0.0, 1.0;
    return base * base;
}

RegressionSpec regression(Hypothesis h, std::size_t n) {
    RegressionSpec spec;
    spec.n = n;
    spec.beta = [h](double u) { return regression_beta(h, u); };
    spec.cov_factor = regression_cov_factor;
    spec.noise = tvar(Hypothesis::H1, n);
    return spec;
}

}  // namespace lscp::design
