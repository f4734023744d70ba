#include "lscp/functionals.hpp"

#include "lscp/error.hpp"

#include <Eigen/Dense>

#include <charconv>
#include <cmath>

namespace lscp {

ParameterFunctional::ParameterFunctional(std::string name, std::size_t raw_dim, std::size_t dim,
                                         std::size_t offset, LiftFn lift, ValueFn f, GradientFn grad,
                                         GuardFn guard, double guard_margin)
    : name_(std::move(name)),
      raw_dim_(raw_dim),
      dim_(dim),
      offset_(offset),
      lift_(std::move(lift)),
      f_(std::move(f)),
      grad_(std::move(grad)),
      guard_(std::move(guard)),
      guard_margin_(guard_margin) {
    if (dim_ == 0 || raw_dim_ == 0) {
        throw Error(ErrorCode::InvalidArgument, "functional dimensions must be positive");
    }
    if (!(guard_margin_ > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "guard margin must be positive");
    }
}

LiftedSeries ParameterFunctional::lift(const RawSeries& raw) const {
    if (raw.dim() != raw_dim_) {
        throw Error(ErrorCode::ShapeMismatch, name_ + " expects raw dimension " + std::to_string(raw_dim_) +
                                                  ", got " + std::to_string(raw.dim()));
    }
    if (raw.n() <= offset_) {
        throw Error(ErrorCode::SeriesTooShort,
                    name_ + " needs more than " + std::to_string(offset_) + " observations");
    }
    LiftedSeries out;
    out.offset = offset_;
    out.data.resize(static_cast<Eigen::Index>(raw.n() - offset_), static_cast<Eigen::Index>(dim_));
    for (std::size_t t = offset_; t < raw.n(); ++t) {
        auto row = static_cast<Eigen::Index>(t - offset_);
        lift_(raw, t, std::span<double>(out.data.row(row).data(), dim_));
    }
    return out;
}

bool ParameterFunctional::in_domain(const Vector& mu) const {
    if (static_cast<std::size_t>(mu.size()) != dim_) {
        return false;
    }
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (!std::isfinite(mu[i])) {
            return false;
        }
    }
    return guard_(mu);
}

void ParameterFunctional::require_domain(const Vector& mu) const {
    if (static_cast<std::size_t>(mu.size()) != dim_) {
        throw Error(ErrorCode::ShapeMismatch, name_ + ": moment vector has wrong dimension");
    }
    if (!in_domain(mu)) {
        throw Error(ErrorCode::DomainGuardViolation, name_ + ": moment vector outside the guarded domain");
    }
}

double ParameterFunctional::value(const Vector& mu) const {
    require_domain(mu);
    return f_(mu);
}

Vector ParameterFunctional::gradient(const Vector& mu) const {
    require_domain(mu);
    return grad_(mu);
}

namespace {

void require_univariate(std::size_t raw_dim, std::string_view name) {
    if (raw_dim != 1) {
        throw Error(ErrorCode::ShapeMismatch, std::string(name) + " is defined for univariate series only");
    }
}

// Powers x, x^2, ..., x^k of the first raw column.
ParameterFunctional::LiftFn power_lift(std::size_t k) {
    return [k](const RawSeries& raw, std::size_t t, std::span<double> out) {
        const double x = raw(t, 0);
        double p = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            p *= x;
            out[i] = p;
        }
    };
}

}  // namespace

ParameterFunctional mean_functional() {
    return ParameterFunctional(
        "mean", 1, 1, 0, power_lift(1), [](const Vector& mu) { return mu[0]; },
        [](const Vector& mu) { return Vector::Ones(mu.size()).eval(); }, [](const Vector&) { return true; },
        kDefaultGuardMargin);
}

ParameterFunctional variance_functional(double margin) {
    return ParameterFunctional(
        "variance", 1, 2, 0, power_lift(2), [](const Vector& mu) { return mu[1] - mu[0] * mu[0]; },
        [](const Vector& mu) {
            Vector g(2);
            g << -2.0 * mu[0], 1.0;
            return g;
        },
        [margin](const Vector& mu) { return mu[1] - mu[0] * mu[0] > margin; }, margin);
}

ParameterFunctional autocorrelation_functional(std::size_t lag, double margin) {
    if (lag < 1) {
        throw Error(ErrorCode::InvalidArgument, "autocorrelation lag must be at least 1");
    }
    auto lift = [lag](const RawSeries& raw, std::size_t t, std::span<double> out) {
        const double x = raw(t, 0);
        const double y = raw(t - lag, 0);
        out[0] = x;
        out[1] = y;
        out[2] = x * x;
        out[3] = y * y;
        out[4] = x * y;
    };
    auto f = [](const Vector& mu) {
        const double v1 = mu[2] - mu[0] * mu[0];
        const double v2 = mu[3] - mu[1] * mu[1];
        return (mu[4] - mu[0] * mu[1]) / std::sqrt(v1 * v2);
    };
    auto grad = [](const Vector& mu) {
        const double v1 = mu[2] - mu[0] * mu[0];
        const double v2 = mu[3] - mu[1] * mu[1];
        const double s = std::sqrt(v1 * v2);
        const double r = (mu[4] - mu[0] * mu[1]) / s;
        Vector g(5);
        g[0] = -mu[1] / s + r * mu[0] / v1;
        g[1] = -mu[0] / s + r * mu[1] / v2;
        g[2] = -0.5 * r / v1;
        g[3] = -0.5 * r / v2;
        g[4] = 1.0 / s;
        return g;
    };
    auto guard = [margin](const Vector& mu) {
        return mu[2] - mu[0] * mu[0] > margin && mu[3] - mu[1] * mu[1] > margin;
    };
    return ParameterFunctional("autocorr:" + std::to_string(lag), 1, 5, lag, lift, f, grad, guard, margin);
}

ParameterFunctional kurtosis_functional(double margin) {
    auto f = [](const Vector& m) {
        const double m1 = m[0];
        const double v = m[1] - m1 * m1;
        const double num = m[3] - 4.0 * m1 * m[2] + 6.0 * m1 * m1 * m[1] - 3.0 * m1 * m1 * m1 * m1;
        return num / (v * v);
    };
    auto grad = [](const Vector& m) {
        const double m1 = m[0];
        const double v = m[1] - m1 * m1;
        const double num = m[3] - 4.0 * m1 * m[2] + 6.0 * m1 * m1 * m[1] - 3.0 * m1 * m1 * m1 * m1;
        const double v2 = v * v;
        const double v3 = v2 * v;
        Vector g(4);
        g[0] = (-4.0 * m[2] + 12.0 * m1 * m[1] - 12.0 * m1 * m1 * m1) / v2 - 2.0 * num * (-2.0 * m1) / v3;
        g[1] = 6.0 * m1 * m1 / v2 - 2.0 * num / v3;
        g[2] = -4.0 * m1 / v2;
        g[3] = 1.0 / v2;
        return g;
    };
    auto guard = [margin](const Vector& m) { return m[1] - m[0] * m[0] > margin; };
    return ParameterFunctional("kurtosis", 1, 4, 0, power_lift(4), f, grad, guard, margin);
}

ParameterFunctional skewness_functional(double margin) {
    auto f = [](const Vector& m) {
        const double m1 = m[0];
        const double v = m[1] - m1 * m1;
        return (m[2] - 3.0 * m1 * m[1] + 2.0 * m1 * m1 * m1) / std::pow(v, 1.5);
    };
    auto grad = [](const Vector& m) {
        const double m1 = m[0];
        const double v = m[1] - m1 * m1;
        const double num = m[2] - 3.0 * m1 * m[1] + 2.0 * m1 * m1 * m1;
        const double v15 = std::pow(v, 1.5);
        const double v25 = v15 * v;
        Vector g(3);
        g[0] = (-3.0 * m[1] + 6.0 * m1 * m1) / v15 - 1.5 * num * (-2.0 * m1) / v25;
        g[1] = -3.0 * m1 / v15 - 1.5 * num / v25;
        g[2] = 1.0 / v15;
        return g;
    };
    auto guard = [margin](const Vector& m) { return m[1] - m[0] * m[0] > margin; };
    return ParameterFunctional("skewness", 1, 3, 0, power_lift(3), f, grad, guard, margin);
}

ParameterFunctional coefficient_of_variation_functional(double margin) {
    auto f = [](const Vector& m) { return std::sqrt(m[1] - m[0] * m[0]) / m[0]; };
    auto grad = [](const Vector& m) {
        const double sd = std::sqrt(m[1] - m[0] * m[0]);
        Vector g(2);
        g[0] = -1.0 / sd - sd / (m[0] * m[0]);
        g[1] = 1.0 / (2.0 * sd * m[0]);
        return g;
    };
    auto guard = [margin](const Vector& m) { return m[1] - m[0] * m[0] > margin && std::abs(m[0]) > margin; };
    return ParameterFunctional("cv", 1, 2, 0, power_lift(2), f, grad, guard, margin);
}

namespace {

struct RegressionParts {
    Eigen::MatrixXd cov;    // Cov(W), assembled entrywise from the moment vector
    Eigen::VectorXd cross;  // Cov(W, Z)
};

RegressionParts regression_parts(const Vector& mu, std::size_t p) {
    const auto pi = static_cast<Eigen::Index>(p);
    const Eigen::VectorXd mw = mu.head(pi);
    const double mz = mu[pi];
    RegressionParts parts{Eigen::MatrixXd(pi, pi), Eigen::VectorXd(pi)};
    for (Eigen::Index a = 0; a < pi; ++a) {
        for (Eigen::Index b = 0; b < pi; ++b) {
            parts.cov(a, b) = mu[pi + 1 + a * pi + b] - mw[a] * mw[b];
        }
        parts.cross[a] = mu[pi + 1 + pi * pi + a] - mw[a] * mz;
    }
    return parts;
}

}  // namespace

ParameterFunctional regression_coefficient_functional(std::size_t covariates, std::size_t coordinate,
                                                      double margin) {
    if (covariates < 1) {
        throw Error(ErrorCode::InvalidArgument, "regression needs at least one covariate");
    }
    if (coordinate < 1 || coordinate > covariates) {
        throw Error(ErrorCode::InvalidArgument, "regression coordinate out of range");
    }
    const std::size_t p = covariates;
    const std::size_t dim = 2 * p + 1 + p * p;
    const auto j = static_cast<Eigen::Index>(coordinate - 1);

    auto lift = [p](const RawSeries& raw, std::size_t t, std::span<double> out) {
        const double z = raw(t, 0);
        for (std::size_t a = 0; a < p; ++a) {
            out[a] = raw(t, a + 1);
        }
        out[p] = z;
        for (std::size_t a = 0; a < p; ++a) {
            for (std::size_t b = 0; b < p; ++b) {
                out[p + 1 + a * p + b] = raw(t, a + 1) * raw(t, b + 1);
            }
            out[p + 1 + p * p + a] = raw(t, a + 1) * z;
        }
    };
    auto f = [p, j](const Vector& mu) {
        const auto parts = regression_parts(mu, p);
        const Eigen::VectorXd beta = parts.cov.partialPivLu().solve(parts.cross);
        return beta[j];
    };
    // d beta = C^{-1} (dc - dC beta), one lifted coordinate at a time.
    auto grad = [p, j, dim](const Vector& mu) {
        const auto pi = static_cast<Eigen::Index>(p);
        const auto parts = regression_parts(mu, p);
        const Eigen::MatrixXd inv = parts.cov.inverse();
        const Eigen::VectorXd beta = inv * parts.cross;
        const Eigen::VectorXd mw = mu.head(pi);
        const double mz = mu[pi];
        const Eigen::RowVectorXd inv_row = inv.row(j);
        Vector g(static_cast<Eigen::Index>(dim));
        for (Eigen::Index k = 0; k < pi; ++k) {
            // dC = -(e_k mw^T + mw e_k^T), dc = -e_k mz
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(pi);
            rhs[k] -= mz;
            rhs[k] += mw.dot(beta);
            rhs += mw * beta[k];
            g[k] = inv_row.dot(rhs);
        }
        g[pi] = -inv_row.dot(mw);
        for (Eigen::Index a = 0; a < pi; ++a) {
            for (Eigen::Index b = 0; b < pi; ++b) {
                g[pi + 1 + a * pi + b] = -inv(j, a) * beta[b];
            }
            g[pi + 1 + pi * pi + a] = inv(j, a);
        }
        return g;
    };
    auto guard = [p, margin](const Vector& mu) {
        const auto parts = regression_parts(mu, p);
        const Eigen::MatrixXd sym = 0.5 * (parts.cov + parts.cov.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
        return solver.info() == Eigen::Success && solver.eigenvalues().minCoeff() > margin;
    };
    return ParameterFunctional("regression:" + std::to_string(coordinate), p + 1, dim, 0, lift, f, grad, guard,
                               margin);
}

namespace {

std::size_t parse_index(std::string_view text, std::string_view spec) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw Error(ErrorCode::InvalidArgument, "bad integer in functional spec '" + std::string(spec) + "'");
    }
    return value;
}

}  // namespace

ParameterFunctional make_functional(std::string_view spec, std::size_t raw_dim) {
    const auto colon = spec.find(':');
    const std::string_view head = spec.substr(0, colon);
    const bool has_arg = colon != std::string_view::npos;
    const std::string_view arg = has_arg ? spec.substr(colon + 1) : std::string_view{};

    if (head == "regression") {
        if (raw_dim < 2) {
            throw Error(ErrorCode::ShapeMismatch, "regression needs a response column and at least one covariate");
        }
        return regression_coefficient_functional(raw_dim - 1, has_arg ? parse_index(arg, spec) : 1);
    }
    if (head == "autocorr") {
        require_univariate(raw_dim, spec);
        return autocorrelation_functional(has_arg ? parse_index(arg, spec) : 1);
    }
    if (has_arg) {
        throw Error(ErrorCode::InvalidArgument, "unexpected argument in functional spec '" + std::string(spec) + "'");
    }
    require_univariate(raw_dim, spec);
    if (head == "mean") return mean_functional();
    if (head == "variance") return variance_functional();
    if (head == "kurtosis") return kurtosis_functional();
    if (head == "skewness") return skewness_functional();
    if (head == "cv") return coefficient_of_variation_functional();
    throw Error(ErrorCode::InvalidArgument, "unknown functional '" + std::string(spec) + "'");
}

}  // namespace lscp
