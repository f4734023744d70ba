#include "lscp/simulate.hpp"

#include "lscp/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace lscp {

namespace {

constexpr std::size_t kCoefficientGrid = 1001;

double grid_point(std::size_t i, std::size_t size) {
    return static_cast<double>(i) / static_cast<double>(size - 1);
}

void check_tvar(const TvarSpec& spec) {
    if (spec.n < 1) {
        throw Error(ErrorCode::InvalidArgument, "tvAR sample size must be positive");
    }
    if (!spec.a || !spec.sigma || !spec.alpha) {
        throw Error(ErrorCode::InvalidArgument, "tvAR spec has unset coefficient functions");
    }
    for (std::size_t i = 0; i < kCoefficientGrid; ++i) {
        const double u = grid_point(i, kCoefficientGrid);
        const double a = spec.a(u);
        if (!(std::abs(a) < 1.0)) {
            throw Error(ErrorCode::UnstableCoefficient, "|a(u)| >= 1 at u = " + std::to_string(u), i);
        }
        const double s = spec.sigma(u);
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw Error(ErrorCode::InvalidArgument, "sigma(u) must be finite and nonnegative", i);
        }
    }
}

}  // namespace

RawSeries RegressionSample::combined() const {
    Matrix out(static_cast<Eigen::Index>(response.n()), static_cast<Eigen::Index>(covariates.dim() + 1));
    out.col(0) = response.data().col(0);
    out.rightCols(static_cast<Eigen::Index>(covariates.dim())) = covariates.data();
    return RawSeries(std::move(out));
}

double symmetrized_gamma_draw(double alpha, Rng& rng) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorCode::InvalidShape, "Gamma shape must be positive, got " + std::to_string(alpha));
    }
    std::gamma_distribution<double> gamma(alpha, 1.0);
    const double g = gamma(rng);
    const double sign = (rng() >> 63) != 0 ? -1.0 : 1.0;
    return sign * g / std::sqrt(alpha * (alpha + 1.0));
}

double InnovationSource::next(double alpha) {
    if (kind_ == Innovation::Gaussian) {
        return normal_(rng_);
    }
    return symmetrized_gamma_draw(alpha, rng_);
}

RawSeries simulate_tvar(const TvarSpec& spec, std::uint64_t seed) {
    check_tvar(spec);
    const auto n = static_cast<double>(spec.n);

    InnovationSource burn(spec.innovation, make_rng(seed, stream::burn_in));
    const double a0 = spec.a(0.0);
    const double s0 = spec.sigma(0.0);
    const double alpha0 = spec.alpha(0.0);
    double x = 0.0;
    for (std::size_t i = 0; i < spec.burn_in; ++i) {
        x = a0 * x + s0 * burn.next(alpha0);
    }

    InnovationSource innovations(spec.innovation, make_rng(seed, stream::innovations));
    Matrix out(static_cast<Eigen::Index>(spec.n), 1);
    for (std::size_t t = 1; t <= spec.n; ++t) {
        const double u = static_cast<double>(t) / n;
        x = spec.a(u) * x + spec.sigma(u) * innovations.next(spec.alpha(u));
        out(static_cast<Eigen::Index>(t - 1), 0) = x;
    }
    return RawSeries(std::move(out));
}

RawSeries simulate_tvvar(const TvvarSpec& spec, std::uint64_t seed) {
    if (spec.n < 1 || spec.d < 1) {
        throw Error(ErrorCode::InvalidArgument, "tvVAR needs positive n and d");
    }
    if (!spec.A || !spec.B || !spec.mu) {
        throw Error(ErrorCode::InvalidArgument, "tvVAR spec has unset coefficient functions");
    }
    const auto d = static_cast<Eigen::Index>(spec.d);
    for (std::size_t i = 0; i < kCoefficientGrid; ++i) {
        const double u = grid_point(i, kCoefficientGrid);
        const Eigen::MatrixXd a = spec.A(u);
        const Eigen::MatrixXd b = spec.B(u);
        if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d || spec.mu(u).size() != d) {
            throw Error(ErrorCode::ShapeMismatch, "tvVAR coefficient has wrong shape", i);
        }
        if (!(spectral_radius(a) < 1.0)) {
            throw Error(ErrorCode::UnstableCoefficient, "spectral radius of A(u) >= 1 at u = " + std::to_string(u), i);
        }
    }

    auto draw = [&](InnovationSource& src, double alpha) {
        Eigen::VectorXd e(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            e[j] = src.next(alpha);
        }
        return e;
    };

    // Horner evaluation of sum_{i=0}^{T} A(0)^i B(0) eps_{-i}.
    InnovationSource burn(spec.innovation, make_rng(seed, stream::burn_in));
    const Eigen::MatrixXd a0 = spec.A(0.0);
    const Eigen::MatrixXd b0 = spec.B(0.0);
    const double alpha0 = spec.alpha(0.0);
    Eigen::VectorXd state = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i <= spec.truncation; ++i) {
        state = a0 * state + b0 * draw(burn, alpha0);
    }
    Eigen::VectorXd x = state + spec.mu(0.0);

    InnovationSource innovations(spec.innovation, make_rng(seed, stream::innovations));
    const auto n = static_cast<double>(spec.n);
    Matrix out(static_cast<Eigen::Index>(spec.n), d);
    Eigen::VectorXd mu_prev = spec.mu(0.0);
    for (std::size_t t = 1; t <= spec.n; ++t) {
        const double u = static_cast<double>(t) / n;
        const Eigen::VectorXd mu_now = spec.mu(u);
        x = spec.A(u) * (x - mu_prev) + spec.B(u) * draw(innovations, spec.alpha(u)) + mu_now;
        out.row(static_cast<Eigen::Index>(t - 1)) = x.transpose();
        mu_prev = mu_now;
    }
    return RawSeries(std::move(out));
}

RegressionSample simulate_regression(const RegressionSpec& spec, std::uint64_t seed) {
    if (!spec.beta || !spec.cov_factor) {
        throw Error(ErrorCode::InvalidArgument, "regression spec has unset coefficient functions");
    }
    TvarSpec noise_spec = spec.noise;
    noise_spec.n = spec.n;
    const RawSeries noise = simulate_tvar(noise_spec, derive_seed(seed, stream::noise));

    const auto p = spec.beta(0.0).size();
    Rng rng = make_rng(seed, stream::covariates);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix w(static_cast<Eigen::Index>(spec.n), p);
    Matrix z(static_cast<Eigen::Index>(spec.n), 1);
    const auto n = static_cast<double>(spec.n);
    Eigen::VectorXd standard(p);
    for (std::size_t t = 1; t <= spec.n; ++t) {
        const double u = static_cast<double>(t) / n;
        const Eigen::MatrixXd factor = spec.cov_factor(u);
        const Eigen::VectorXd beta = spec.beta(u);
        if (factor.rows() != p || factor.cols() != p || beta.size() != p) {
            throw Error(ErrorCode::ShapeMismatch, "regression coefficient has wrong shape", t - 1);
        }
        for (Eigen::Index j = 0; j < p; ++j) {
            standard[j] = normal(rng);
        }
        const Eigen::VectorXd wt = factor.transpose() * standard;
        const auto row = static_cast<Eigen::Index>(t - 1);
        w.row(row) = wt.transpose();
        z(row, 0) = beta.dot(wt) + noise(t - 1, 0);
    }
    return RegressionSample{RawSeries(std::move(z)), RawSeries(std::move(w))};
}

double spectral_radius(const Eigen::MatrixXd& a) {
    if (a.rows() == 1) {
        return std::abs(a(0, 0));
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd companion_matrix(std::span<const double> coefs) {
    const auto m = static_cast<Eigen::Index>(coefs.size());
    if (m < 1) {
        throw Error(ErrorCode::InvalidArgument, "companion matrix needs at least one coefficient");
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        a(0, j) = coefs[static_cast<std::size_t>(j)];
    }
    for (Eigen::Index i = 1; i < m; ++i) {
        a(i, i - 1) = 1.0;
    }
    return a;
}

StabilityReport stability_check(const MatrixFn& a, std::size_t grid_size, std::size_t horizon) {
    if (grid_size < 2) {
        throw Error(ErrorCode::InvalidArgument, "stability grid needs at least two points");
    }
    std::vector<Eigen::MatrixXd> grid(grid_size);
    StabilityReport report;
    for (std::size_t g = 0; g < grid_size; ++g) {
        grid[g] = a(grid_point(g, grid_size));
        report.rho_max = std::max(report.rho_max, spectral_radius(grid[g]));
    }
    const double rho = 0.5 * (1.0 + report.rho_max);
    constexpr double kDecayThreshold = 1e-8;

    auto op_norm = [](const Eigen::MatrixXd& m) {
        if (m.size() == 1) {
            return std::abs(m(0, 0));
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        return svd.singularValues()[0];
    };

    report.decay_ok = true;
    for (std::size_t start = 0; start < grid_size; ++start) {
        Eigen::MatrixXd product = Eigen::MatrixXd::Identity(grid[0].rows(), grid[0].cols());
        bool decayed = false;
        double rho_pow = 1.0;
        for (std::size_t i = 1; i <= horizon; ++i) {
            const std::size_t idx = start >= i - 1 ? start - (i - 1) : 0;
            product = product * grid[idx];
            rho_pow *= rho;
            const double norm = op_norm(product);
            report.k_hat = std::max(report.k_hat, norm / rho_pow);
            if (norm < kDecayThreshold) {
                decayed = true;
                break;
            }
        }
        report.decay_ok = report.decay_ok && decayed;
    }
    return report;
}

}  // namespace lscp
