#pragma once
// Direct re-implementations of the estimator quantities by plain double loops.
// Deliberately naive: every grid value is re-summed from scratch.

#include "lscp/lscp.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using lscp::EstimatorConfig;
using lscp::LiftedSeries;
using lscp::Matrix;
using lscp::ParameterFunctional;
using lscp::Vector;

// Window mean over zero-based rows max(0, t-k+1)..t.
inline Matrix pilot(const Matrix& y, std::size_t k) {
    const auto m = static_cast<std::size_t>(y.rows());
    Matrix out(y.rows(), y.cols());
    for (std::size_t t = 0; t < m; ++t) {
        const std::size_t lo = t + 1 >= k ? t + 1 - k : 0;
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            double s = 0.0;
            for (std::size_t i = lo; i <= t; ++i) s += y(static_cast<Eigen::Index>(i), j);
            out(static_cast<Eigen::Index>(t), j) = s / static_cast<double>(t - lo + 1);
        }
    }
    return out;
}

inline Vector row(const Matrix& a, std::size_t one_based) {
    return a.row(static_cast<Eigen::Index>(one_based - 1)).transpose();
}

// M_n on the grid t = 0..m, summing from tau+L to t each time.
inline std::vector<double> integrated(const Matrix& y, const Matrix& mu, const ParameterFunctional& f,
                                      const EstimatorConfig& cfg) {
    const auto m = static_cast<std::size_t>(y.rows());
    std::vector<double> out(m + 1, 0.0);
    for (std::size_t t = 0; t <= m; ++t) {
        double s = 0.0;
        for (std::size_t s_idx = cfg.tau + cfg.lag; s_idx <= t; ++s_idx) {
            const Vector p = row(mu, s_idx - cfg.lag);
            s += f.value(p) + f.gradient(p).dot(row(y, s_idx) - p);
        }
        out[t] = s / static_cast<double>(m);
    }
    return out;
}

inline std::vector<double> plugin(const Matrix& mu, const ParameterFunctional& f, const EstimatorConfig& cfg) {
    const auto m = static_cast<std::size_t>(mu.rows());
    std::vector<double> out(m + 1, 0.0);
    for (std::size_t t = 0; t <= m; ++t) {
        double s = 0.0;
        for (std::size_t s_idx = cfg.tau; s_idx <= t; ++s_idx) s += f.value(row(mu, s_idx));
        out[t] = s / static_cast<double>(m);
    }
    return out;
}

// B_t for t = tau+L..m-b.
inline std::vector<double> block_sums(const Matrix& y, const Matrix& mu, const ParameterFunctional& f,
                                      const EstimatorConfig& cfg) {
    const auto m = static_cast<std::size_t>(y.rows());
    std::vector<double> out;
    for (std::size_t t = cfg.tau + cfg.lag; t + cfg.block <= m; ++t) {
        const Vector p = row(mu, t - cfg.lag);
        Vector acc = Vector::Zero(y.cols());
        for (std::size_t i = 1; i <= cfg.block; ++i) acc += row(y, t + i) - p;
        out.push_back(f.gradient(p).dot(acc) / std::sqrt(static_cast<double>(cfg.block)));
    }
    return out;
}

inline std::vector<double> variance(const std::vector<double>& sums, std::size_t m, const EstimatorConfig& cfg) {
    std::vector<double> out(m + 1, 0.0);
    const std::size_t first = cfg.tau + cfg.lag;
    for (std::size_t t = 0; t <= m; ++t) {
        double s = 0.0;
        for (std::size_t i = 0; i < sums.size(); ++i) {
            if (first + i + cfg.block <= t) s += sums[i] * sums[i];
        }
        out[t] = s / static_cast<double>(m);
    }
    return out;
}

inline std::vector<double> cusum(const std::vector<double>& mn, double u_n) {
    const std::size_t m = mn.size() - 1;
    std::vector<double> out(m + 1);
    for (std::size_t t = 0; t <= m; ++t) {
        const double u = static_cast<double>(t) / static_cast<double>(m);
        const double w = u > u_n ? (u - u_n) / (1.0 - u_n) : 0.0;
        out[t] = mn[t] - w * mn[m];
    }
    return out;
}

// Bootstrap path with the multipliers supplied explicitly.
inline std::vector<double> multiplier_path(const std::vector<double>& sums, const std::vector<double>& z,
                                           std::size_t m, const EstimatorConfig& cfg) {
    std::vector<double> out(m + 1, 0.0);
    const std::size_t first = cfg.tau + cfg.lag;
    for (std::size_t t = 0; t <= m; ++t) {
        double s = 0.0;
        for (std::size_t i = 0; i < sums.size(); ++i) {
            if (first + i + cfg.block <= t) s += z[i] * sums[i];
        }
        out[t] = s / std::sqrt(static_cast<double>(m));
    }
    return out;
}

inline double sup_abs_from(const std::vector<double>& path, double u_n) {
    const std::size_t m = path.size() - 1;
    double best = 0.0;
    for (std::size_t t = 0; t <= m; ++t) {
        if (static_cast<double>(t) + 1e-9 >= u_n * static_cast<double>(m)) best = std::max(best, std::abs(path[t]));
    }
    return best;
}

// Central differences with step 1e-6 (1 + |mu_i|).
inline Vector fd_gradient(const ParameterFunctional& f, const Vector& mu) {
    Vector g(mu.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double h = 1e-6 * (1.0 + std::abs(mu[i]));
        Vector up = mu, down = mu;
        up[i] += h;
        down[i] -= h;
        g[i] = (f.value_unchecked(up) - f.value_unchecked(down)) / (2.0 * h);
    }
    return g;
}

inline std::vector<double> normal_vector(std::size_t n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, scale);
    std::vector<double> out(n);
    for (auto& v : out) v = z(rng);
    return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = a.size() == b.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace oracle
