#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace lscp {

/// Row-major so that one observation is one contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Observations X_1..X_n (rows) of dimension d_raw (columns), at rescaled
/// times t/n. Entries are validated finite on construction.
class RawSeries {
public:
    explicit RawSeries(Matrix data);
    /// Univariate convenience constructor.
    static RawSeries from_values(std::span<const double> values);

    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.cols()); }
    [[nodiscard]] const Matrix& data() const noexcept { return data_; }
    [[nodiscard]] double operator()(std::size_t t, std::size_t j) const {
        return data_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
    }
    /// Copy of column j.
    [[nodiscard]] std::vector<double> column(std::size_t j) const;

private:
    Matrix data_;
};

/// Lifted moments Y_t = h(X_{t-offset..t}) for raw t = offset+1..n; row i of
/// `data` corresponds to raw index i + offset (zero-based).
struct LiftedSeries {
    Matrix data;
    std::size_t offset = 0;

    [[nodiscard]] std::size_t m() const noexcept { return static_cast<std::size_t>(data.rows()); }
    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(data.cols()); }
};

}  // namespace lscp
