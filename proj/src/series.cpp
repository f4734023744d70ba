#include "lscp/series.hpp"

#include "lscp/error.hpp"

#include <cmath>

namespace lscp {

RawSeries::RawSeries(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.cols() < 1) {
        throw Error(ErrorCode::InvalidArgument, "raw series needs at least one row and one column");
    }
    for (Eigen::Index t = 0; t < data_.rows(); ++t) {
        for (Eigen::Index j = 0; j < data_.cols(); ++j) {
            if (!std::isfinite(data_(t, j))) {
                throw Error(ErrorCode::InvalidArgument, "non-finite observation", static_cast<std::size_t>(t));
            }
        }
    }
}

RawSeries RawSeries::from_values(std::span<const double> values) {
    Matrix m(static_cast<Eigen::Index>(values.size()), 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(static_cast<Eigen::Index>(i), 0) = values[i];
    }
    return RawSeries(std::move(m));
}

std::vector<double> RawSeries::column(std::size_t j) const {
    if (j >= dim()) {
        throw Error(ErrorCode::InvalidArgument, "column index out of range");
    }
    std::vector<double> out(n());
    for (std::size_t t = 0; t < n(); ++t) {
        out[t] = (*this)(t, j);
    }
    return out;
}

}  // namespace lscp
