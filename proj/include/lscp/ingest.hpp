#pragma once

#include "lscp/series.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lscp {

struct PriceSeries {
    std::vector<double> prices;
    std::optional<std::vector<std::string>> timestamps;
};

/// d_t = log p_t - log p_{t-1}; throws NonPositivePrice (with index) or
/// SeriesTooShort for fewer than two prices.
RawSeries log_returns(const PriceSeries& prices);

/// Elementwise arctan(d / gamma); throws InvalidGamma unless gamma > 0.
RawSeries arctan_transform(const RawSeries& series, double gamma);

/// Header row plus string cells; numeric conversion happens per column.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // one-based file line of each row

    /// Column by header name, or by zero-based index if `key` is an integer
    /// that is not a header name. Throws SchemaMismatch.
    [[nodiscard]] std::size_t column_index(std::string_view key) const;
    /// Parses one column as reals. Empty or malformed cells throw ParseError
    /// naming the line.
    [[nodiscard]] std::vector<double> numeric_column(std::size_t column) const;
    [[nodiscard]] Matrix numeric_columns(const std::vector<std::size_t>& columns) const;
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

/// Comma-separated with a header, 17 significant digits (exact round trip).
void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values);
void write_csv(const std::string& path, const std::vector<std::string>& header, const Matrix& values);

/// Reads the price column (name or index) of a CSV file.
PriceSeries read_prices(const std::string& path, std::string_view price_column);

}  // namespace lscp
