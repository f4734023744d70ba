#include "lscp/ingest.hpp"

#include "lscp/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

namespace lscp {

RawSeries log_returns(const PriceSeries& prices) {
    const auto& p = prices.prices;
    if (p.size() < 2) {
        throw Error(ErrorCode::SeriesTooShort, "log returns need at least two prices");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0) || !std::isfinite(p[i])) {
            throw Error(ErrorCode::NonPositivePrice, "price must be positive and finite", i);
        }
    }
    std::vector<double> d(p.size() - 1);
    for (std::size_t t = 1; t < p.size(); ++t) {
        d[t - 1] = std::log(p[t]) - std::log(p[t - 1]);
    }
    return RawSeries::from_values(d);
}

RawSeries arctan_transform(const RawSeries& series, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw Error(ErrorCode::InvalidGamma, "gamma must be positive and finite");
    }
    Matrix out = series.data().unaryExpr([gamma](double d) { return std::atan(d / gamma); });
    return RawSeries(std::move(out));
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        const auto cell = trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        cells.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split_line(line);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                                   std::to_string(table.header.size()) + " fields, found " +
                                                   std::to_string(cells.size()),
                        line_no);
        }
        table.rows.push_back(std::move(cells));
        table.line_numbers.push_back(line_no);
    }
    if (!have_header) {
        throw Error(ErrorCode::SchemaMismatch, "empty CSV input: no header row");
    }
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    }
    return parse_csv(in);
}

std::size_t CsvTable::column_index(std::string_view key) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == key) return i;
    }
    std::size_t idx = 0;
    const auto* end = key.data() + key.size();
    auto [ptr, ec] = std::from_chars(key.data(), end, idx);
    if (!key.empty() && ec == std::errc() && ptr == end && idx < header.size()) {
        return idx;
    }
    throw Error(ErrorCode::SchemaMismatch, "no column '" + std::string(key) + "'");
}

std::vector<double> CsvTable::numeric_column(std::size_t column) const {
    if (column >= header.size()) {
        throw Error(ErrorCode::SchemaMismatch, "column index out of range");
    }
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto value = parse_double(rows[r][column]);
        if (!value) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_numbers[r]) + ": cannot parse '" +
                                                   rows[r][column] + "' in column '" + header[column] + "'",
                        line_numbers[r]);
        }
        out.push_back(*value);
    }
    return out;
}

Matrix CsvTable::numeric_columns(const std::vector<std::size_t>& columns) const {
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto col = numeric_column(columns[j]);
        for (std::size_t r = 0; r < col.size(); ++r) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = col[r];
        }
    }
    return out;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values) {
    if (header.size() != static_cast<std::size_t>(values.cols())) {
        throw Error(ErrorCode::SchemaMismatch, "header width does not match the data");
    }
    for (std::size_t j = 0; j < header.size(); ++j) {
        out << (j ? "," : "") << header[j];
    }
    out << '\n' << std::setprecision(17);
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            out << (j ? "," : "") << values(r, j);
        }
        out << '\n';
    }
}

void write_csv(const std::string& path, const std::vector<std::string>& header, const Matrix& values) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
    }
    write_csv(out, header, values);
}

PriceSeries read_prices(const std::string& path, std::string_view price_column) {
    const CsvTable table = read_csv(path);
    if (table.rows.empty()) {
        throw Error(ErrorCode::SchemaMismatch, "price file has no data rows");
    }
    PriceSeries out;
    out.prices = table.numeric_column(table.column_index(price_column));
    return out;
}

}  // namespace lscp
