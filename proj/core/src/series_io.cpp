#include "ssakit/series_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ssakit/errors.hpp"

namespace ssa {

namespace {

void check_values(const std::vector<double>& values) {
    if (values.size() < TimeSeries::kMinLength) {
        throw ValidationError("time series needs at least " +
                              std::to_string(TimeSeries::kMinLength) + " values, got " +
                              std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw ValidationError("non-finite value at position " + std::to_string(i + 1));
        }
    }
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(',', pos);
        out.push_back(trim(line.substr(pos, next == std::string_view::npos ? next : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

// Parses one numeric token. Returns nullopt when the token is not a number at
// all; "nan"/"inf" spellings parse to non-finite doubles.
std::optional<double> parse_number(std::string_view token) {
    if (token.empty()) return std::nullopt;
    if (token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) {
        return token.front() == '-' ? -HUGE_VAL : HUGE_VAL;
    }
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return value;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_missing_token(std::string_view token) {
    const auto t = lower(token);
    return t == "na" || t == "nan" || t == "inf" || t == "-inf" || t == "+inf" || t == "infinity" ||
           t == "-infinity";
}

double parse_cell(std::string_view token, std::size_t line) {
    if (is_missing_token(token)) {
        throw ValidationError("line " + std::to_string(line) + ": non-finite value '" +
                              std::string(token) + "'");
    }
    const auto v = parse_number(token);
    if (!v) throw FormatError(line, "cannot parse number '" + std::string(token) + "'");
    if (!std::isfinite(*v)) {
        throw ValidationError("line " + std::to_string(line) + ": non-finite value '" +
                              std::string(token) + "'");
    }
    return *v;
}

void default_warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

TimeSeries parse_plain(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto token = trim(line);
        if (token.empty()) continue;
        values.push_back(parse_cell(token, lineno));
    }
    return TimeSeries(std::move(values));
}

std::optional<TimeIndex> detect_index(const std::vector<double>& times,
                                      const std::function<void(const std::string&)>& warn) {
    const auto n = times.size();
    if (n < 2) return std::nullopt;
    const double step = (times.back() - times.front()) / static_cast<double>(n - 1);
    bool ok = step > 0.0 && std::isfinite(step);
    for (std::size_t k = 0; ok && k < n; ++k) {
        const double expected = times.front() + static_cast<double>(k) * step;
        if (std::abs(times[k] - expected) > 1e-9 * step) ok = false;
    }
    if (!ok) {
        warn("time column is not equidistant; index dropped");
        return std::nullopt;
    }
    return TimeIndex{times.front(), step, {}};
}

TimeSeries parse_csv(std::istream& in, const LoadOptions& options) {
    const auto& warn = options.warn ? options.warn : std::function<void(const std::string&)>(default_warn);

    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::size_t ncols = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split_commas(line);
        if (ncols == 0) {
            ncols = cells.size();
            const bool numeric = std::all_of(cells.begin(), cells.end(), [](std::string_view c) {
                return parse_number(c).has_value() || is_missing_token(c);
            });
            if (!numeric) {
                for (auto c : cells) {
                    if (c.size() >= 2 && c.front() == '"' && c.back() == '"') c = c.substr(1, c.size() - 2);
                    header.emplace_back(c);
                }
                continue;
            }
        }
        if (cells.size() != ncols) {
            throw FormatError(lineno, "expected " + std::to_string(ncols) + " columns, found " +
                                          std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(ncols);
        for (auto c : cells) row.push_back(parse_cell(c, lineno));
        rows.push_back(std::move(row));
    }
    if (ncols == 0) throw ValidationError("csv input is empty");

    std::size_t value_col = ncols == 1 ? 0 : 1;
    bool has_time = ncols >= 2;
    if (options.column) {
        const auto& want = *options.column;
        auto it = std::find(header.begin(), header.end(), want);
        if (it != header.end()) {
            value_col = static_cast<std::size_t>(it - header.begin());
        } else {
            std::size_t pos = 0;
            const auto [p, ec] = std::from_chars(want.data(), want.data() + want.size(), pos);
            if (ec != std::errc() || p != want.data() + want.size() || pos < 1 || pos > ncols) {
                throw FormatError(1, "no column '" + want + "'");
            }
            value_col = pos - 1;
        }
        has_time = ncols >= 2 && value_col != 0;
    }

    std::vector<double> values;
    std::vector<double> times;
    values.reserve(rows.size());
    for (const auto& r : rows) {
        values.push_back(r[value_col]);
        if (has_time) times.push_back(r[0]);
    }
    std::optional<TimeIndex> index;
    if (has_time) index = detect_index(times, warn);
    std::string name = value_col < header.size() ? header[value_col] : std::string{};
    return TimeSeries(std::move(values), index, std::move(name));
}

void write_csv_rows(std::ostream& out, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& columns) {
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
    const std::size_t n = columns.empty() ? 0 : columns.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            out << (j ? "," : "") << format_double(columns[j][i]);
        }
        out << '\n';
    }
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values, std::optional<TimeIndex> index, std::string name)
    : values_(std::move(values)), index_(std::move(index)), name_(std::move(name)) {
    check_values(values_);
    if (index_ && !(index_->step > 0.0 && std::isfinite(index_->step) && std::isfinite(index_->start))) {
        throw ValidationError("time index step must be positive and finite");
    }
}

TimeSeries TimeSeries::with_values(std::vector<double> values) const {
    return TimeSeries(std::move(values), index_, name_);
}

TimeSeries TimeSeries::renamed(std::string name) const {
    return TimeSeries(values_, index_, std::move(name));
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
    if (first >= values_.size() || count > values_.size() - first) {
        throw ParameterError("slice [" + std::to_string(first) + ", " + std::to_string(first + count) +
                             ") outside series of length " + std::to_string(values_.size()));
    }
    std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(first),
                          values_.begin() + static_cast<std::ptrdiff_t>(first + count));
    return TimeSeries(std::move(v), shift_index(index_, first), name_);
}

std::optional<TimeIndex> shift_index(const std::optional<TimeIndex>& index, std::size_t offset) {
    if (!index) return std::nullopt;
    TimeIndex out = *index;
    out.start = index->at(offset);
    return out;
}

SeriesFormat guess_format(const std::filesystem::path& path) {
    return lower(path.extension().string()) == ".csv" ? SeriesFormat::csv : SeriesFormat::plain;
}

TimeSeries parse_series(std::istream& in, SeriesFormat format, const LoadOptions& options) {
    return format == SeriesFormat::csv ? parse_csv(in, options) : parse_plain(in);
}

TimeSeries load_series(const std::filesystem::path& path, SeriesFormat format,
                       const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return parse_series(in, format, options);
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    if (ec != std::errc()) throw IoError("cannot format number");
    return std::string(buf, ptr);
}

void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw ParameterError("header/column count mismatch");
    for (const auto& c : columns) {
        if (c.size() != columns.front().size()) throw ParameterError("columns differ in length");
    }
    write_csv_rows(out, header, columns);
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns) {
    std::ostringstream buf;
    write_table(buf, header, columns);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << buf.str();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_series(std::ostream& out, std::span<const LabeledSeries> collection) {
    if (collection.empty()) throw ValidationError("cannot write an empty series collection");
    const auto n = collection.front().series.size();
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
    if (const auto& idx = collection.front().series.index()) {
        header.emplace_back(idx->unit.empty() ? "time" : idx->unit);
        std::vector<double> t(n);
        for (std::size_t k = 0; k < n; ++k) t[k] = idx->at(k);
        columns.push_back(std::move(t));
    }
    for (const auto& item : collection) {
        if (item.series.size() != n) {
            throw ValidationError("series '" + item.label + "' has length " +
                                  std::to_string(item.series.size()) + ", expected " + std::to_string(n));
        }
        header.push_back(item.label.empty() ? "value" : item.label);
        columns.push_back(item.series.data());
    }
    write_csv_rows(out, header, columns);
}

void write_series(const std::filesystem::path& path, std::span<const LabeledSeries> collection) {
    std::ostringstream buf;
    write_series(buf, collection);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << buf.str();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_series(const std::filesystem::path& path, const TimeSeries& series) {
    const LabeledSeries one{series.name().empty() ? "value" : series.name(), series};
    write_series(path, std::span<const LabeledSeries>(&one, 1));
}

}  // namespace ssa
