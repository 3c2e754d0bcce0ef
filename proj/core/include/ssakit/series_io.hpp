#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ssa {

/// Equidistant time axis: t_k = start + k * step, k = 0, 1, ...
struct TimeIndex {
    double start = 0.0;
    double step = 1.0;
    std::string unit;

    double at(std::size_t k) const { return start + static_cast<double>(k) * step; }

    friend bool operator==(const TimeIndex&, const TimeIndex&) = default;
};

/// Real-valued equidistant series. Immutable after construction; all values
/// are finite and there are at least three of them.
class TimeSeries {
public:
    static constexpr std::size_t kMinLength = 3;

    explicit TimeSeries(std::vector<double> values, std::optional<TimeIndex> index = std::nullopt,
                        std::string name = {});

    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& data() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    const std::optional<TimeIndex>& index() const noexcept { return index_; }
    const std::string& name() const noexcept { return name_; }

    /// New series with the same index metadata and name but other values.
    TimeSeries with_values(std::vector<double> values) const;
    TimeSeries renamed(std::string name) const;

    /// Sub-series [first, first + count) keeping the time axis aligned.
    TimeSeries slice(std::size_t first, std::size_t count) const;

private:
    std::vector<double> values_;
    std::optional<TimeIndex> index_;
    std::string name_;
};

/// Index shifted so it starts `offset` steps after `index`.
std::optional<TimeIndex> shift_index(const std::optional<TimeIndex>& index, std::size_t offset);

enum class SeriesFormat { csv, plain };

struct LoadOptions {
    /// csv only: value column by header name or 1-based position. When
    /// unset, a single-column file is the value column, otherwise the first
    /// column is time and the second holds values.
    std::optional<std::string> column;
    /// Receives non-fatal diagnostics, e.g. a dropped non-equidistant index.
    std::function<void(const std::string&)> warn;
};

TimeSeries load_series(const std::filesystem::path& path, SeriesFormat format,
                       const LoadOptions& options = {});
TimeSeries parse_series(std::istream& in, SeriesFormat format, const LoadOptions& options = {});

/// Format detected from the extension: ".csv" is csv, anything else plain.
SeriesFormat guess_format(const std::filesystem::path& path);

struct LabeledSeries {
    std::string label;
    TimeSeries series;
};

/// One csv with a shared time column (when the first series has an index)
/// followed by one value column per series.
void write_series(const std::filesystem::path& path, const TimeSeries& series);
void write_series(const std::filesystem::path& path, std::span<const LabeledSeries> collection);
void write_series(std::ostream& out, std::span<const LabeledSeries> collection);

/// Plain csv table: header row plus equal-length numeric columns.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns);
void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns);

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_double(double value);

}  // namespace ssa
