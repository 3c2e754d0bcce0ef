#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssakit/series_io.hpp"

namespace ssa {

class Session;

/// Ordered list of eigentriple index sets (1-based), optionally labeled.
struct Grouping {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::string> labels;

    /// "1,4|2,3|5-6": groups split by '|', indices by ',', ranges with '-'.
    static Grouping parse(std::string_view text);
    /// {{first}, {first + 1}, ..., {last}}.
    static Grouping elementary(std::size_t first, std::size_t last);
    static Grouping single(std::vector<std::size_t> indices);

    std::size_t size() const noexcept { return groups.size(); }
    std::size_t max_index() const noexcept;
    bool disjoint() const;
    /// Explicit label or "F<j+1>".
    std::string label(std::size_t j) const;
    /// Index set printed back in the parse syntax.
    std::string describe(std::size_t j) const;
};

struct ReconstructionResult {
    std::vector<TimeSeries> components;
    std::vector<std::string> labels;
    /// Original minus the sum of components; only for disjoint groupings.
    std::optional<TimeSeries> residual;
    /// The series that was decomposed.
    std::optional<TimeSeries> original;

    const TimeSeries& operator[](std::size_t j) const { return components.at(j); }
    std::size_t size() const noexcept { return components.size(); }
};

/// Elementary reconstructed series for eigentriple i (1-based). Extends the
/// decomposition when i is beyond what has been computed.
TimeSeries elementary(Session& session, std::size_t i);

/// Makes eigentriples 1..max index of `grouping` available; throws
/// ParameterError when an index is zero or exceeds the decomposition bound.
void ensure_computed(Session& session, const Grouping& grouping);

ReconstructionResult reconstruct(Session& session, const Grouping& grouping);

/// Residual of a reconstruction; StateError when the grouping overlapped.
const TimeSeries& residuals(const ReconstructionResult& result);

/// Weighted correlation matrix of reconstructed components.
struct WCorMatrix {
    Eigen::MatrixXd values;
    std::vector<std::uint8_t> valid;  ///< 0 where a component is identically zero
    std::vector<std::string> labels;

    std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
};

/// <a, b>_w / (|a|_w |b|_w) with w the antidiagonal multiplicities.
WCorMatrix wcor(std::span<const std::vector<double>> components, std::span<const double> weights,
                std::vector<std::string> labels = {});
WCorMatrix wcor(Session& session, const Grouping& grouping);

/// Components as columns (plus residual when present).
void write_reconstruction(const std::filesystem::path& path, const ReconstructionResult& result);
/// Labeled square matrix: first column holds row labels.
void write_wcor(const std::filesystem::path& path, const WCorMatrix& w);
void write_wcor(std::ostream& out, const WCorMatrix& w);

}  // namespace ssa
