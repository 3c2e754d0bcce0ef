#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssakit/reconstruction.hpp"
#include "ssakit/series_io.hpp"
#include "ssakit/session.hpp"

namespace ssa {

/// Linear recurrence y_i = sum_{j=1}^{L-1} a_j y_{i-j}.
struct Lrr {
    std::vector<double> coef;  ///< a_1, ..., a_{L-1}
    double nu2 = 0.0;
    std::vector<std::size_t> group;
    std::size_t L = 0;

    std::size_t order() const noexcept { return coef.size(); }
    /// Next value given the history; only the last order() entries are used.
    double next(std::span<const double> history) const;
};

/// LRR from an explicit orthonormal basis (columns of length L).
Lrr lrr_from_basis(const Eigen::MatrixXd& basis);
/// LRR spanned by eigenvectors of `group` (1-based).
Lrr lrr(Session& session, const std::vector<std::size_t>& group);

enum class ForecastMethod { recurrent, vector };
std::string_view to_string(ForecastMethod m);

struct ForecastResult {
    std::string label;
    ForecastMethod method = ForecastMethod::recurrent;
    std::vector<double> base;   ///< reconstructed series, length N
    std::vector<double> ahead;  ///< M forecasted values
    std::optional<TimeIndex> index;  ///< index of the base series
    bool only_new = true;

    /// Forecast values, optionally preceded by the base series.
    std::vector<double> values() const;
    /// Index of values(): extends the base index by M steps.
    std::optional<TimeIndex> values_index() const;
};

struct VectorForecastOptions {
    /// Iterate in subspace coordinates instead of building the full L x (K+M+L-1)
    /// matrix. Produces the same numbers up to rounding.
    bool subspace = false;
};

std::vector<ForecastResult> rforecast(Session& session, const Grouping& grouping, std::size_t M,
                                      bool only_new = true);
std::vector<ForecastResult> vforecast(Session& session, const Grouping& grouping, std::size_t M,
                                      bool only_new = true, VectorForecastOptions options = {});

/// Recurrent continuation of `base` by M values.
std::vector<double> apply_lrr(const Lrr& lrr, std::span<const double> base, std::size_t M);

/// Orthogonal projector onto the span of the truncated basis, formed as
/// V V^T + (1 - nu^2) R R^T.
Eigen::MatrixXd vector_projector(const Eigen::MatrixXd& basis);

/// Vector forecast of the series whose lagged vectors are projected onto
/// span(basis); returns the M new values.
std::vector<double> vector_forecast(const HankelOperator& op, const Eigen::MatrixXd& basis,
                                    std::size_t M, VectorForecastOptions options = {},
                                    std::vector<double>* base_out = nullptr);

struct BootstrapOptions {
    double level = 0.95;
    std::size_t replicates = 100;
    ForecastMethod method = ForecastMethod::recurrent;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

struct BootstrapForecast {
    std::vector<double> point;  ///< mean of replicate forecasts
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> base;   ///< reconstructed signal
    std::optional<TimeIndex> index;
    double level = 0.95;
    std::size_t replicates = 0;
    std::size_t dropped = 0;
    std::uint64_t seed = 0;
    ForecastMethod method = ForecastMethod::recurrent;
};

BootstrapForecast bforecast(Session& session, const std::vector<std::size_t>& group, std::size_t M,
                            const BootstrapOptions& options = {});

/// Sample quantile with linear interpolation between order statistics
/// (R's type 7). `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double p);

struct ForecastCheckOptions {
    std::size_t forecast_len = 1;
    std::size_t sliding_len = 0;
    std::optional<std::size_t> L;
    std::optional<std::size_t> neig;
    ForecastMethod method = ForecastMethod::recurrent;
    SsaKind kind = SsaKind::basic;
    SvdMethod svd_method = SvdMethod::automatic;
    SessionConfig config;
    std::size_t threads = 1;  ///< windows evaluated in parallel
};

struct ForecastCheckResult {
    std::vector<double> mse;  ///< per grouping, mean over successful windows
    std::size_t windows = 0;
    std::vector<std::size_t> missing;  ///< failed windows per grouping
};

ForecastCheckResult forecast_check(std::span<const double> series,
                                   const std::vector<std::vector<std::size_t>>& groups,
                                   const ForecastCheckOptions& options);

/// step, [time,] point[, lower, upper]
void write_forecasts(const std::filesystem::path& path, const std::vector<ForecastResult>& results);
void write_bootstrap(const std::filesystem::path& path, const BootstrapForecast& f, bool only_new = true);

}  // namespace ssa
