#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "ssakit/session.hpp"

namespace ssacli {

struct InputArgs {
    std::string path;
    std::string column;          ///< empty: file default
    std::string format = "auto";  ///< auto, csv or plain
};

struct DecomposeArgs {
    InputArgs input;
    std::optional<std::size_t> L;
    std::string kind = "basic";
    std::string method = "auto";
    std::optional<std::size_t> neig;
    std::string out;
};

struct ReconstructArgs {
    std::string snapshot;
    std::string groups;
    std::string out;  ///< prefix
    bool update = false;
};

struct ForecastArgs {
    std::string snapshot;
    std::string groups;
    std::size_t len = 1;
    std::string method = "recurrent";
    double level = 0.95;
    std::size_t replicates = 100;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    bool only_new = true;
    bool subspace = false;
    std::string out;
};

struct ParestArgs {
    std::string snapshot;
    std::string groups;
    std::string method = "esprit-ls";
    std::string out;
};

struct LrrArgs {
    std::string snapshot;
    std::string groups;
    std::string coef_out;
    std::string roots_out;
};

struct CheckArgs {
    InputArgs input;
    std::string groups;
    std::size_t forecast_len = 1;
    std::size_t sliding_len = 0;
    std::optional<std::size_t> L;
    std::string length_sweep;  ///< first:last:step
    std::string start_sweep;   ///< first:last:step, 1-based start points
    std::optional<std::size_t> neig;
    std::string method = "recurrent";
    std::string kind = "basic";
    std::string svd_method = "auto";
    std::size_t threads = 1;
    std::string out;
};

struct TransformArgs {
    InputArgs input;
    std::string op;
    std::string other;
    std::string other_column;
    std::size_t first = 1;
    std::optional<std::size_t> count;
    std::string name;
    std::string out;
};

struct PlotArgs {
    std::string snapshot;
    std::string series;
    std::string series_column;
    std::string forecast;
    std::string type = "values";
    std::string idx;
    std::string groups;
    bool residuals = true;
    bool original = true;
    std::string out;
};

/// Shared state filled from global flags.
struct Context {
    ssa::SessionConfig config;
    bool quiet = false;
};

void run_decompose(const Context& ctx, const DecomposeArgs& a, std::ostream& out);
void run_summary(const Context& ctx, const std::string& snapshot, std::ostream& out);
void run_reconstruct(const Context& ctx, const ReconstructArgs& a, std::ostream& out);
void run_forecast(const Context& ctx, const ForecastArgs& a, std::ostream& out);
void run_parestimate(const Context& ctx, const ParestArgs& a, std::ostream& out);
void run_lrr(const Context& ctx, const LrrArgs& a, std::ostream& out);
void run_forecast_check(const Context& ctx, const CheckArgs& a, std::ostream& out);
void run_transform(const Context& ctx, const TransformArgs& a, std::ostream& out);
void run_plot(const Context& ctx, const PlotArgs& a, std::ostream& out);

}  // namespace ssacli
