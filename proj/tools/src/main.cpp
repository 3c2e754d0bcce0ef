#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "config_file.hpp"
#include "ssakit/errors.hpp"

namespace {

enum Exit : int {
    kOk = 0,
    kInternal = 1,
    kParameter = 2,
    kValidation = 3,
    kNumerical = 4,
    kIo = 5,
};

void add_input(CLI::App* cmd, ssacli::InputArgs& in) {
    cmd->add_option("input", in.path, "Series file (csv or plain text)")->required();
    cmd->add_option("--column", in.column, "csv value column, by header name or 1-based position");
    cmd->add_option("--format", in.format, "Input format")->check(CLI::IsMember({"auto", "csv", "plain"}));
}

}  // namespace

int main(int argc, char** argv) {
    using namespace ssacli;

    CLI::App app{"Singular spectrum analysis: decompose, reconstruct, forecast and estimate."};
    app.set_version_flag("--version", "ssa 0.3.0");
    app.require_subcommand(1);

    Context ctx;
    std::string config_path;
    app.add_option("--config", config_path, "key = value file with session defaults")->check(CLI::ExistingFile);
    app.add_flag("-q,--quiet", ctx.quiet, "Suppress warnings");

    DecomposeArgs dec;
    auto* c_dec = app.add_subcommand("decompose", "Embed a series, decompose it and save a snapshot");
    add_input(c_dec, dec.input);
    c_dec->add_option("-L,--length", dec.L, "Window length (default N/2)");
    c_dec->add_option("--kind", dec.kind, "Decomposition kind")->check(CLI::IsMember({"basic", "toeplitz"}));
    c_dec->add_option("--method", dec.method, "SVD backend")->check(CLI::IsMember({"auto", "eigen", "svd", "lanczos"}));
    c_dec->add_option("--neig", dec.neig, "Number of eigentriples to compute");
    c_dec->add_option("-o,--out", dec.out, "Snapshot path")->required();

    std::string summary_path;
    auto* c_sum = app.add_subcommand("summary", "Print the summary of a snapshot");
    c_sum->add_option("snapshot", summary_path, "Snapshot file")->required();

    ReconstructArgs rec;
    auto* c_rec = app.add_subcommand("reconstruct", "Reconstruct grouped components");
    c_rec->add_option("snapshot", rec.snapshot, "Snapshot file")->required();
    c_rec->add_option("-g,--groups", rec.groups, "Groups, e.g. \"1,4|2,3|5-6\"")->required();
    c_rec->add_option("-o,--out", rec.out, "Output prefix: <prefix>.csv plus one file per component")->required();
    c_rec->add_flag("--update", rec.update, "Store the computed elementary series back into the snapshot");

    ForecastArgs fc;
    auto* c_fc = app.add_subcommand("forecast", "Recurrent, vector or bootstrap forecasts");
    c_fc->add_option("snapshot", fc.snapshot, "Snapshot file")->required();
    c_fc->add_option("-g,--groups", fc.groups, "Groups to forecast")->required();
    c_fc->add_option("-n,--len", fc.len, "Forecast horizon")->required();
    c_fc->add_option("--method", fc.method, "Forecast method")
        ->check(CLI::IsMember({"recurrent", "vector", "bootstrap-recurrent", "bootstrap-vector"}));
    c_fc->add_option("--level", fc.level, "Bootstrap confidence level");
    c_fc->add_option("--replicates", fc.replicates, "Bootstrap replicates");
    c_fc->add_option("--seed", fc.seed, "Bootstrap seed");
    c_fc->add_option("--threads", fc.threads, "Bootstrap worker threads");
    c_fc->add_flag("--only-new,!--with-base", fc.only_new, "Emit only new points (default) or prepend the reconstruction");
    c_fc->add_flag("--subspace", fc.subspace, "Vector method: iterate in subspace coordinates");
    c_fc->add_option("-o,--out", fc.out, "Output csv")->required();

    ParestArgs pe;
    auto* c_pe = app.add_subcommand("parestimate", "Estimate periods and damping rates");
    c_pe->add_option("snapshot", pe.snapshot, "Snapshot file")->required();
    c_pe->add_option("-g,--groups", pe.groups, "Group(s) to analyse")->required();
    c_pe->add_option("--method", pe.method, "Estimator")->check(CLI::IsMember({"esprit-ls", "esprit", "pairs"}));
    c_pe->add_option("-o,--out", pe.out, "Optional csv output");

    LrrArgs lr;
    auto* c_lr = app.add_subcommand("lrr", "Forecasting LRR and its characteristic roots");
    c_lr->add_option("snapshot", lr.snapshot, "Snapshot file")->required();
    c_lr->add_option("-g,--groups", lr.groups, "Signal group")->required();
    c_lr->add_option("--coef", lr.coef_out, "csv of coefficients a_1..a_{L-1}");
    c_lr->add_option("--roots", lr.roots_out, "csv of roots");

    CheckArgs ck;
    auto* c_ck = app.add_subcommand("forecast-check", "Sliding-window forecast accuracy");
    add_input(c_ck, ck.input);
    c_ck->add_option("-g,--groups", ck.groups, "Groups to compare")->required();
    c_ck->add_option("--forecast-len", ck.forecast_len, "Forecast horizon per window");
    c_ck->add_option("--sliding-len", ck.sliding_len, "Training window length")->required();
    c_ck->add_option("-L,--length", ck.L, "SSA window length (default sliding-len/2)");
    c_ck->add_option("--length-sweep", ck.length_sweep, "Sweep L as first:last:step");
    c_ck->add_option("--start-sweep", ck.start_sweep, "Sweep the 1-based start point as first:last:step");
    c_ck->add_option("--neig", ck.neig, "Eigentriples per window");
    c_ck->add_option("--method", ck.method, "Forecast method")->check(CLI::IsMember({"recurrent", "vector"}));
    c_ck->add_option("--kind", ck.kind, "Decomposition kind")->check(CLI::IsMember({"basic", "toeplitz"}));
    c_ck->add_option("--svd-method", ck.svd_method, "SVD backend")->check(CLI::IsMember({"auto", "eigen", "svd", "lanczos"}));
    c_ck->add_option("--threads", ck.threads, "Worker threads");
    c_ck->add_option("-o,--out", ck.out, "Output csv")->required();

    TransformArgs tr;
    auto* c_tr = app.add_subcommand("transform", "Elementwise helpers for pipelines");
    add_input(c_tr, tr.input);
    c_tr->add_option("--op", tr.op, "Operation")
        ->required()
        ->check(CLI::IsMember({"square", "sqrt", "negate", "add", "subtract", "slice"}));
    c_tr->add_option("--other", tr.other, "Second operand for add/subtract");
    c_tr->add_option("--other-column", tr.other_column, "csv value column of --other");
    c_tr->add_option("--first", tr.first, "slice: 1-based first point");
    c_tr->add_option("--count", tr.count, "slice: number of points (default to the end)");
    c_tr->add_option("--name", tr.name, "Name of the output column");
    c_tr->add_option("-o,--out", tr.out, "Output csv")->required();

    PlotArgs pl;
    auto* c_pl = app.add_subcommand("plot", "SVG figure plus companion csv");
    c_pl->add_option("--snapshot", pl.snapshot, "Snapshot file");
    c_pl->add_option("--type", pl.type, "Plot type")
        ->check(CLI::IsMember({"values", "vectors", "paired", "wcor", "series", "reconstruction", "roots", "forecast"}));
    c_pl->add_option("--idx", pl.idx, "Eigentriple indices, e.g. 1-12");
    c_pl->add_option("-g,--groups", pl.groups, "Groups");
    c_pl->add_option("--series", pl.series, "forecast: observed series to draw underneath");
    c_pl->add_option("--series-column", pl.series_column, "csv value column of --series");
    c_pl->add_option("--forecast", pl.forecast, "forecast: csv written by the forecast command");
    c_pl->add_flag("!--no-residuals", pl.residuals, "reconstruction: omit the residual panel");
    c_pl->add_flag("!--no-original", pl.original, "reconstruction: omit the original series");
    c_pl->add_option("-o,--out", pl.out, "Output .svg (the csv goes next to it)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParameter;
    }

    try {
        if (!config_path.empty()) apply_config_file(config_path, ctx.config);
        auto& out = std::cout;
        if (*c_dec) run_decompose(ctx, dec, out);
        else if (*c_sum) run_summary(ctx, summary_path, out);
        else if (*c_rec) run_reconstruct(ctx, rec, out);
        else if (*c_fc) run_forecast(ctx, fc, out);
        else if (*c_pe) run_parestimate(ctx, pe, out);
        else if (*c_lr) run_lrr(ctx, lr, out);
        else if (*c_ck) run_forecast_check(ctx, ck, out);
        else if (*c_tr) run_transform(ctx, tr, out);
        else if (*c_pl) run_plot(ctx, pl, out);
        return kOk;
    } catch (const ssa::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParameter;
    } catch (const ssa::StateError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParameter;
    } catch (const ssa::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const ssa::NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const ssa::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}
