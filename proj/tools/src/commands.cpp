#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ssakit/errors.hpp"
#include "ssakit/forecasting.hpp"
#include "ssakit/parest.hpp"
#include "ssakit/reconstruction.hpp"
#include "ssakit/snapshot.hpp"

namespace ssacli {

using namespace ssa;
namespace fs = std::filesystem;

namespace {

TimeSeries load_input(const InputArgs& in, bool quiet) {
    SeriesFormat format;
    if (in.format == "auto") format = guess_format(in.path);
    else if (in.format == "csv") format = SeriesFormat::csv;
    else if (in.format == "plain") format = SeriesFormat::plain;
    else throw ParameterError("unknown input format '" + in.format + "'");
    LoadOptions opts;
    if (!in.column.empty()) opts.column = in.column;
    opts.warn = [quiet](const std::string& msg) {
        if (!quiet) std::cerr << "warning: " << msg << '\n';
    };
    return load_series(in.path, format, opts);
}

std::vector<std::size_t> flatten(const Grouping& g) {
    std::vector<std::size_t> out;
    for (const auto& grp : g.groups) out.insert(out.end(), grp.begin(), grp.end());
    return out;
}

std::vector<std::size_t> single_group(const std::string& text) {
    const auto g = Grouping::parse(text);
    if (g.size() != 1) throw ParameterError("expected exactly one group, got " + std::to_string(g.size()));
    return g.groups.front();
}

struct Sweep {
    std::size_t first, last, step;
};

Sweep parse_sweep(const std::string& text) {
    Sweep s{};
    std::size_t* fields[] = {&s.first, &s.last, &s.step};
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        const auto end = k < 2 ? text.find(':', pos) : text.size();
        if (end == std::string::npos) throw ParameterError("sweep must look like first:last:step");
        const char* b = text.data() + pos;
        const char* e = text.data() + end;
        const auto [p, ec] = std::from_chars(b, e, *fields[k]);
        if (ec != std::errc() || p != e) throw ParameterError("bad sweep '" + text + "'");
        pos = end + 1;
    }
    if (s.step == 0 || s.first > s.last) throw ParameterError("sweep needs first <= last and step > 0");
    return s;
}

std::string component_path(const std::string& prefix, const std::string& label) {
    std::string lower = label;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    return prefix + "_" + lower + ".csv";
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

void run_decompose(const Context& ctx, const DecomposeArgs& a, std::ostream& out) {
    auto series = load_input(a.input, ctx.quiet);
    if (series.name().empty()) series = series.renamed(fs::path(a.input.path).stem().string());
    SessionOptions opts;
    opts.L = a.L;
    opts.kind = parse_kind(a.kind);
    opts.method = parse_method(a.method);
    opts.neig = a.neig;
    opts.config = ctx.config;
    Session s(std::move(series), opts);
    save_snapshot(s, fs::path(a.out));
    out << s.summary();
}

void run_summary(const Context&, const std::string& snapshot, std::ostream& out) {
    out << load_snapshot(fs::path(snapshot)).summary();
}

void run_reconstruct(const Context&, const ReconstructArgs& a, std::ostream& out) {
    auto s = load_snapshot(fs::path(a.snapshot));
    const auto g = Grouping::parse(a.groups);
    const auto r = reconstruct(s, g);
    write_reconstruction(a.out + ".csv", r);
    for (std::size_t j = 0; j < r.size(); ++j) write_series(component_path(a.out, r.labels[j]), r[j].renamed(r.labels[j]));
    if (r.residual) write_series(component_path(a.out, "residuals"), r.residual->renamed("Residuals"));
    if (a.update) save_snapshot(s, fs::path(a.snapshot), {.include_cache = true});
    for (std::size_t j = 0; j < r.size(); ++j) out << r.labels[j] << ": " << g.describe(j) << '\n';
}

void run_forecast(const Context&, const ForecastArgs& a, std::ostream& out) {
    if (!(a.level > 0.0 && a.level < 1.0)) throw ParameterError("--level must lie in (0, 1)");
    if (a.len == 0) throw ParameterError("--len must be positive");
    auto s = load_snapshot(fs::path(a.snapshot));
    const auto g = Grouping::parse(a.groups);
    if (a.method == "recurrent" || a.method == "vector") {
        const auto res = a.method == "recurrent" ? rforecast(s, g, a.len, a.only_new)
                                                 : vforecast(s, g, a.len, a.only_new, {.subspace = a.subspace});
        write_forecasts(a.out, res);
        out << "wrote " << res.size() << " forecast(s) of " << a.len << " steps to " << a.out << '\n';
        return;
    }
    BootstrapOptions b;
    if (a.method == "bootstrap-recurrent") b.method = ForecastMethod::recurrent;
    else if (a.method == "bootstrap-vector") b.method = ForecastMethod::vector;
    else throw ParameterError("unknown forecast method '" + a.method + "'");
    if (g.size() != 1) throw ParameterError("bootstrap forecasts take exactly one group");
    b.level = a.level;
    b.replicates = a.replicates;
    b.seed = a.seed;
    b.threads = a.threads;
    const auto f = bforecast(s, g.groups.front(), a.len, b);
    write_bootstrap(a.out, f, a.only_new);
    out << "bootstrap " << to_string(b.method) << ": " << f.replicates << " replicates";
    if (f.dropped) out << " (" << f.dropped << " dropped)";
    out << ", level " << f.level << ", written to " << a.out << '\n';
}

void run_parestimate(const Context&, const ParestArgs& a, std::ostream& out) {
    auto s = load_snapshot(fs::path(a.snapshot));
    const auto g = Grouping::parse(a.groups);
    if (!a.out.empty() && g.size() != 1) throw ParameterError("--out needs exactly one group");
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (g.size() > 1) out << "group " << g.describe(j) << ":\n";
        if (a.method == "esprit-ls" || a.method == "esprit") {
            const auto r = esprit(s, g.groups[j]);
            print_roots(out, r);
            if (!a.out.empty()) write_roots(fs::path(a.out), r);
        } else if (a.method == "pairs") {
            const auto p = pairs_estimate(s, g.groups[j]);
            out << "period: " << format_double(p.period) << "\nfrequency: " << format_double(p.frequency)
                << "\nmad: " << format_double(p.dispersion) << "\nsteps: " << p.steps << '\n';
            if (!a.out.empty()) {
                std::ostringstream csv;
                write_table(csv, {"period", "frequency", "mad", "steps"},
                            {{p.period}, {p.frequency}, {p.dispersion}, {double(p.steps)}});
                write_text_file(a.out, csv.str());
            }
        } else {
            throw ParameterError("unknown estimation method '" + a.method + "'");
        }
    }
}

void run_lrr(const Context&, const LrrArgs& a, std::ostream& out) {
    auto s = load_snapshot(fs::path(a.snapshot));
    const auto rule = lrr(s, single_group(a.groups));
    const auto r = roots(rule);
    out << "LRR of order " << rule.order() << ", nu^2 = " << format_double(rule.nu2) << '\n';
    print_roots(out, r);
    if (!a.coef_out.empty()) {
        std::vector<double> k(rule.order());
        for (std::size_t i = 0; i < k.size(); ++i) k[i] = double(i + 1);
        std::ostringstream csv;
        write_table(csv, {"lag", "coef"}, {k, rule.coef});
        write_text_file(a.coef_out, csv.str());
    }
    if (!a.roots_out.empty()) write_roots(fs::path(a.roots_out), r);
}

void run_forecast_check(const Context& ctx, const CheckArgs& a, std::ostream& out) {
    const auto series = load_input(a.input, ctx.quiet);
    const auto g = Grouping::parse(a.groups);
    if (!a.length_sweep.empty() && !a.start_sweep.empty()) throw ParameterError("choose one of --length-sweep and --start-sweep");
    if (!a.length_sweep.empty() && a.L) throw ParameterError("--length conflicts with --length-sweep");

    ForecastCheckOptions opts;
    opts.forecast_len = a.forecast_len;
    opts.sliding_len = a.sliding_len;
    opts.L = a.L;
    opts.neig = a.neig;
    if (a.method == "recurrent") opts.method = ForecastMethod::recurrent;
    else if (a.method == "vector") opts.method = ForecastMethod::vector;
    else throw ParameterError("unknown forecast method '" + a.method + "'");
    opts.kind = parse_kind(a.kind);
    opts.svd_method = parse_method(a.svd_method);
    opts.threads = a.threads;
    opts.config = ctx.config;
    if (a.sliding_len > series.size())
        throw ParameterError("--sliding-len " + std::to_string(a.sliding_len) + " exceeds series length " + std::to_string(series.size()));

    std::vector<std::string> header;
    std::vector<std::vector<double>> cols(g.size() + 1);
    std::size_t missing = 0;
    auto record = [&](double key, const ForecastCheckResult& r) {
        cols[0].push_back(key);
        for (std::size_t j = 0; j < g.size(); ++j) {
            cols[j + 1].push_back(r.mse[j]);
            missing += r.missing[j];
        }
    };
    const auto& x = series.values();
    if (!a.start_sweep.empty()) {
        header.push_back("start");
        const auto sw = parse_sweep(a.start_sweep);
        for (std::size_t st = sw.first; st <= sw.last; st += sw.step) {
            if (st == 0 || st > x.size()) throw ParameterError("start point " + std::to_string(st) + " outside the series");
            record(double(st), forecast_check(x.subspan(st - 1), g.groups, opts));
        }
    } else {
        header.push_back("L");
        std::vector<std::size_t> Ls;
        if (!a.length_sweep.empty()) {
            const auto sw = parse_sweep(a.length_sweep);
            for (std::size_t L = sw.first; L <= sw.last; L += sw.step) Ls.push_back(L);
        } else {
            Ls.push_back(a.L.value_or(a.sliding_len / 2));
        }
        for (auto L : Ls) {
            opts.L = L;
            record(double(L), forecast_check(x, g.groups, opts));
        }
    }
    for (std::size_t j = 0; j < g.size(); ++j) header.push_back(g.label(j));
    std::ostringstream csv;
    write_table(csv, header, cols);
    write_text_file(a.out, csv.str());
    out << "evaluated " << cols[0].size() << " setting(s) x " << g.size() << " group(s)";
    if (missing) out << "; " << missing << " window forecast(s) failed and were skipped";
    out << '\n';
}

void run_transform(const Context& ctx, const TransformArgs& a, std::ostream& out) {
    const auto x = load_input(a.input, ctx.quiet);
    std::vector<double> v = x.data();
    TimeSeries result = x;
    if (a.op == "square") {
        for (auto& e : v) e *= e;
        result = x.with_values(std::move(v));
    } else if (a.op == "sqrt") {
        std::size_t clipped = 0;
        for (auto& e : v) {
            if (e < 0.0) ++clipped, e = 0.0;
            e = std::sqrt(e);
        }
        if (clipped && !ctx.quiet) std::cerr << "warning: " << clipped << " negative value(s) clipped to 0 before sqrt\n";
        result = x.with_values(std::move(v));
    } else if (a.op == "negate") {
        for (auto& e : v) e = -e;
        result = x.with_values(std::move(v));
    } else if (a.op == "subtract" || a.op == "add") {
        if (a.other.empty()) throw ParameterError("--other is required for " + a.op);
        const auto y = load_input({a.other, a.other_column, "auto"}, ctx.quiet);
        if (y.size() != x.size()) throw ValidationError("series lengths differ: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
        const double sign = a.op == "add" ? 1.0 : -1.0;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += sign * y[i];
        result = x.with_values(std::move(v));
    } else if (a.op == "slice") {
        if (a.first == 0 || a.first > x.size()) throw ParameterError("--first must lie in [1, N]");
        const std::size_t count = a.count.value_or(x.size() - a.first + 1);
        result = x.slice(a.first - 1, count);
    } else {
        throw ParameterError("unknown transform '" + a.op + "'");
    }
    if (!a.name.empty()) result = result.renamed(a.name);
    write_series(fs::path(a.out), result);
    out << a.op << ": wrote " << result.size() << " values to " << a.out << '\n';
}

}  // namespace ssacli
