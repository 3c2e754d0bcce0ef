#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "ssakit/errors.hpp"
#include "ssakit/forecasting.hpp"
#include "ssakit/parest.hpp"
#include "ssakit/reconstruction.hpp"
#include "ssakit/snapshot.hpp"
#include "svg.hpp"

namespace ssacli {

using namespace ssa;
namespace fs = std::filesystem;

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>* column(const std::string& name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? nullptr : &columns[std::size_t(it - header.begin())];
    }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) {
        while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
        out.push_back(cur);
    }
    return out;
}

Table read_table(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw FormatError(1, "empty table '" + path.string() + "'");
    t.header = split(line);
    t.columns.resize(t.header.size());
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != t.header.size()) throw FormatError(row, "expected " + std::to_string(t.header.size()) + " fields");
        for (std::size_t j = 0; j < cells.size(); ++j) {
            double v = 0.0;
            const auto& c = cells[j];
            const auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc() || p != c.data() + c.size()) throw FormatError(row, "non-numeric field '" + c + "'");
            t.columns[j].push_back(v);
        }
    }
    return t;
}

std::vector<double> axis(const TimeSeries& s) {
    std::vector<double> x(s.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = s.index() ? s.index()->at(i) : double(i + 1);
    return x;
}

std::vector<double> iota(std::size_t n, double first = 1.0) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = first + double(i);
    return x;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::string percent(double v) {
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(2);
    o << 100.0 * v << '%';
    return o.str();
}

std::vector<std::size_t> indices(const std::string& text, std::size_t fallback_last) {
    if (text.empty()) {
        std::vector<std::size_t> out(fallback_last);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = i + 1;
        return out;
    }
    std::vector<std::size_t> out;
    for (const auto& g : Grouping::parse(text).groups) out.insert(out.end(), g.begin(), g.end());
    return out;
}

// Long-format companion: one row per rendered point.
void write_companion(const fs::path& path, const std::vector<Panel>& panels) {
    std::ostringstream csv;
    csv << "panel,series,x,y\n";
    for (const auto& p : panels) {
        for (const auto& l : p.lines) {
            for (std::size_t i = 0; i < l.x.size(); ++i)
                csv << p.title << ',' << l.label << ',' << format_double(l.x[i]) << ',' << format_double(l.y[i]) << '\n';
        }
        for (const auto& b : p.bands) {
            for (std::size_t i = 0; i < b.x.size(); ++i)
                csv << p.title << ",lower," << format_double(b.x[i]) << ',' << format_double(b.lower[i]) << '\n';
            for (std::size_t i = 0; i < b.x.size(); ++i)
                csv << p.title << ",upper," << format_double(b.x[i]) << ',' << format_double(b.upper[i]) << '\n';
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << csv.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Session need_snapshot(const PlotArgs& a) {
    if (a.snapshot.empty()) throw ParameterError("plot type '" + a.type + "' needs --snapshot");
    return load_snapshot(fs::path(a.snapshot));
}

}  // namespace

void run_plot(const Context& ctx, const PlotArgs& a, std::ostream& out) {
    if (a.out.empty()) throw ParameterError("--out is required");
    const fs::path svg_path(a.out);
    fs::path csv_path = svg_path;
    csv_path.replace_extension(".csv");
    if (csv_path == svg_path) throw ParameterError("--out must not end in .csv");
    for (const auto& input : {a.forecast, a.series}) {
        if (!input.empty() && fs::exists(input) && fs::exists(csv_path) && fs::equivalent(input, csv_path))
            throw ParameterError("companion csv '" + csv_path.string() + "' would overwrite an input; pick another --out");
    }

    std::vector<Panel> panels;
    std::string title;
    std::size_t columns = 1;

    if (a.type == "values") {
        auto s = need_snapshot(a);
        const auto idx = indices(a.idx, std::min<std::size_t>(s.size(), 50));
        Line l{.label = "", .color = palette(0), .markers = true};
        for (auto i : idx) {
            if (i > s.size()) throw ParameterError("index " + std::to_string(i) + " beyond the " + std::to_string(s.size()) + " computed eigentriples");
            l.x.push_back(double(i));
            l.y.push_back(s.sigma(i - 1));
        }
        l.label = "norm";
        panels.push_back({.title = "Component norms", .lines = {l}, .log_y = true});
        title = "Singular values";
    } else if (a.type == "vectors" || a.type == "paired") {
        auto s = need_snapshot(a);
        const auto idx = indices(a.idx, std::min<std::size_t>(s.size(), a.type == "vectors" ? 10 : 11));
        for (auto i : idx) {
            if (i == 0 || i > s.size()) throw ParameterError("index " + std::to_string(i) + " beyond the computed eigentriples");
        }
        const double total = s.op().frobenius_norm_squared();
        auto label = [&](std::size_t i) { return std::to_string(i) + " (" + percent(s.lambda(i - 1) / total) + ")"; };
        if (a.type == "vectors") {
            const auto x = iota(s.spec().L);
            for (auto i : idx) {
                Line l{.x = x, .y = to_vector(s.eigenvector(i - 1)), .label = "U" + std::to_string(i), .color = palette(0)};
                panels.push_back({.title = label(i), .lines = {l}});
            }
            title = "Eigenvectors";
        } else {
            if (idx.size() < 2) throw ParameterError("paired plots need at least two indices");
            for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
                Line l{.x = to_vector(s.eigenvector(idx[k] - 1)), .y = to_vector(s.eigenvector(idx[k + 1] - 1)),
                       .label = "U" + std::to_string(idx[k]) + " vs U" + std::to_string(idx[k + 1]), .color = palette(0)};
                panels.push_back({.title = label(idx[k]) + " vs " + label(idx[k + 1]), .lines = {l}, .square = true});
            }
            title = "Pairs of eigenvectors";
        }
        columns = 4;
    } else if (a.type == "wcor") {
        auto s = need_snapshot(a);
        const auto g = a.groups.empty() ? Grouping::elementary(1, std::min<std::size_t>(s.size(), 30)) : Grouping::parse(a.groups);
        const auto w = wcor(s, g);
        std::vector<std::vector<double>> m(w.size(), std::vector<double>(w.size()));
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j) m[i][j] = w(i, j);
        write_file(svg_path, render_heatmap("W-correlation matrix", w.labels, m));
        write_wcor(csv_path, w);
        out << "wrote " << svg_path.string() << " and " << csv_path.string() << '\n';
        return;
    } else if (a.type == "series" || a.type == "reconstruction") {
        auto s = need_snapshot(a);
        Grouping g;
        if (a.type == "series") {
            g = a.groups.empty() ? Grouping::elementary(1, std::min<std::size_t>(s.size(), 8)) : Grouping::parse(a.groups);
        } else {
            if (a.groups.empty()) throw ParameterError("reconstruction plots need --groups");
            g = Grouping::parse(a.groups);
        }
        const auto r = reconstruct(s, g);
        const auto x = axis(s.series());
        if (a.type == "reconstruction" && a.original)
            panels.push_back({.title = "Original", .lines = {{.x = x, .y = s.series().data(), .label = "Original"}}});
        for (std::size_t j = 0; j < r.size(); ++j) {
            const std::string name = a.type == "series" ? g.describe(j) : r.labels[j];
            panels.push_back({.title = name, .lines = {{.x = x, .y = r[j].data(), .label = r.labels[j], .color = palette(j % 7 + 1)}}});
        }
        if (a.type == "reconstruction" && a.residuals) {
            if (!r.residual) throw ParameterError("residuals need disjoint groups; pass --no-residuals");
            panels.push_back({.title = "Residuals", .lines = {{.x = x, .y = r.residual->data(), .label = "Residuals"}}});
        }
        title = a.type == "series" ? "Reconstructed series" : "Reconstruction";
        columns = a.type == "series" ? 2 : 1;
    } else if (a.type == "roots") {
        auto s = need_snapshot(a);
        if (a.groups.empty()) throw ParameterError("roots plots need --groups");
        const auto g = Grouping::parse(a.groups);
        if (g.size() != 1) throw ParameterError("roots plots take exactly one group");
        const auto r = roots(lrr(s, g.groups.front()));
        Line l{.label = "roots", .color = palette(1), .markers = true};
        for (const auto& root : r.roots) {
            l.x.push_back(root.value.real());
            l.y.push_back(root.value.imag());
        }
        panels.push_back({.title = "Roots of the LRR", .lines = {l}, .unit_circle = true});
        title = "Roots";
    } else if (a.type == "forecast") {
        if (a.forecast.empty()) throw ParameterError("forecast plots need --forecast");
        const auto t = read_table(a.forecast);
        if (t.header.size() < 2) throw FormatError(1, "forecast table needs at least two columns");
        std::size_t first_value = 1;
        const std::vector<double>* xs = &t.columns[0];
        if (t.header.size() > 2 && t.header[1] != "point" && t.header[1].rfind('F', 0) != 0) {
            xs = &t.columns[1];
            first_value = 2;
        }
        Panel p{.title = "Forecast"};
        if (!a.series.empty()) {
            const auto base = load_series(a.series, guess_format(a.series),
                                          a.series_column.empty() ? LoadOptions{} : LoadOptions{.column = a.series_column});
            std::vector<double> bx = first_value == 2 ? axis(base) : iota(base.size());
            p.lines.push_back({.x = bx, .y = base.data(), .label = "series", .color = palette(0)});
        }
        const auto* lo = t.column("lower");
        const auto* hi = t.column("upper");
        if (lo && hi) p.bands.push_back({.x = *xs, .lower = *lo, .upper = *hi});
        for (std::size_t j = first_value; j < t.header.size(); ++j) {
            if (t.header[j] == "lower" || t.header[j] == "upper") continue;
            p.lines.push_back({.x = *xs, .y = t.columns[j], .label = t.header[j], .color = palette(p.lines.size() + 1)});
        }
        panels.push_back(std::move(p));
        title = "Forecast";
    } else {
        throw ParameterError("unknown plot type '" + a.type + "'");
    }

    Figure fig(title, columns);
    for (const auto& p : panels) fig.add(p);
    write_file(svg_path, fig.render());
    write_companion(csv_path, panels);
    (void)ctx;
    out << "wrote " << svg_path.string() << " and " << csv_path.string() << '\n';
}

}  // namespace ssacli
