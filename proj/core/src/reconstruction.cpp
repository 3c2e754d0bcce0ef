#include "ssakit/reconstruction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ssakit/errors.hpp"
#include "ssakit/session.hpp"

namespace ssa {

namespace {

std::size_t parse_index(std::string_view token) {
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParameterError("bad eigentriple index '" + std::string(token) + "'");
    }
    if (value == 0) throw ParameterError("eigentriple indices are 1-based");
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace

Grouping Grouping::parse(std::string_view text) {
    Grouping g;
    if (text.find_first_not_of(" ") == std::string_view::npos) throw ParameterError("empty grouping");
    for (auto group_text : split(text, '|')) {
        std::vector<std::size_t> group;
        for (auto item : split(group_text, ',')) {
            const auto dash = item.find('-');
            if (dash == std::string_view::npos) {
                group.push_back(parse_index(item));
                continue;
            }
            const auto lo = parse_index(item.substr(0, dash));
            const auto hi = parse_index(item.substr(dash + 1));
            if (hi < lo) throw ParameterError("descending range '" + std::string(item) + "'");
            for (auto i = lo; i <= hi; ++i) group.push_back(i);
        }
        g.groups.push_back(std::move(group));
    }
    return g;
}

Grouping Grouping::elementary(std::size_t first, std::size_t last) {
    if (first == 0 || last < first) throw ParameterError("bad elementary range");
    Grouping g;
    for (auto i = first; i <= last; ++i) g.groups.push_back({i});
    return g;
}

Grouping Grouping::single(std::vector<std::size_t> indices) {
    Grouping g;
    g.groups.push_back(std::move(indices));
    return g;
}

std::size_t Grouping::max_index() const noexcept {
    std::size_t m = 0;
    for (const auto& grp : groups) {
        for (auto i : grp) m = std::max(m, i);
    }
    return m;
}

bool Grouping::disjoint() const {
    std::set<std::size_t> seen;
    for (const auto& grp : groups) {
        for (auto i : grp) {
            if (!seen.insert(i).second) return false;
        }
    }
    return true;
}

std::string Grouping::label(std::size_t j) const {
    if (j < labels.size() && !labels[j].empty()) return labels[j];
    return "F" + std::to_string(j + 1);
}

std::string Grouping::describe(std::size_t j) const {
    std::ostringstream out;
    const auto& grp = groups.at(j);
    for (std::size_t a = 0; a < grp.size();) {
        std::size_t b = a;
        while (b + 1 < grp.size() && grp[b + 1] == grp[b] + 1) ++b;
        if (a) out << ',';
        out << grp[a];
        if (b > a) out << '-' << grp[b];
        a = b + 1;
    }
    return out.str();
}

void ensure_computed(Session& session, const Grouping& grouping) {
    for (const auto& grp : grouping.groups) {
        if (grp.empty()) throw ParameterError("empty group in grouping");
        for (auto i : grp) {
            if (i == 0) throw ParameterError("eigentriple indices are 1-based");
        }
    }
    const auto need = grouping.max_index();
    if (need > session.max_size()) {
        throw ParameterError("eigentriple " + std::to_string(need) + " requested but only " +
                             std::to_string(session.max_size()) + " exist");
    }
    session.extend(need);
}

TimeSeries elementary(Session& session, std::size_t i) {
    if (i == 0) throw ParameterError("eigentriple indices are 1-based");
    if (i > session.max_size()) {
        throw ParameterError("eigentriple " + std::to_string(i) + " requested but only " +
                             std::to_string(session.max_size()) + " exist");
    }
    session.extend(i);
    return session.series().with_values(*session.elementary(i - 1));
}

ReconstructionResult reconstruct(Session& session, const Grouping& grouping) {
    ensure_computed(session, grouping);
    const auto& x = session.series();
    const std::size_t N = x.size();

    ReconstructionResult out;
    out.original = x;
    std::vector<double> total(N, 0.0);
    for (std::size_t j = 0; j < grouping.size(); ++j) {
        std::vector<double> comp(N, 0.0);
        for (auto i : grouping.groups[j]) {
            const auto el = session.elementary(i - 1);
            for (std::size_t s = 0; s < N; ++s) comp[s] += (*el)[s];
        }
        for (std::size_t s = 0; s < N; ++s) total[s] += comp[s];
        out.labels.push_back(grouping.label(j));
        out.components.push_back(TimeSeries(std::move(comp), x.index(), out.labels.back()));
    }
    if (grouping.disjoint()) {
        std::vector<double> res(N);
        for (std::size_t s = 0; s < N; ++s) res[s] = x[s] - total[s];
        out.residual = TimeSeries(std::move(res), x.index(), "Residuals");
    }
    return out;
}

const TimeSeries& residuals(const ReconstructionResult& result) {
    if (!result.residual) {
        throw StateError("residuals are undefined for overlapping groups");
    }
    return *result.residual;
}

WCorMatrix wcor(std::span<const std::vector<double>> components, std::span<const double> weights,
                std::vector<std::string> labels) {
    const std::size_t m = components.size();
    const std::size_t N = weights.size();
    for (const auto& c : components) {
        if (c.size() != N) throw ParameterError("wcor: component length does not match weights");
    }
    WCorMatrix w;
    w.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    w.valid.assign(m, 1);
    if (labels.size() != m) {
        labels.clear();
        for (std::size_t j = 0; j < m; ++j) labels.push_back("F" + std::to_string(j + 1));
    }
    w.labels = std::move(labels);

    auto inner = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) s += weights[i] * a[i] * b[i];
        return s;
    };
    std::vector<double> norms(m);
    for (std::size_t j = 0; j < m; ++j) {
        norms[j] = std::sqrt(inner(components[j], components[j]));
        if (!(norms[j] > 0.0)) w.valid[j] = 0;
    }
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            double v = 0.0;
            if (w.valid[a] && w.valid[b]) {
                v = a == b ? 1.0 : inner(components[a], components[b]) / (norms[a] * norms[b]);
                v = std::clamp(v, -1.0, 1.0);
            }
            w.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
            w.values(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
        }
    }
    return w;
}

WCorMatrix wcor(Session& session, const Grouping& grouping) {
    if (!grouping.disjoint()) throw ParameterError("wcor requires disjoint groups");
    const auto rec = reconstruct(session, grouping);
    std::vector<std::vector<double>> comps;
    comps.reserve(rec.size());
    for (const auto& c : rec.components) comps.push_back(c.data());
    return wcor(comps, session.op().weights(), rec.labels);
}

void write_reconstruction(const std::filesystem::path& path, const ReconstructionResult& result) {
    std::vector<LabeledSeries> cols;
    for (std::size_t j = 0; j < result.size(); ++j) cols.push_back({result.labels[j], result.components[j]});
    if (result.residual) cols.push_back({"Residuals", *result.residual});
    write_series(path, cols);
}

void write_wcor(std::ostream& out, const WCorMatrix& w) {
    out << "component";
    for (const auto& l : w.labels) out << ',' << l;
    out << '\n';
    for (std::size_t i = 0; i < w.size(); ++i) {
        out << w.labels[i];
        for (std::size_t j = 0; j < w.size(); ++j) out << ',' << format_double(w(i, j));
        out << '\n';
    }
}

void write_wcor(const std::filesystem::path& path, const WCorMatrix& w) {
    std::ostringstream buf;
    write_wcor(buf, w);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << buf.str();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace ssa
