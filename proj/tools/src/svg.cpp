#include "svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace ssacli {

namespace {

constexpr double kPanelW = 360.0;
constexpr double kPanelH = 260.0;
constexpr double kMarginL = 58.0;
constexpr double kMarginR = 14.0;
constexpr double kMarginT = 26.0;
constexpr double kMarginB = 30.0;
constexpr double kTitleH = 34.0;

// Fixed two-decimal coordinates keep documents byte-stable.
std::string num(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    if (ec != std::errc()) return "0";
    std::string s(buf, p);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string tick_label(double v) {
    if (std::abs(v) < 1e-300) return "0";
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
    return ec == std::errc() ? std::string(buf, p) : "?";
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle() {
        if (!(lo <= hi)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-300) {
            const double pad = std::max(std::abs(lo) * 0.05, 1e-9);
            lo -= pad;
            hi += pad;
        }
    }
};

std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (span / step <= 6.0) break;
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return out;
}

class PanelWriter {
public:
    PanelWriter(std::ostringstream& out, double ox, double oy) : out_(out), ox_(ox), oy_(oy) {}

    void write(const Panel& p) {
        Range xr, yr;
        auto ty = [&](double v) { return p.log_y ? (v > 0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN()) : v; };
        for (const auto& l : p.lines) {
            for (double v : l.x) xr.add(v);
            for (double v : l.y) yr.add(ty(v));
        }
        for (const auto& b : p.bands) {
            for (double v : b.x) xr.add(v);
            for (double v : b.lower) yr.add(ty(v));
            for (double v : b.upper) yr.add(ty(v));
        }
        const bool square = p.square || p.unit_circle;
        if (p.unit_circle) {
            xr.add(-1.05), xr.add(1.05), yr.add(-1.05), yr.add(1.05);
        }
        xr.settle();
        yr.settle();
        if (square) {
            const double half = std::max(xr.hi - xr.lo, yr.hi - yr.lo) / 2.0;
            const double cx = (xr.lo + xr.hi) / 2.0, cy = (yr.lo + yr.hi) / 2.0;
            xr = {cx - half, cx + half};
            yr = {cy - half, cy + half};
        }
        w_ = kPanelW - kMarginL - kMarginR;
        h_ = kPanelH - kMarginT - kMarginB;
        if (square) w_ = h_ = std::min(w_, h_);
        x0_ = ox_ + kMarginL;
        y0_ = oy_ + kMarginT;
        xr_ = xr;
        yr_ = yr;

        out_ << "<g>\n";
        out_ << "<text x=\"" << num(ox_ + kPanelW / 2) << "\" y=\"" << num(oy_ + 16) << "\" text-anchor=\"middle\" font-size=\"12\">"
             << escape(p.title) << "</text>\n";
        out_ << "<rect x=\"" << num(x0_) << "\" y=\"" << num(y0_) << "\" width=\"" << num(w_) << "\" height=\"" << num(h_)
             << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"0.8\"/>\n";
        for (double t : ticks(xr.lo, xr.hi)) {
            const double px = X(t);
            out_ << "<line x1=\"" << num(px) << "\" y1=\"" << num(y0_ + h_) << "\" x2=\"" << num(px) << "\" y2=\"" << num(y0_ + h_ + 4)
                 << "\" stroke=\"#444\"/>\n";
            out_ << "<text x=\"" << num(px) << "\" y=\"" << num(y0_ + h_ + 15) << "\" text-anchor=\"middle\" font-size=\"9\">"
                 << tick_label(t) << "</text>\n";
        }
        for (double t : ticks(yr.lo, yr.hi)) {
            const double py = Y(t);
            out_ << "<line x1=\"" << num(x0_ - 4) << "\" y1=\"" << num(py) << "\" x2=\"" << num(x0_) << "\" y2=\"" << num(py)
                 << "\" stroke=\"#444\"/>\n";
            out_ << "<text x=\"" << num(x0_ - 6) << "\" y=\"" << num(py + 3) << "\" text-anchor=\"end\" font-size=\"9\">"
                 << (p.log_y ? "1e" + tick_label(t) : tick_label(t)) << "</text>\n";
        }
        if (p.unit_circle) {
            out_ << "<ellipse cx=\"" << num(X(0)) << "\" cy=\"" << num(Y(0)) << "\" rx=\"" << num(X(1) - X(0)) << "\" ry=\""
                 << num(Y(0) - Y(1)) << "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
        }
        for (const auto& b : p.bands) {
            out_ << "<polygon fill=\"" << b.color << "\" fill-opacity=\"0.6\" stroke=\"none\" points=\"";
            for (std::size_t i = 0; i < b.x.size(); ++i) out_ << num(X(b.x[i])) << ',' << num(Y(ty(b.upper[i]))) << ' ';
            for (std::size_t i = b.x.size(); i-- > 0;) out_ << num(X(b.x[i])) << ',' << num(Y(ty(b.lower[i]))) << ' ';
            out_ << "\"/>\n";
        }
        for (const auto& l : p.lines) {
            if (l.markers) {
                for (std::size_t i = 0; i < l.x.size(); ++i) {
                    const double yv = ty(l.y[i]);
                    if (!std::isfinite(yv) || !std::isfinite(l.x[i])) continue;
                    out_ << "<circle cx=\"" << num(X(l.x[i])) << "\" cy=\"" << num(Y(yv)) << "\" r=\"2\" fill=\"" << l.color << "\"/>\n";
                }
                continue;
            }
            out_ << "<polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"1\"";
            if (l.dashed) out_ << " stroke-dasharray=\"5 3\"";
            out_ << " points=\"";
            for (std::size_t i = 0; i < l.x.size(); ++i) {
                const double yv = ty(l.y[i]);
                if (!std::isfinite(yv) || !std::isfinite(l.x[i])) continue;
                out_ << num(X(l.x[i])) << ',' << num(Y(yv)) << ' ';
            }
            out_ << "\"/>\n";
        }
        double ly = y0_ + 10;
        for (const auto& l : p.lines) {
            if (l.label.empty()) continue;
            out_ << "<text x=\"" << num(x0_ + w_ - 4) << "\" y=\"" << num(ly) << "\" text-anchor=\"end\" font-size=\"9\" fill=\""
                 << l.color << "\">" << escape(l.label) << "</text>\n";
            ly += 11;
        }
        out_ << "</g>\n";
    }

private:
    double X(double v) const { return x0_ + (v - xr_.lo) / (xr_.hi - xr_.lo) * w_; }
    double Y(double v) const { return y0_ + h_ - (v - yr_.lo) / (yr_.hi - yr_.lo) * h_; }

    std::ostringstream& out_;
    double ox_, oy_;
    double x0_ = 0, y0_ = 0, w_ = 0, h_ = 0;
    Range xr_, yr_;
};

void header(std::ostringstream& out, double w, double h, const std::string& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h) << "\" viewBox=\"0 0 " << num(w)
        << ' ' << num(h) << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    out << "<text x=\"" << num(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title) << "</text>\n";
}

}  // namespace

const std::string& palette(std::size_t k) {
    static const std::array<std::string, 8> colors{"#000000", "#d62728", "#1f77b4", "#2ca02c",
                                                   "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    return colors[k % colors.size()];
}

Figure::Figure(std::string title, std::size_t columns) : title_(std::move(title)), columns_(std::max<std::size_t>(columns, 1)) {}

std::string Figure::render() const {
    const std::size_t cols = std::min(columns_, std::max<std::size_t>(panels_.size(), 1));
    const std::size_t rows = (panels_.size() + cols - 1) / cols;
    std::ostringstream out;
    header(out, double(cols) * kPanelW, kTitleH + double(std::max<std::size_t>(rows, 1)) * kPanelH, title_);
    for (std::size_t k = 0; k < panels_.size(); ++k) {
        PanelWriter(out, double(k % cols) * kPanelW, kTitleH + double(k / cols) * kPanelH).write(panels_[k]);
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_heatmap(const std::string& title, const std::vector<std::string>& labels,
                           const std::vector<std::vector<double>>& matrix) {
    const std::size_t n = labels.size();
    const double cell = std::clamp(560.0 / double(std::max<std::size_t>(n, 1)), 6.0, 48.0);
    const double left = 50.0, top = kTitleH + 30.0;
    const double size = cell * double(n);
    std::ostringstream out;
    header(out, left + size + 20.0, top + size + 20.0, title);
    const bool show_labels = cell >= 12.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (show_labels || i % 5 == 0) {
            out << "<text x=\"" << num(left - 4) << "\" y=\"" << num(top + (double(i) + 0.7) * cell)
                << "\" text-anchor=\"end\" font-size=\"9\">" << escape(labels[i]) << "</text>\n";
            out << "<text x=\"" << num(left + (double(i) + 0.5) * cell) << "\" y=\"" << num(top - 5)
                << "\" text-anchor=\"middle\" font-size=\"9\">" << escape(labels[i]) << "</text>\n";
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double a = std::clamp(std::abs(matrix[i][j]), 0.0, 1.0);
            const int g = int(std::lround(255.0 * (1.0 - a)));
            char hex[8];
            std::snprintf(hex, sizeof hex, "#%02x%02x%02x", g, g, g);
            out << "<rect x=\"" << num(left + double(j) * cell) << "\" y=\"" << num(top + double(i) * cell) << "\" width=\""
                << num(cell) << "\" height=\"" << num(cell) << "\" fill=\"" << hex << "\"/>\n";
        }
    }
    out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(size) << "\" height=\"" << num(size)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace ssacli
