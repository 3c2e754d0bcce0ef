#pragma once

#include <string>
#include <vector>

namespace ssacli {

struct Line {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
    std::string color = "#000000";
    bool markers = false;  ///< dots instead of a polyline
    bool dashed = false;
};

/// Shaded region between two curves sharing an x grid.
struct Band {
    std::vector<double> x;
    std::vector<double> lower;
    std::vector<double> upper;
    std::string color = "#9ecae1";
};

struct Panel {
    std::string title;
    std::vector<Line> lines;
    std::vector<Band> bands;
    bool log_y = false;
    bool square = false;       ///< equal scaling on both axes
    bool unit_circle = false;  ///< draw the unit circle, implies square
};

/// Grid of panels rendered into one standalone SVG document.
class Figure {
public:
    Figure(std::string title, std::size_t columns);
    void add(Panel panel) { panels_.push_back(std::move(panel)); }
    std::string render() const;

private:
    std::string title_;
    std::size_t columns_;
    std::vector<Panel> panels_;
};

/// Grayscale |value| heatmap of a square labeled matrix, white at 0 and black at 1.
std::string render_heatmap(const std::string& title, const std::vector<std::string>& labels,
                           const std::vector<std::vector<double>>& matrix);

/// Palette colour for series k.
const std::string& palette(std::size_t k);

}  // namespace ssacli
