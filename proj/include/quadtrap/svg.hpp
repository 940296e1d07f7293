#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace quadtrap {

struct SvgSeries {
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f77b4";
    bool line = false;
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
    int width = 800;
    int height = 600;
    double point_radius = 0.8;
};

// Evenly spaced hue per seed.
std::string seed_color(int index, int count);

void write_svg(std::ostream& out, const SvgPlot& plot);
// Panels side by side in one document.
void write_svg_row(std::ostream& out, const std::vector<SvgPlot>& plots);

}  // namespace quadtrap
