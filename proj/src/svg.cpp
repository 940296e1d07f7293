#include "quadtrap/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace quadtrap {

std::string seed_color(int index, int count) {
    const double hue = count > 0 ? 360.0 * index / count : 0.0;
    char buf[48];
    std::snprintf(buf, sizeof buf, "hsl(%.1f,70%%,45%%)", hue);
    return buf;
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

void write_panel(std::ostream& out, const SvgPlot& plot, double x0) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : plot.series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, x), xmax = std::max(xmax, x);
            ymin = std::min(ymin, y), ymax = std::max(ymax, y);
        }
    if (!(xmin <= xmax)) xmin = -1, xmax = 1, ymin = -1, ymax = 1;
    if (xmax - xmin == 0) xmin -= 0.5, xmax += 0.5;
    if (ymax - ymin == 0) ymin -= 0.5, ymax += 0.5;
    const double padx = 0.04 * (xmax - xmin), pady = 0.04 * (ymax - ymin);
    xmin -= padx, xmax += padx, ymin -= pady, ymax += pady;

    const double left = 70, right = 20, top = 40, bottom = 50;
    const double pw = plot.width - left - right, ph = plot.height - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    char buf[256];
    out << "<svg x=\"" << x0 << "\" y=\"0\" width=\"" << plot.width << "\" height=\"" << plot.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n",
                  left, top, pw, ph);
    out << buf;
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4, yv = ymin + (ymax - ymin) * i / 4;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.4g</text>\n", sx(xv),
                      top + ph + 18, xv);
        out << buf;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.4g</text>\n", left - 6,
                      sy(yv) + 4, yv);
        out << buf;
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << plot.height - 10 << "\" text-anchor=\"middle\">"
        << escape(plot.x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << top + ph / 2
        << ")\">" << escape(plot.y_label) << "</text>\n";
    out << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(plot.title)
        << "</text>\n";

    for (const auto& s : plot.series) {
        if (s.line) {
            out << "<polyline fill=\"none\" stroke-width=\"0.8\" stroke=\"" << escape(s.color) << "\" points=\"";
            for (const auto& [x, y] : s.points) {
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(x), sy(y));
                out << buf;
            }
            out << "\"/>\n";
        } else {
            out << "<g fill=\"" << escape(s.color) << "\">\n";
            for (const auto& [x, y] : s.points) {
                std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\"/>\n", sx(x), sy(y),
                              plot.point_radius);
                out << buf;
            }
            out << "</g>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace

void write_svg_row(std::ostream& out, const std::vector<SvgPlot>& plots) {
    int width = 0, height = 0;
    for (const auto& p : plots) width += p.width, height = std::max(height, p.height);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    double x0 = 0;
    for (const auto& p : plots) {
        write_panel(out, p, x0);
        x0 += p.width;
    }
    out << "</svg>\n";
}

void write_svg(std::ostream& out, const SvgPlot& plot) { write_svg_row(out, {plot}); }

}  // namespace quadtrap
