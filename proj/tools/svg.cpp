#include "svg.hpp"

#include "winding/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace winding::cli {
namespace {

constexpr double canvas = 800.0;
constexpr double margin = 20.0;

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

void header(std::ostream& out, const std::string& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << canvas << "\" height=\"" << canvas
        << "\" viewBox=\"0 0 " << canvas << ' ' << canvas << "\">\n"
        << "<title>" << escape(title) << "</title>\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << canvas << "\" height=\"" << canvas << "\" fill=\"white\"/>\n";
}

// Blue to yellow through green, t in [0, 1].
std::string colour(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255.0 * std::clamp(2.0 * t - 1.0, 0.0, 1.0)));
    const int g = static_cast<int>(std::lround(255.0 * std::sin(M_PI * 0.5 * std::min(1.0, 1.5 * t))));
    const int b = static_cast<int>(std::lround(255.0 * std::clamp(1.0 - 1.5 * t, 0.0, 1.0)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace

void write_curve_svg(std::ostream& out, const std::vector<Eigen::Vector2d>& points, const std::string& title) {
    header(out, title);
    if (!points.empty()) {
        Eigen::Vector2d lo = points.front(), hi = points.front();
        for (const auto& p : points) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        const double extent = std::max((hi - lo).maxCoeff(), 1e-300);
        const double scale = (canvas - 2.0 * margin) / extent;
        const Eigen::Vector2d mid = 0.5 * (lo + hi);
        out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.5\" points=\"";
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double x = 0.5 * canvas + scale * (points[i].x() - mid.x());
            const double y = 0.5 * canvas - scale * (points[i].y() - mid.y());
            out << (i ? " " : "") << format_double(x) << ',' << format_double(y);
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

void write_heatmap_svg(std::ostream& out, const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::vector<double>& values, const std::string& title) {
    header(out, title);
    const std::size_t nx = xs.size(), ny = ys.size();
    if (nx > 0 && ny > 0 && values.size() == nx * ny) {
        const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
        const double lo = *lo_it, span = std::max(*hi_it - *lo_it, 1e-300);
        const double cw = (canvas - 2.0 * margin) / static_cast<double>(nx);
        const double ch = (canvas - 2.0 * margin) / static_cast<double>(ny);
        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t j = 0; j < ny; ++j) {
                // Row j = 0 sits at the bottom.
                const double x = margin + cw * static_cast<double>(i);
                const double y = canvas - margin - ch * static_cast<double>(j + 1);
                out << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y) << "\" width=\""
                    << format_double(cw) << "\" height=\"" << format_double(ch) << "\" fill=\""
                    << colour((values[i * ny + j] - lo) / span) << "\"/>\n";
            }
        }
    }
    out << "</svg>\n";
}

} // namespace winding::cli
