#include "rabispec/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "rabispec/errors.hpp"

namespace rabispec {

namespace {

constexpr double kWidth = 860, kHeight = 540;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

const char* kPalette[] = {"#1f6fb4", "#d1495b", "#3a9d5d", "#8c5aa8",
                          "#c98a2b", "#4cb5ae", "#76572f", "#5a5a5a"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

void write_svg_lineplot(const std::string& path, const PlotLayout& layout,
                        const std::vector<PlotSeries>& series) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!(xmin < xmax)) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (!(ymin < ymax)) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot write '" + path + "'");

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << layout.title << "</text>\n";

    for (double g : layout.v_gridlines) {
        if (g < xmin || g > xmax) continue;
        out << "<line x1=\"" << num(px(g)) << "\" y1=\"" << num(py(ymin)) << "\" x2=\""
            << num(px(g)) << "\" y2=\"" << num(py(ymax))
            << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    }
    for (double g : layout.h_gridlines) {
        if (g < ymin || g > ymax) continue;
        out << "<line x1=\"" << num(px(xmin)) << "\" y1=\"" << num(py(g)) << "\" x2=\""
            << num(px(xmax)) << "\" y2=\"" << num(py(g))
            << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    }

    // axis ticks
    for (int k = 0; k <= 5; ++k) {
        const double fx = xmin + (xmax - xmin) * k / 5.0;
        const double fy = ymin + (ymax - ymin) * k / 5.0;
        out << "<text x=\"" << num(px(fx)) << "\" y=\"" << kHeight - kBottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(fx) << "</text>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py(fy) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(fy) << "</text>\n";
    }
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << layout.x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << layout.y_label
        << "</text>\n";

    int color = 0;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\""
            << kPalette[color % (sizeof(kPalette) / sizeof(kPalette[0]))]
            << "\" stroke-width=\"1.4\" points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (k) out << ' ';
            out << num(px(s.x[k])) << ',' << num(py(s.y[k]));
        }
        out << "\"/>\n";
        out << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 18 + color * 16
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << kPalette[color % (sizeof(kPalette) / sizeof(kPalette[0]))] << "\">" << s.name
            << "</text>\n";
        ++color;
    }
    out << "</svg>\n";
}

} // namespace rabispec
