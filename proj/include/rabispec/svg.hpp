#pragma once

#include <string>
#include <vector>

namespace rabispec {

// Minimal vector-graphic line plots; just enough to render traces,
// profiles and spectra without a plotting dependency.
struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotLayout {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> v_gridlines; // e.g. transfer-period multiples
    std::vector<double> h_gridlines; // e.g. predicted amplitudes
};

void write_svg_lineplot(const std::string& path, const PlotLayout& layout,
                        const std::vector<PlotSeries>& series);

} // namespace rabispec
