#pragma once

#include <string>
#include <vector>

#include "rabispec/dynamics.hpp"

namespace rabispec {

// Delimited-text trace format: one header row, columns
// t, Pi_1..Pi_N, Re_a1, Im_a1, ..., Re_aN, Im_aN, reals at 17 significant
// digits so files reload without loss.
void write_trace_csv(const PopulationTrace& trace, const std::string& path);
PopulationTrace load_trace_csv(const std::string& path);

// Trace as a structured document (same content, columnar layout).
void write_trace_json(const PopulationTrace& trace, const std::string& path);

// Sampled curves (profiles, spectra): a shared abscissa plus named columns.
struct CurveSet {
    std::string x_name;
    std::vector<double> x;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
};

void write_curves_csv(const CurveSet& curves, const std::string& path);
CurveSet load_curves_csv(const std::string& path);

} // namespace rabispec
