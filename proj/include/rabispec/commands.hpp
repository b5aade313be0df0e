#pragma once

#include <string>
#include <vector>

#include "rabispec/core.hpp"

namespace rabispec {

enum class OutputFormat { csv, json, svg };

// delimited-text, structured-document, or vector-graphic output
OutputFormat parse_format(const std::string& name);

struct CommonConfig {
    std::string system_path;
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::csv;
};

struct SimulateConfig : CommonConfig {
    std::vector<double> omegas; // one drive frequency, or a sweep
    double f0 = 0.0;
    double t_end = 0.0;
    std::string initial = "1";
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double norm_tol = 1e-8;
    double sample_dt = 0.0;
};

struct ProfileConfig : CommonConfig {
    std::string target; // "i,j" (labels or 1-based positions)
    double f0 = 0.0;
    double omega_min = -1.0; // < 0: auto window around the center
    double omega_max = -1.0;
    int omega_points = 1001;
};

struct SpectrumConfig : CommonConfig {
    std::string target;
    double f0 = 0.0;
    double drive_omega = -1.0; // < 0: target resonance
    double omega_min = -1.0;
    double omega_max = -1.0;
    int omega_points = 1001;
};

struct ValidateConfig : CommonConfig {
    std::string target;
    double f0 = 0.0;
    double drive_omega = -1.0; // < 0: target resonance
    double eps_leak = 0.01;
    double theta_rwa = 0.05;
    double gamma_valid = 20.0;
    double gamma_extreme = 0.2;
};

struct PathwayConfig : CommonConfig {
    std::string source;
    std::string dest;
    double eps_leak = 0.01;
    double theta_rwa = 0.05;
};

struct FiguresConfig : CommonConfig {};

void cmd_simulate(const SimulateConfig& config);
void cmd_profile(const ProfileConfig& config);
void cmd_spectrum(const SpectrumConfig& config);
void cmd_validate(const ValidateConfig& config);
void cmd_pathway(const PathwayConfig& config);

// Regenerates the committed reference datasets (single-line Rabi profiles,
// resonant and off-resonant two-level dynamics, three-level spectra and
// dynamics at increasing intensity) deterministically under out_dir.
void cmd_figures(const FiguresConfig& config);

std::pair<int, int> parse_target(const LevelSystem& system, const std::string& spec);

} // namespace rabispec
