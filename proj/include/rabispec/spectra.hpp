#pragma once

#include <vector>

#include "rabispec/analytic.hpp"
#include "rabispec/core.hpp"

namespace rabispec {

// All Rabi profiles of the spectral lines that couple either targeted
// level; the target's own profile is always included (exactly once, first).
struct RabiSpectrum {
    int alpha = 0;
    int beta = 0;
    double f0 = 0.0;
    std::vector<RabiProfile> profiles;
};

RabiSpectrum rabi_spectrum(const LevelSystem& system, double f0, int alpha, int beta);

struct LeakageEntry {
    int i = 0;
    int j = 0;
    double height = 0.0; // P_ij evaluated at the drive frequency
};

// Per-transition RWA and selectivity diagnostics at one drive frequency.
struct ValidityReport {
    int alpha = 0;
    int beta = 0;
    double f0 = 0.0;
    double drive_omega = 0.0;
    double gamma_at_resonance = 0.0; // 2 omega_ab / |D_ab|
    double gamma_at_drive = 0.0;     // (drive_omega + omega_ab) / |D_ab|
    double rwa_ratio = 0.0;          // |D_ab| / omega_ab
    std::vector<LeakageEntry> spectator_leakage;
    double worst_leakage = 0.0;
    double eps_leak = 0.0;
    Regime regime = Regime::rwa_valid; // classified at the drive frequency
    bool selective = false;            // worst_leakage <= eps_leak
};

ValidityReport validity_report(const LevelSystem& system, double f0, int alpha, int beta,
                               double drive_omega, double eps_leak = 0.01,
                               const RegimeThresholds& thresholds = {});

// Largest F0 that drives (alpha, beta) cleanly:
//   (a) F0 |I_ab| <= theta_rwa * omega_ab
//   (b) F0 |I_gd| <= |omega_gd - omega_ab| sqrt(eps_leak / (1 - eps_leak))
//       for every spectator (g, d) of the target's Rabi spectrum
//   (c) F0 |I_gd| <= theta_rwa * omega_gd for every spectator
// Returns 0 when a spectator is degenerate with the target (no positive F0
// satisfies (b)).
double max_clean_intensity(const LevelSystem& system, int alpha, int beta,
                           double eps_leak = 0.01, double theta_rwa = 0.05);

// pi / (max_clean_intensity * |I_ab|); +inf when the intensity limit is 0.
double min_transfer_time(const LevelSystem& system, int alpha, int beta,
                         double eps_leak = 0.01, double theta_rwa = 0.05);

} // namespace rabispec
