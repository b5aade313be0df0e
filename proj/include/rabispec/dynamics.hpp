#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rabispec/core.hpp"

namespace rabispec {

struct AmplitudeState {
    double t = 0.0;
    Eigen::VectorXcd a;
};

// All population in one level at time t.
AmplitudeState basis_state(const LevelSystem& system, int level, double t = 0.0);

struct IntegratorOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double norm_tolerance = 1e-8;
    // <= 0: derived from the fastest phase in the right-hand side,
    // (2 pi / (omega + max_ij omega_ij)) / 10.
    double max_step = 0.0;
    // Dense-output grid spacing; <= 0 picks a grid that resolves the
    // counter-rotating ripple where affordable.
    double sample_dt = 0.0;
    // Explicit dense-output times (ascending, within the run span).
    // Overrides sample_dt when non-empty.
    std::vector<double> sample_times;
    // Also record integrator-accepted step endpoints in the trace.
    bool keep_step_points = true;
};

struct TraceMetadata {
    double f0 = 0.0;
    double drive_omega = 0.0;
    double rel_tol = 0.0;
    double abs_tol = 0.0;
    double norm_tolerance = 0.0;
    double max_step = 0.0;
    double max_norm_drift = 0.0;
    double final_norm_drift = 0.0;
    bool degenerate_levels = false;
    std::uint64_t accepted_steps = 0;
    std::uint64_t rejected_steps = 0;
};

// Time series of complex amplitudes and populations from exact (non-RWA)
// integration; populations are the squared moduli of the amplitudes.
struct PopulationTrace {
    std::vector<double> times;
    Eigen::MatrixXcd amplitudes;  // one row per time
    Eigen::MatrixXd populations;  // |a|^2, one row per time
    TraceMetadata meta;

    int levels() const { return static_cast<int>(populations.cols()); }
    int samples() const { return static_cast<int>(times.size()); }
};

// Integrates the full coupled amplitude equations in lab time,
//
//   da_j/dt = -i F0 cos(omega t) sum_i a_i I_ij exp(i (omega_j - omega_i) t),
//
// with no rotating-wave truncation: both exp(+i omega t) and
// exp(-i omega t) components of the cosine drive are retained.  The
// coefficient matrix is -i times a Hermitian matrix, so the exact flow is
// unitary; any norm drift in the result measures integrator error alone.
PopulationTrace integrate(const LevelSystem& system, const Drive& drive,
                          const AmplitudeState& initial, double t_end,
                          const IntegratorOptions& opts = {});

struct Peak {
    double t = 0.0;
    double value = 0.0;
};

// Global maximum of one level's population over [t_lo, t_hi] on the trace grid.
Peak peak_population(const PopulationTrace& trace, int level, double t_lo, double t_hi);

// Time of the first population crest of a level that starts (near-)empty.
// The crest is bracketed by the first pair of crossings of half the global
// maximum and its peak located by a quadratic fit through the bracketed
// grid points, which stays put under superimposed Bloch-Siegert ripple.
double measured_transfer_period(const PopulationTrace& trace, int level);

// Local population maxima with at least the given height and prominence;
// used to diagnose the modulated-period extreme-coupling regime.
std::vector<Peak> local_maxima(const PopulationTrace& trace, int level,
                               double min_height, double min_prominence);

} // namespace rabispec
