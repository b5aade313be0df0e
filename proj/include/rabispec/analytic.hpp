#pragma once

#include "rabispec/core.hpp"

namespace rabispec {

// Lorentzian amplitude-vs-frequency curve of one transition:
//
//   P(omega) = 1 / (1 + ((omega - center) / halfwidth)^2)
//
// center = omega_ij, halfwidth = |D_ij| = f0 |I_ij| (half-width at
// half-maximum).  P(center) = 1, P(center +- halfwidth) = 1/2.
struct RabiProfile {
    double center = 0.0;
    double halfwidth = 0.0;
    int i = 0;
    int j = 0;
};

RabiProfile make_profile(const LevelSystem& system, double f0, int i, int j);

double profile_height(const RabiProfile& profile, double omega);

// Population-transfer period (time from the first maximum of the source
// level to the first maximum of the target level, i.e. half a full
// oscillation cycle):
//
//   T(omega) = pi / |D| * sqrt(P(omega))
double transfer_period(const RabiProfile& profile, double omega);

enum class Regime { rwa_valid, marginal, broken, extreme };

const char* regime_name(Regime r);

struct RegimeThresholds {
    double gamma_valid = 20.0;
    double gamma_extreme = 0.2;
};

// Classification by |gamma|: rwa_valid at >= gamma_valid, extreme at
// <= gamma_extreme, broken at <= 2, marginal in between.
Regime classify_regime(double gamma, const RegimeThresholds& thresholds = {});
Regime classify_regime(const TransitionParams& params, const RegimeThresholds& thresholds = {});

// Closed-form generalized Rabi prediction for one driven transition.
struct RwaPrediction {
    double amplitude = 0.0;               // profile height at the drive frequency
    double transfer_period = 0.0;
    double gamma = 0.0;
    double bloch_siegert_amplitude = 0.0; // 1 / |gamma|
    Regime regime = Regime::rwa_valid;
};

RwaPrediction rwa_prediction(const LevelSystem& system, const Drive& drive, int i, int j,
                             const RegimeThresholds& thresholds = {});

// Target-level population of the generalized Rabi solution, with all
// population initially in the source level:
//
//   Pi(t) = A sin^2(pi t / (2 T)),  A = 1/(1 + delta^2)
double rwa_population(const TransitionParams& params, double t);

// Temporally modulated period of the extreme-coupling regime,
// pi / |1 + cos(2 (delta + gamma) tau)| in scaled time.  Returns +inf where
// the denominator falls below eps.  Diagnostic only; the authoritative
// dynamics for this regime come from the integrator.
double extreme_coupling_period(double tau, double delta, double gamma, double eps = 1e-9);

} // namespace rabispec
