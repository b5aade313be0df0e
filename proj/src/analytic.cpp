#include "rabispec/analytic.hpp"

#include <cmath>
#include <limits>

namespace rabispec {

RabiProfile make_profile(const LevelSystem& system, double f0, int i, int j) {
    system.check_level(i);
    system.check_level(j);
    if (!(f0 > 0.0)) fail(errc::bad_drive, "profile needs a positive intensity f0");
    const double coupling = (i == j) ? 0.0 : system.coupling(i, j);
    if (coupling == 0.0) {
        fail(errc::uncoupled_transition, "no profile for uncoupled pair (" +
                                             system.level(i).label + ", " +
                                             system.level(j).label + ")");
    }
    const double center = system.transition_freq(i, j);
    if (center == 0.0) {
        fail(errc::degenerate_transition,
             "levels " + system.level(i).label + " and " + system.level(j).label +
                 " are degenerate; the profile center would sit at omega = 0");
    }
    return RabiProfile{center, f0 * std::abs(coupling), i, j};
}

double profile_height(const RabiProfile& profile, double omega) {
    const double x = (omega - profile.center) / profile.halfwidth;
    return 1.0 / (1.0 + x * x);
}

double transfer_period(const RabiProfile& profile, double omega) {
    return M_PI / profile.halfwidth * std::sqrt(profile_height(profile, omega));
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::rwa_valid: return "RWA_VALID";
        case Regime::marginal: return "MARGINAL";
        case Regime::broken: return "BROKEN";
        case Regime::extreme: return "EXTREME";
    }
    return "?";
}

Regime classify_regime(double gamma, const RegimeThresholds& thresholds) {
    const double g = std::abs(gamma);
    if (g >= thresholds.gamma_valid) return Regime::rwa_valid;
    if (g <= thresholds.gamma_extreme) return Regime::extreme;
    if (g <= 2.0) return Regime::broken;
    return Regime::marginal;
}

Regime classify_regime(const TransitionParams& params, const RegimeThresholds& thresholds) {
    return classify_regime(params.gamma, thresholds);
}

RwaPrediction rwa_prediction(const LevelSystem& system, const Drive& drive, int i, int j,
                             const RegimeThresholds& thresholds) {
    const TransitionParams params = transition_params(system, drive, i, j);
    const RabiProfile profile = make_profile(system, drive.f0, i, j);
    RwaPrediction out;
    out.amplitude = profile_height(profile, drive.omega);
    out.transfer_period = transfer_period(profile, drive.omega);
    out.gamma = params.gamma;
    out.bloch_siegert_amplitude = 1.0 / std::abs(params.gamma);
    out.regime = classify_regime(params, thresholds);
    return out;
}

double rwa_population(const TransitionParams& params, double t) {
    const double amplitude = 1.0 / (1.0 + params.delta * params.delta);
    const double period = M_PI / std::abs(params.d_ij) * std::sqrt(amplitude);
    const double s = std::sin(M_PI * t / (2.0 * period));
    return amplitude * s * s;
}

double extreme_coupling_period(double tau, double delta, double gamma, double eps) {
    const double denom = std::abs(1.0 + std::cos(2.0 * (delta + gamma) * tau));
    if (denom < eps) return std::numeric_limits<double>::infinity();
    return M_PI / denom;
}

} // namespace rabispec
