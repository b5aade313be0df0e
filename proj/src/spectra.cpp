#include "rabispec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rabispec {

namespace {

void check_target(const LevelSystem& system, int alpha, int beta) {
    system.check_level(alpha);
    system.check_level(beta);
    if (alpha == beta || system.coupling(alpha, beta) == 0.0) {
        fail(errc::uncoupled_target, "target (" + system.level(alpha).label + ", " +
                                         system.level(beta).label + ") is not coupled");
    }
}

// spectator pairs: coupled, touch alpha or beta, and are not the target
std::vector<std::pair<int, int>> spectator_pairs(const LevelSystem& system, int alpha,
                                                 int beta) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [i, j] : system.coupled_pairs()) {
        if ((i == alpha && j == beta) || (i == beta && j == alpha)) continue;
        if (i == alpha || i == beta || j == alpha || j == beta) out.emplace_back(i, j);
    }
    return out;
}

} // namespace

RabiSpectrum rabi_spectrum(const LevelSystem& system, double f0, int alpha, int beta) {
    check_target(system, alpha, beta);
    RabiSpectrum spectrum;
    spectrum.alpha = alpha;
    spectrum.beta = beta;
    spectrum.f0 = f0;
    spectrum.profiles.push_back(make_profile(system, f0, alpha, beta));
    for (const auto& [i, j] : spectator_pairs(system, alpha, beta))
        spectrum.profiles.push_back(make_profile(system, f0, i, j));
    return spectrum;
}

ValidityReport validity_report(const LevelSystem& system, double f0, int alpha, int beta,
                               double drive_omega, double eps_leak,
                               const RegimeThresholds& thresholds) {
    const RabiSpectrum spectrum = rabi_spectrum(system, f0, alpha, beta);
    const RabiProfile& target = spectrum.profiles.front();

    ValidityReport report;
    report.alpha = alpha;
    report.beta = beta;
    report.f0 = f0;
    report.drive_omega = drive_omega;
    report.eps_leak = eps_leak;
    report.gamma_at_resonance = 2.0 * target.center / target.halfwidth;
    report.gamma_at_drive = (drive_omega + target.center) / target.halfwidth;
    report.rwa_ratio = target.halfwidth / target.center;
    report.regime = classify_regime(report.gamma_at_drive, thresholds);

    for (std::size_t k = 1; k < spectrum.profiles.size(); ++k) {
        const RabiProfile& p = spectrum.profiles[k];
        report.spectator_leakage.push_back(
            LeakageEntry{p.i, p.j, profile_height(p, drive_omega)});
    }
    report.worst_leakage = 0.0;
    for (const auto& entry : report.spectator_leakage)
        report.worst_leakage = std::max(report.worst_leakage, entry.height);
    report.selective = report.worst_leakage <= eps_leak;
    return report;
}

double max_clean_intensity(const LevelSystem& system, int alpha, int beta,
                           double eps_leak, double theta_rwa) {
    check_target(system, alpha, beta);
    if (!(eps_leak > 0.0) || !(eps_leak < 1.0))
        fail(errc::bad_tolerances, "eps_leak must be in (0, 1)");
    if (!(theta_rwa > 0.0) || !(theta_rwa < 1.0))
        fail(errc::bad_tolerances, "theta_rwa must be in (0, 1)");

    const double omega_t = system.transition_freq(alpha, beta);
    if (omega_t == 0.0) {
        fail(errc::degenerate_transition,
             "target levels are degenerate; no RWA-valid drive exists");
    }

    // (a) target RWA bound
    double limit = theta_rwa * omega_t / std::abs(system.coupling(alpha, beta));

    const double leak_factor = std::sqrt(eps_leak / (1.0 - eps_leak));
    for (const auto& [i, j] : spectator_pairs(system, alpha, beta)) {
        const double omega_s = system.transition_freq(i, j);
        const double abs_coupling = std::abs(system.coupling(i, j));
        const double split = std::abs(omega_s - omega_t);
        if (split == 0.0) return 0.0; // degenerate spectator: unsatisfiable
        // (b) leakage bound, the exact inversion of P_s(omega_t) <= eps_leak
        limit = std::min(limit, split * leak_factor / abs_coupling);
        // (c) spectator RWA bound at its own center
        limit = std::min(limit, theta_rwa * omega_s / abs_coupling);
    }
    return limit;
}

double min_transfer_time(const LevelSystem& system, int alpha, int beta, double eps_leak,
                         double theta_rwa) {
    const double f0 = max_clean_intensity(system, alpha, beta, eps_leak, theta_rwa);
    if (f0 == 0.0) return std::numeric_limits<double>::infinity();
    return M_PI / (f0 * std::abs(system.coupling(alpha, beta)));
}

} // namespace rabispec
