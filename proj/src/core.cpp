#include "rabispec/core.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace rabispec {

LevelSystem::LevelSystem(std::vector<Level> levels, Eigen::MatrixXd couplings)
    : levels_(std::move(levels)), couplings_(std::move(couplings)) {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (couplings_(i, j) != 0.0) coupled_pairs_.emplace_back(i, j);
        }
    }
}

double LevelSystem::coupling(int i, int j) const {
    check_level(i);
    check_level(j);
    return couplings_(i, j);
}

double LevelSystem::transition_freq(int i, int j) const {
    check_level(i);
    check_level(j);
    return std::abs(levels_[static_cast<std::size_t>(i)].omega -
                    levels_[static_cast<std::size_t>(j)].omega);
}

bool LevelSystem::has_degenerate_coupled_pair() const {
    for (const auto& [i, j] : coupled_pairs_) {
        if (levels_[static_cast<std::size_t>(i)].omega ==
            levels_[static_cast<std::size_t>(j)].omega)
            return true;
    }
    return false;
}

int LevelSystem::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i) {
        if (levels_[static_cast<std::size_t>(i)].label == label) return i;
    }
    return -1;
}

void LevelSystem::check_level(int i) const {
    if (i < 0 || i >= size()) {
        std::ostringstream os;
        os << "level index " << i << " out of range [0, " << size() << ")";
        fail(errc::level_out_of_range, os.str());
    }
}

LevelSystem validate_system(std::vector<Level> levels, Eigen::MatrixXd couplings) {
    const int n = static_cast<int>(levels.size());
    if (n < 2) fail(errc::fewer_than_two_levels, "a system needs at least 2 levels");
    if (couplings.rows() != n || couplings.cols() != n) {
        std::ostringstream os;
        os << "coupling matrix is " << couplings.rows() << "x" << couplings.cols()
           << ", expected " << n << "x" << n;
        fail(errc::asymmetric_coupling, os.str());
    }

    std::set<std::string> seen;
    for (int i = 0; i < n; ++i) {
        auto& lv = levels[static_cast<std::size_t>(i)];
        if (lv.label.empty()) lv.label = std::to_string(i + 1);
        if (!seen.insert(lv.label).second)
            fail(errc::duplicate_label, "duplicate level label '" + lv.label + "'");
        if (!(lv.omega >= 0.0) || !std::isfinite(lv.omega))
            fail(errc::negative_energy,
                 "level '" + lv.label + "' has negative or non-finite energy");
    }

    for (int i = 0; i < n; ++i) {
        if (couplings(i, i) != 0.0) {
            fail(errc::nonzero_diagonal,
                 "coupling diagonal I[" + std::to_string(i + 1) + "][" +
                     std::to_string(i + 1) + "] must be zero");
        }
        for (int j = i + 1; j < n; ++j) {
            if (!std::isfinite(couplings(i, j)) || !std::isfinite(couplings(j, i)))
                fail(errc::parse_error, "non-finite coupling entry");
            if (couplings(i, j) != couplings(j, i)) {
                std::ostringstream os;
                os << "coupling matrix asymmetric at (" << i + 1 << "," << j + 1 << "): "
                   << couplings(i, j) << " vs " << couplings(j, i);
                fail(errc::asymmetric_coupling, os.str());
            }
        }
    }

    return LevelSystem(std::move(levels), std::move(couplings));
}

Drive make_drive(double f0, double omega) {
    Drive d{f0, omega};
    check_drive(d);
    return d;
}

void check_drive(const Drive& drive) {
    if (!(drive.f0 > 0.0) || !std::isfinite(drive.f0))
        fail(errc::bad_drive, "perturbation intensity f0 must be positive");
    if (!(drive.omega > 0.0) || !std::isfinite(drive.omega))
        fail(errc::bad_drive, "drive frequency omega must be positive");
}

TransitionParams transition_params(const LevelSystem& system, const Drive& drive, int i, int j) {
    system.check_level(i);
    system.check_level(j);
    check_drive(drive);
    if (i == j) fail(errc::uncoupled_transition, "transition needs two distinct levels");

    const double coupling = system.coupling(i, j);
    if (coupling == 0.0) {
        fail(errc::uncoupled_transition,
             "levels " + system.level(i).label + " and " + system.level(j).label +
                 " are not coupled; delta and gamma are undefined");
    }

    TransitionParams p;
    p.i = i;
    p.j = j;
    const double diff = system.omega(i) - system.omega(j);
    p.omega_ij = std::abs(diff);
    p.s_ij = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
    p.d_ij = drive.f0 * coupling;
    p.delta = (drive.omega - p.omega_ij) / p.d_ij;
    p.gamma = (drive.omega + p.omega_ij) / p.d_ij;
    return p;
}

} // namespace rabispec
