#pragma once

#include <random>

#include "rabispec/core.hpp"

namespace fixtures {

inline rabispec::LevelSystem two_level(double omega12 = 1.0, double coupling = 1.0) {
    Eigen::MatrixXd I(2, 2);
    I << 0, coupling, coupling, 0;
    return rabispec::validate_system({{"1", 0.0}, {"2", omega12}}, I);
}

// the three-level ladder used throughout: omega = (0, 1, 1.93), I13 = 0
inline rabispec::LevelSystem ladder() {
    Eigen::MatrixXd I(3, 3);
    I << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    return rabispec::validate_system({{"1", 0.0}, {"2", 1.0}, {"3", 1.93}}, I);
}

// Random system with well-separated transitions: level gaps in
// [gap_lo, gap_hi], couplings of magnitude [0.5, 1.5] with random sign,
// each pair coupled with probability `density` (a random spanning chain
// keeps the graph connected when `connect` is set).
inline rabispec::LevelSystem random_system(std::mt19937_64& rng, int n_levels,
                                           double density = 0.7, bool connect = true,
                                           double gap_lo = 0.3, double gap_hi = 0.9) {
    std::uniform_real_distribution<double> gap(gap_lo, gap_hi);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<rabispec::Level> levels;
    double omega = unit(rng);
    for (int i = 0; i < n_levels; ++i) {
        levels.push_back({std::to_string(i + 1), omega});
        omega += gap(rng);
    }

    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(n_levels, n_levels);
    for (int i = 0; i < n_levels; ++i) {
        for (int j = i + 1; j < n_levels; ++j) {
            const bool on = unit(rng) < density || (connect && j == i + 1);
            if (!on) continue;
            const double value = mag(rng) * (unit(rng) < 0.5 ? -1.0 : 1.0);
            I(i, j) = I(j, i) = value;
        }
    }
    return rabispec::validate_system(std::move(levels), std::move(I));
}

} // namespace fixtures
