#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rabispec/errors.hpp"

namespace rabispec {

// Energies are stored as angular frequencies omega_i with hbar = 1; the
// examples shipped with the tool use atomic units throughout.
struct Level {
    std::string label;
    double omega = 0.0;
};

// A discrete-level system: ordered levels plus the real symmetric
// coupling-integral matrix I (zero diagonal).  F0 * I[i][j] carries
// angular-frequency units.  Instances are immutable once built; construct
// through validate_system().
class LevelSystem {
public:
    int size() const { return static_cast<int>(levels_.size()); }
    const std::vector<Level>& levels() const { return levels_; }
    const Level& level(int i) const { return levels_.at(static_cast<std::size_t>(i)); }
    double omega(int i) const { return level(i).omega; }

    const Eigen::MatrixXd& couplings() const { return couplings_; }
    double coupling(int i, int j) const;

    // |omega_i - omega_j|
    double transition_freq(int i, int j) const;

    // all unordered pairs i < j with I[i][j] != 0
    const std::vector<std::pair<int, int>>& coupled_pairs() const { return coupled_pairs_; }

    bool has_degenerate_coupled_pair() const;

    // -1 if the label is unknown
    int index_of(const std::string& label) const;

    void check_level(int i) const;

private:
    friend LevelSystem validate_system(std::vector<Level> levels, Eigen::MatrixXd couplings);
    LevelSystem(std::vector<Level> levels, Eigen::MatrixXd couplings);

    std::vector<Level> levels_;
    Eigen::MatrixXd couplings_;
    std::vector<std::pair<int, int>> coupled_pairs_;
};

// Monochromatic drive: V(t) = sigma * f0 * cos(omega t).
struct Drive {
    double f0 = 0.0;
    double omega = 0.0;
};

Drive make_drive(double f0, double omega);
void check_drive(const Drive& drive);

// Dimensionless per-transition drive parameters.
//
//   delta = (omega - omega_ij) / (F0 I_ij)     detuning
//   gamma = (omega + omega_ij) / (F0 I_ij)     counter-rotating scale
//
// Both are signed when I_ij < 0; |gamma| > |delta| whenever omega and
// omega_ij are positive.
struct TransitionParams {
    int i = 0;
    int j = 0;
    double omega_ij = 0.0; // |omega_i - omega_j|
    double d_ij = 0.0;     // f0 * I[i][j], signed total coupling
    double delta = 0.0;
    double gamma = 0.0;
    int s_ij = 0;          // sign(omega_i - omega_j); 0 for degenerate pairs
};

// Validates the raw system description.  Nothing is symmetrized silently:
// an asymmetric coupling matrix is an error.
LevelSystem validate_system(std::vector<Level> levels, Eigen::MatrixXd couplings);

TransitionParams transition_params(const LevelSystem& system, const Drive& drive, int i, int j);

} // namespace rabispec
