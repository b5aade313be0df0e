#pragma once

#include <vector>

#include "rabispec/core.hpp"

namespace rabispec {

struct PathStep {
    int from = 0;
    int to = 0;
    double f0 = 0.0;  // max_clean_intensity for this hop
    double time = 0.0; // min_transfer_time for this hop
};

// Fastest clean transfer route.  `found` is false when the destination is
// unreachable over finite-time edges (route empty, total_time = +inf).
struct PathResult {
    bool found = false;
    std::vector<int> route;
    std::vector<PathStep> steps;
    double total_time = 0.0;
};

// Shortest-total-time simple path over the coupling graph, each edge
// weighted by its own min_transfer_time (the edge treated as the target
// with its own adjacent-spectator constraints).  Sequential transfers are
// assumed non-overlapping: one hop is driven to completion before the
// next.  Ties break toward fewer hops, then the lexicographically smallest
// route.
PathResult fastest_path(const LevelSystem& system, int source, int dest,
                        double eps_leak = 0.01, double theta_rwa = 0.05);

} // namespace rabispec
