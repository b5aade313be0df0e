#include "rabispec/pathway.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "rabispec/spectra.hpp"

namespace rabispec {

namespace {

struct Label {
    double dist;
    int hops;
    std::vector<int> route;
};

// total order: time, then hop count, then lexicographic route
struct LabelWorse {
    bool operator()(const Label& a, const Label& b) const {
        if (a.dist != b.dist) return a.dist > b.dist;
        if (a.hops != b.hops) return a.hops > b.hops;
        return a.route > b.route;
    }
};

} // namespace

PathResult fastest_path(const LevelSystem& system, int source, int dest, double eps_leak,
                        double theta_rwa) {
    system.check_level(source);
    system.check_level(dest);
    if (source == dest)
        fail(errc::bad_path_endpoints, "source and destination must differ");

    const int n = system.size();
    const double inf = std::numeric_limits<double>::infinity();

    // Edge weights depend only on the system and the edge, so they can be
    // computed once up front.
    Eigen::MatrixXd weight = Eigen::MatrixXd::Constant(n, n, inf);
    Eigen::MatrixXd intensity = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [i, j] : system.coupled_pairs()) {
        const double f0 = max_clean_intensity(system, i, j, eps_leak, theta_rwa);
        const double t = f0 > 0.0 ? min_transfer_time(system, i, j, eps_leak, theta_rwa) : inf;
        weight(i, j) = weight(j, i) = t;
        intensity(i, j) = intensity(j, i) = f0;
    }

    std::priority_queue<Label, std::vector<Label>, LabelWorse> open;
    std::vector<bool> settled(static_cast<std::size_t>(n), false);
    open.push(Label{0.0, 0, {source}});

    PathResult result;
    result.total_time = inf;

    while (!open.empty()) {
        Label cur = open.top();
        open.pop();
        const int node = cur.route.back();
        if (settled[static_cast<std::size_t>(node)]) continue;
        settled[static_cast<std::size_t>(node)] = true;

        if (node == dest) {
            result.found = true;
            result.route = cur.route;
            break;
        }
        for (int next = 0; next < n; ++next) {
            if (settled[static_cast<std::size_t>(next)]) continue;
            const double w = weight(node, next);
            if (!std::isfinite(w)) continue;
            Label ext{cur.dist + w, cur.hops + 1, cur.route};
            ext.route.push_back(next);
            open.push(std::move(ext));
        }
    }

    if (!result.found) return result;

    result.total_time = 0.0;
    for (std::size_t k = 0; k + 1 < result.route.size(); ++k) {
        const int a = result.route[k];
        const int b = result.route[k + 1];
        result.steps.push_back(PathStep{a, b, intensity(a, b), weight(a, b)});
        result.total_time += weight(a, b);
    }
    return result;
}

} // namespace rabispec
