#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rabispec/pathway.hpp"
#include "rabispec/spectra.hpp"

using namespace rabispec;

namespace {

bool fails_with(errc code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

} // namespace

TEST_CASE("single-edge graph") {
    const LevelSystem sys = fixtures::two_level();
    const auto result = fastest_path(sys, 0, 1);
    REQUIRE(result.found);
    CHECK(result.route == std::vector<int>{0, 1});
    REQUIRE(result.steps.size() == 1);
    CHECK(result.total_time == min_transfer_time(sys, 0, 1));
    CHECK(result.total_time == result.steps[0].time);
}

TEST_CASE("three-level ladder goes through the middle") {
    const LevelSystem sys = fixtures::ladder();
    const auto result = fastest_path(sys, 0, 2);
    REQUIRE(result.found);
    CHECK(result.route == std::vector<int>{0, 1, 2});
    CHECK(result.total_time ==
          min_transfer_time(sys, 0, 1) + min_transfer_time(sys, 1, 2));
}

TEST_CASE("unreachable destination yields the no-path marker") {
    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(4, 4);
    I(0, 1) = I(1, 0) = 1.0;
    I(2, 3) = I(3, 2) = 1.0;
    const auto sys = validate_system(
        {{"1", 0.0}, {"2", 1.0}, {"3", 2.1}, {"4", 3.3}}, I);
    const auto result = fastest_path(sys, 0, 3);
    CHECK_FALSE(result.found);
    CHECK(result.route.empty());
    CHECK(result.total_time == std::numeric_limits<double>::infinity());
}

TEST_CASE("endpoint validation") {
    const LevelSystem sys = fixtures::ladder();
    CHECK(fails_with(errc::level_out_of_range, [&] { fastest_path(sys, 0, 7); }));
    CHECK(fails_with(errc::bad_path_endpoints, [&] { fastest_path(sys, 1, 1); }));
}

TEST_CASE("tie-breaks: fewer hops, then lexicographic route") {
    // Dyadic level energies keep every transition frequency and spacing an
    // exact power-of-two multiple, so symmetric branches get bitwise-equal
    // weights; both branch edges and the direct edge are bound by a
    // spectator-leakage constraint whose values differ only by factors of 2.
    const double eps = 0.01, theta = 0.2;

    SUBCASE("equal-time branches resolve lexicographically") {
        std::vector<Level> levels{{"1", 0.0}, {"2", 1.0}, {"3", 1.25}, {"4", 2.25}};
        Eigen::MatrixXd I = Eigen::MatrixXd::Zero(4, 4);
        I(0, 1) = I(1, 0) = 1.0;
        I(1, 3) = I(3, 1) = 1.0;
        I(0, 2) = I(2, 0) = 1.0;
        I(2, 3) = I(3, 2) = 1.0;
        const auto sys = validate_system(levels, I);
        const double w12 = min_transfer_time(sys, 0, 1, eps, theta);
        const double w13 = min_transfer_time(sys, 0, 2, eps, theta);
        REQUIRE(w12 == w13); // exact tie by construction
        const auto result = fastest_path(sys, 0, 3, eps, theta);
        REQUIRE(result.found);
        CHECK(result.route == std::vector<int>{0, 1, 3});
    }

    SUBCASE("direct edge with the same total time wins on hops") {
        // level 5 exists only to hand the direct edge a spectator at spacing
        // 0.5; with |I_14| = 1/4 the direct transfer time lands exactly on
        // the two-hop total (all bounds scale by powers of two)
        std::vector<Level> levels{
            {"1", 0.0}, {"2", 1.0}, {"3", 1.25}, {"4", 2.25}, {"5", 4.0}};
        Eigen::MatrixXd I = Eigen::MatrixXd::Zero(5, 5);
        I(0, 1) = I(1, 0) = 1.0;
        I(1, 3) = I(3, 1) = 1.0;
        I(0, 2) = I(2, 0) = 1.0;
        I(2, 3) = I(3, 2) = 1.0;
        I(0, 3) = I(3, 0) = 0.25;
        I(3, 4) = I(4, 3) = 1.0;
        const auto sys = validate_system(levels, I);
        const double direct = min_transfer_time(sys, 0, 3, eps, theta);
        const double two_hop = min_transfer_time(sys, 0, 1, eps, theta) +
                               min_transfer_time(sys, 1, 3, eps, theta);
        REQUIRE(direct == two_hop); // exact tie by construction
        const auto result = fastest_path(sys, 0, 3, eps, theta);
        REQUIRE(result.found);
        CHECK(result.route == std::vector<int>{0, 3});
    }
}

TEST_CASE("randomized systems match the exhaustive oracle") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> nlv(3, 6);
    for (int trial = 0; trial < 12; ++trial) {
        const auto sys = fixtures::random_system(rng, nlv(rng), 0.5, trial % 3 != 0);
        const int dest = sys.size() - 1;
        const oracles::BruteForcePaths oracle(sys, 0.01, 0.05);
        const auto [best, best_route] = oracle.solve(0, dest);
        const auto result = fastest_path(sys, 0, dest);
        if (!std::isfinite(best)) {
            CHECK_FALSE(result.found);
            continue;
        }
        REQUIRE(result.found);
        CHECK(result.total_time == best);
        CHECK(result.route == best_route);

        // weights are path independent: a second search reproduces the result
        const auto again = fastest_path(sys, 0, dest);
        CHECK(again.route == result.route);
        CHECK(again.total_time == result.total_time);
    }
}

// "Removing" an edge bans it from routing; the physical coupling stays in
// the system, so every edge keeps its spectator constraints and weight.
// (Zeroing the coupling instead would shrink the neighbours' spectator sets
// and can genuinely speed the route up.)
TEST_CASE("banning a non-optimal edge from routing never shortens the route") {
    std::mt19937_64 rng(7);
    const auto sys = fixtures::random_system(rng, 5, 0.8);
    const auto base = fastest_path(sys, 0, 4);
    REQUIRE(base.found);

    for (const auto& [i, j] : sys.coupled_pairs()) {
        bool on_route = false;
        for (std::size_t k = 0; k + 1 < base.route.size(); ++k) {
            if ((base.route[k] == i && base.route[k + 1] == j) ||
                (base.route[k] == j && base.route[k + 1] == i))
                on_route = true;
        }
        if (on_route) continue;
        oracles::BruteForcePaths oracle(sys, 0.01, 0.05);
        oracle.weight(i, j) = oracle.weight(j, i) =
            std::numeric_limits<double>::infinity();
        const auto [banned_best, banned_route] = oracle.solve(0, 4);
        REQUIRE(std::isfinite(banned_best));
        CHECK(banned_best >= base.total_time);
    }
}
