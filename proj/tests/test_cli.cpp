#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rabispec/commands.hpp"
#include "rabispec/dynamics.hpp"
#include "rabispec/spectra.hpp"
#include "rabispec/system_io.hpp"
#include "rabispec/trace_io.hpp"

using namespace rabispec;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string binary() {
    const char* bin = std::getenv("RABISPEC_BIN");
    return bin ? bin : "";
}

int run_cli(const std::string& args) {
    const int rc = std::system((binary() + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("rabispec_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_ladder_system(const TempDir& dir) {
    const std::string path = dir.file("ladder.json");
    save_system(fixtures::ladder(), path);
    return path;
}

std::string write_two_level_system(const TempDir& dir) {
    const std::string path = dir.file("two.json");
    save_system(fixtures::two_level(), path);
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    return slurp(a.string()) == slurp(b.string());
}

} // namespace

TEST_CASE("simulate writes a trace whose period ticks land on extrema") {
    REQUIRE_FALSE(binary().empty());
    TempDir dir("simulate");
    const std::string sys_path = write_two_level_system(dir);
    const double T = M_PI / 0.04;
    std::ostringstream cmd;
    cmd << "simulate --system " << sys_path << " --omega 1.0 --f0 0.04 --t-end "
        << 3.05 * T << " --out " << dir.str();
    REQUIRE(run_cli(cmd.str()) == 0);

    const auto trace = load_trace_csv(dir.file("trace.csv"));
    REQUIRE(trace.samples() > 100);
    for (int r = 0; r < trace.samples(); r += 13) {
        double sum = 0.0;
        for (int c = 0; c < trace.levels(); ++c) sum += trace.populations(r, c);
        CHECK(std::abs(sum - 1.0) <= 1e-8);
    }

    const json meta = json::parse(slurp(dir.file("trace.meta.json")));
    CHECK(meta.at("rwa").size() == 1);
    const double period = meta.at("rwa")[0].at("transfer_period").get<double>();
    CHECK(period == doctest::Approx(T).epsilon(1e-12));
    REQUIRE(meta.at("rwa")[0].at("period_gridlines").size() == 3);

    // population extrema sit on the tick marks: odd ticks are full transfer,
    // even ticks full return
    int tick = 1;
    for (const auto& g : meta.at("rwa")[0].at("period_gridlines")) {
        const double t_tick = g.get<double>();
        const auto nearest = [&](double t) {
            double best = 1e300, value = 0.0;
            for (int r = 0; r < trace.samples(); ++r) {
                const double d = std::abs(trace.times[static_cast<std::size_t>(r)] - t);
                if (d < best) {
                    best = d;
                    value = trace.populations(r, 1);
                }
            }
            return value;
        };
        if (tick % 2 == 1)
            CHECK(nearest(t_tick) >= 0.97);
        else
            CHECK(nearest(t_tick) <= 0.03);
        ++tick;
    }
}

TEST_CASE("simulate case d reaches the 1e-3 amplitude with double periodicity") {
    REQUIRE_FALSE(binary().empty());
    TempDir dir("cased");
    const std::string sys_path = write_two_level_system(dir);
    std::ostringstream cmd;
    cmd << "simulate --system " << sys_path
        << " --omega 2.580 --f0 0.05 --t-end 4.5 --sample-dt 0.002 --out " << dir.str();
    REQUIRE(run_cli(cmd.str()) == 0);
    const auto trace = load_trace_csv(dir.file("trace.csv"));
    const auto peak = peak_population(trace, 1, 0.0, 4.5);
    CHECK(peak.value == doctest::Approx(0.001).epsilon(0.5));
    CHECK(peak.value <= 0.01);
}

TEST_CASE("zero-length span yields an empty trace with a valid header") {
    REQUIRE_FALSE(binary().empty());
    TempDir dir("zerospan");
    const std::string sys_path = write_ladder_system(dir);
    std::ostringstream cmd;
    cmd << "simulate --system " << sys_path
        << " --omega 1.0 --f0 0.01 --t-end 0 --out " << dir.str();
    REQUIRE(run_cli(cmd.str()) == 0);
    const auto trace = load_trace_csv(dir.file("trace.csv"));
    CHECK(trace.samples() == 0);
    CHECK(trace.levels() == 3);
}

TEST_CASE("omega sweep fans out and matches single runs byte for byte") {
    REQUIRE_FALSE(binary().empty());
    TempDir dir("sweep");
    const std::string sys_path = write_two_level_system(dir);
    std::ostringstream sweep;
    sweep << "simulate --system " << sys_path
          << " --omega 1.0,1.05 --f0 0.05 --t-end 50 --out " << dir.file("sweep");
    REQUIRE(run_cli(sweep.str()) == 0);
    std::ostringstream single;
    single << "simulate --system " << sys_path
           << " --omega 1.05 --f0 0.05 --t-end 50 --out " << dir.file("single");
    REQUIRE(run_cli(single.str()) == 0);

    REQUIRE(fs::exists(dir.file("sweep/trace_000.csv")));
    REQUIRE(fs::exists(dir.file("sweep/trace_001.csv")));
    CHECK(same_bytes(dir.file("sweep/trace_001.csv"), dir.file("single/trace.csv")));
}

TEST_CASE("profile and spectrum commands export the expected curves") {
    REQUIRE_FALSE(binary().empty());
    TempDir dir("curves");
    const std::string sys_path = write_ladder_system(dir);

    std::ostringstream prof;
    prof << "profile --system " << sys_path
         << " --target 1,2 --f0 0.05 --omega-min 0.85 --omega-max 0.85 "
            "--omega-points 1 --out "
         << dir.str();
    REQUIRE(run_cli(prof.str()) == 0);
    const auto curve = load_curves_csv(dir.file("profile_1_2.csv"));
    REQUIRE(curve.x.size() == 1); // single-point grid -> single sample
    CHECK(curve.columns[0][0] == doctest::Approx(0.1).epsilon(1e-12));

    std::ostringstream spec;
    spec << "spectrum --system " << sys_path << " --target 1,2 --f0 0.02 --out "
         << dir.str() << " --format svg";
    REQUIRE(run_cli(spec.str()) == 0);
    const json meta = json::parse(slurp(dir.file("spectrum_1_2.meta.json")));
    REQUIRE(meta.at("profiles").size() == 2);
    CHECK(meta.at("profiles")[1].at("height_at_drive").get<double>() ==
          doctest::Approx(1.0 / (1.0 + std::pow(0.07 / 0.02, 2))).epsilon(1e-12));
    CHECK(fs::exists(dir.file("spectrum_1_2.svg")));
}

TEST_CASE("validate and pathway reports carry the reference numbers") {
    REQUIRE_FALSE(binary().empty());
    TempDir dir("reports");
    const std::string sys_path = write_ladder_system(dir);

    std::ostringstream val;
    val << "validate --system " << sys_path << " --target 1,2 --f0 0.005 --out "
        << dir.str();
    REQUIRE(run_cli(val.str()) == 0);
    const json report = json::parse(slurp(dir.file("validity.json")));
    CHECK(report.at("selective").get<bool>());
    CHECK(report.at("regime").get<std::string>() == "RWA_VALID");
    CHECK(report.at("worst_leakage").get<double>() ==
          doctest::Approx(1.0 / (1.0 + std::pow(0.07 / 0.005, 2))).epsilon(1e-12));

    std::ostringstream path;
    path << "pathway --system " << sys_path << " --source 1 --dest 3 --out "
         << dir.str();
    REQUIRE(run_cli(path.str()) == 0);
    const json result = json::parse(slurp(dir.file("pathway.json")));
    CHECK(result.at("found").get<bool>());
    CHECK(result.at("route") == json::array({1, 2, 3}));
    const double expect_hop = M_PI / (0.07 * std::sqrt(0.01 / 0.99));
    CHECK(result.at("total_time").get<double>() ==
          doctest::Approx(2.0 * expect_hop).epsilon(1e-12));
}

TEST_CASE("exit codes separate config errors from numerical failures") {
    REQUIRE_FALSE(binary().empty());
    TempDir dir("exits");
    const std::string sys_path = write_two_level_system(dir);

    CHECK(run_cli("simulate --system " + dir.file("missing.json") +
                  " --omega 1 --f0 0.1 --t-end 1 --out " + dir.str()) == 2);
    CHECK(run_cli("validate --system " + sys_path + " --target 1,9 --f0 0.1 --out " +
                  dir.str()) == 2);
    CHECK(run_cli("simulate --system " + sys_path +
                  " --omega 1 --f0 1e13 --t-end 1 --out " + dir.str()) == 3);
    CHECK(run_cli("profile --system " + sys_path + " --target 1,2 --f0 0.1 --out " +
                  dir.str()) == 0);
}

TEST_CASE("shipped fixtures load and analyze") {
    const char* dir = std::getenv("RABISPEC_FIXTURES");
    REQUIRE(dir != nullptr);
    const std::string root(dir);

    const auto two = load_system(root + "/two_level.json");
    CHECK(two.transition_freq(0, 1) == 1.0);

    const auto ladder = load_system(root + "/ladder.json");
    CHECK(ladder.size() == 3);
    CHECK(ladder.coupling(0, 2) == 0.0);

    // HF-flavored stand-in: two close ro-vibrational lines in atomic units
    const auto hf = load_system(root + "/hf_ladder.json");
    CHECK(hf.level(1).label == "v1");
    CHECK(hf.transition_freq(0, 1) == doctest::Approx(0.0179));
    CHECK(hf.transition_freq(1, 2) == doctest::Approx(0.0172));
    // expectations are formula-based, never the fixture numbers themselves
    const double split = std::abs(hf.transition_freq(1, 2) - hf.transition_freq(0, 1));
    const double f0 = max_clean_intensity(hf, 0, 1, 0.01, 0.05);
    CHECK(f0 == doctest::Approx(split * std::sqrt(0.01 / 0.99)).epsilon(1e-12));
}

TEST_CASE("pathway on the committed five-level fixture matches the oracle") {
    REQUIRE_FALSE(binary().empty());
    const char* fixdir = std::getenv("RABISPEC_FIXTURES");
    REQUIRE(fixdir != nullptr);
    const std::string sys_path = std::string(fixdir) + "/five_level.json";
    const auto sys = load_system(sys_path);
    const oracles::BruteForcePaths oracle(sys, 0.01, 0.05);
    const auto [best, best_route] = oracle.solve(0, 4);
    REQUIRE(std::isfinite(best));

    TempDir dir("fivelevel");
    REQUIRE(run_cli("pathway --system " + sys_path + " --source 1 --dest 5 --out " +
                    dir.str()) == 0);
    const json result = json::parse(slurp(dir.file("pathway.json")));
    REQUIRE(result.at("found").get<bool>());
    json expect_route = json::array();
    for (int node : best_route) expect_route.push_back(node + 1);
    CHECK(result.at("route") == expect_route);
    CHECK(result.at("total_time").get<double>() == best);
}

TEST_CASE("figures regenerate byte-identically") {
    REQUIRE_FALSE(binary().empty());
    TempDir dir("figsdet");
    REQUIRE(run_cli("figures --out " + dir.file("a")) == 0);
    REQUIRE(run_cli("figures --out " + dir.file("b")) == 0);

    const json manifest = json::parse(slurp(dir.file("a/manifest.json")));
    REQUIRE(manifest.at("files").size() > 10);
    for (const auto& rel : manifest.at("files")) {
        const std::string name = rel.get<std::string>();
        REQUIRE(fs::exists(dir.file("a/" + name)));
        REQUIRE(fs::exists(dir.file("b/" + name)));
        CHECK(same_bytes(dir.file("a/" + name), dir.file("b/" + name)));
    }

    // every emitted trace keeps its populations normalized
    const auto trace = load_trace_csv(dir.file("a/fig4/dynamics.csv"));
    for (int r = 0; r < trace.samples(); r += 31) {
        double sum = 0.0;
        for (int c = 0; c < trace.levels(); ++c) sum += trace.populations(r, c);
        CHECK(std::abs(sum - 1.0) <= 1e-8);
    }

    // the single-line profile set spans the four coupling regimes: widths
    // increase, so the height at the spectrum origin climbs toward 1
    const auto profiles = load_curves_csv(dir.file("a/fig1/profiles.csv"));
    REQUIRE(profiles.names.size() == 4);
    for (std::size_t c = 1; c < 4; ++c)
        CHECK(profiles.columns[c][0] > profiles.columns[c - 1][0]);
}
