#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "rabispec/dynamics.hpp"
#include "rabispec/svg.hpp"
#include "rabispec/system_io.hpp"
#include "rabispec/trace_io.hpp"

using namespace rabispec;
namespace fs = std::filesystem;

namespace {

bool fails_with(errc code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / ("rabispec_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("system serialization round-trips exactly") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        const auto sys = fixtures::random_system(rng, 3 + trial % 4);
        const auto back = parse_system(serialize_system(sys));
        REQUIRE(back.size() == sys.size());
        for (int i = 0; i < sys.size(); ++i) {
            CHECK(back.level(i).label == sys.level(i).label);
            CHECK(back.level(i).omega == sys.level(i).omega); // bitwise
        }
        CHECK(back.couplings() == sys.couplings());
        CHECK(system_hash(back) == system_hash(sys));

        // a third pass is the identity again
        const auto twice = parse_system(serialize_system(back));
        CHECK(twice.couplings() == back.couplings());
    }
}

TEST_CASE("system parse diagnostics") {
    CHECK(fails_with(errc::parse_error, [] { parse_system("{ not json"); }));
    CHECK(fails_with(errc::parse_error, [] { parse_system(R"({"levels": 3})"); }));
    CHECK(fails_with(errc::parse_error, [] {
        parse_system(R"({"levels": [{"omega": 0}, {"omega": 1}],
                         "couplings": [{"i": 1, "j": 5, "value": 1}]})");
    }));
    CHECK(fails_with(errc::nonzero_diagonal, [] {
        parse_system(R"({"levels": [{"omega": 0}, {"omega": 1}],
                         "couplings": [{"i": 1, "j": 1, "value": 0.3}]})");
    }));
    CHECK(fails_with(errc::parse_error, [] {
        parse_system(R"({"levels": [{"omega": 0}, {"omega": 1}],
                         "couplings": [{"i": 1.5, "j": 2, "value": 1}]})");
    }));
    // mirrored entries must agree exactly; nothing is symmetrized silently
    CHECK(fails_with(errc::asymmetric_coupling, [] {
        parse_system(R"({"levels": [{"omega": 0}, {"omega": 1}],
                         "couplings": [{"i": 1, "j": 2, "value": 1.0},
                                       {"i": 2, "j": 1, "value": 0.9}]})");
    }));
    // error text carries the entry position
    try {
        parse_system(R"({"levels": [{"omega": 0}, {"omega": 1}],
                         "couplings": [{"i": 1, "j": 2, "value": 1.0},
                                       {"i": 2, "j": 9, "value": 1.0}]})",
                     "bad.json");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("couplings[1]") != std::string::npos);
        CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
    }

    // labels default to 1-based positions
    const auto sys = parse_system(R"({"levels": [{"omega": 0}, {"omega": 1}],
                                      "couplings": [{"i": 1, "j": 2, "value": 1}]})");
    CHECK(sys.level(0).label == "1");
    CHECK(resolve_level(sys, "2") == 1);
    CHECK(fails_with(errc::level_out_of_range, [&] { resolve_level(sys, "7"); }));
}

TEST_CASE("trace files reload without loss") {
    const LevelSystem sys = fixtures::ladder();
    const auto trace = integrate(sys, make_drive(0.05, 1.0), basis_state(sys, 1), 30.0);
    const std::string path = temp_path("trace.csv");
    write_trace_csv(trace, path);

    const auto back = load_trace_csv(path);
    REQUIRE(back.samples() == trace.samples());
    REQUIRE(back.levels() == trace.levels());
    for (int r = 0; r < trace.samples(); r += 7) {
        CHECK(back.times[static_cast<std::size_t>(r)] ==
              trace.times[static_cast<std::size_t>(r)]);
        for (int c = 0; c < trace.levels(); ++c) {
            CHECK(back.populations(r, c) == trace.populations(r, c));
            CHECK(back.amplitudes(r, c) == trace.amplitudes(r, c));
        }
    }

    // header layout is part of the contract
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,Pi_1,Pi_2,Pi_3,Re_a1,Im_a1,Re_a2,Im_a2,Re_a3,Im_a3");
    std::remove(path.c_str());
}

TEST_CASE("curve files reload without loss") {
    CurveSet curves;
    curves.x_name = "omega";
    curves.names = {"P_1_2", "P_2_3"};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    curves.columns.resize(2);
    for (int k = 0; k < 200; ++k) {
        curves.x.push_back(u(rng));
        curves.columns[0].push_back(u(rng));
        curves.columns[1].push_back(u(rng));
    }
    const std::string path = temp_path("curves.csv");
    write_curves_csv(curves, path);
    const auto back = load_curves_csv(path);
    CHECK(back.x_name == "omega");
    CHECK(back.names == curves.names);
    CHECK(back.x == curves.x);
    CHECK(back.columns == curves.columns);
    std::remove(path.c_str());
}

TEST_CASE("malformed trace files are reported with line positions") {
    const std::string path = temp_path("broken.csv");
    {
        std::ofstream out(path);
        out << "t,Pi_1,Re_a1,Im_a1\n";
        out << "0.0,1.0,1.0,0.0\n";
        out << "0.1,oops,1.0,0.0\n";
    }
    try {
        load_trace_csv(path);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::parse_error);
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("svg renderer emits one polyline per series") {
    const std::string path = temp_path("plot.svg");
    PlotSeries a{"one", {0, 1, 2}, {0.0, 0.5, 0.2}};
    PlotSeries b{"two", {0, 1, 2}, {0.1, 0.4, 0.9}};
    write_svg_lineplot(path, PlotLayout{"title", "x", "y", {1.0}, {0.5}}, {a, b});
    const std::string body = slurp(path);
    CHECK(body.find("<svg") != std::string::npos);
    std::size_t count = 0, pos = 0;
    while ((pos = body.find("<polyline", pos)) != std::string::npos) {
        ++count;
        pos += 1;
    }
    CHECK(count == 2);
    std::remove(path.c_str());
}

TEST_CASE("format_double survives a binary64 round trip") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double x = std::ldexp(u(rng), static_cast<int>(rng() % 64) - 32);
        CHECK(std::stod(format_double(x)) == x);
    }
}
