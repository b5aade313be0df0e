#include "rabispec/system_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rabispec {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    return buf;
}

namespace {

double require_number(const json& node, const char* key, const std::string& where) {
    if (!node.contains(key) || !node[key].is_number())
        fail(errc::parse_error, where + ": missing or non-numeric field '" + key + "'");
    return node[key].get<double>();
}

int require_index(const json& node, const char* key, const std::string& where) {
    if (!node.contains(key) || !node[key].is_number_integer())
        fail(errc::parse_error, where + ": field '" + key + "' must be an integer");
    return node[key].get<int>();
}

} // namespace

LevelSystem parse_system(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(errc::parse_error, origin + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("levels") || !doc["levels"].is_array())
        fail(errc::parse_error, origin + ": expected an object with a 'levels' array");

    std::vector<Level> levels;
    int idx = 0;
    for (const auto& node : doc["levels"]) {
        const std::string where = origin + ": levels[" + std::to_string(idx) + "]";
        Level lv;
        lv.omega = require_number(node, "omega", where);
        if (node.contains("label")) {
            if (!node["label"].is_string())
                fail(errc::parse_error, where + ": 'label' must be a string");
            lv.label = node["label"].get<std::string>();
        }
        levels.push_back(std::move(lv));
        ++idx;
    }

    const int n = static_cast<int>(levels.size());
    Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(std::max(n, 1), std::max(n, 1));
    Eigen::MatrixXd seen = Eigen::MatrixXd::Zero(std::max(n, 1), std::max(n, 1));
    if (doc.contains("couplings")) {
        if (!doc["couplings"].is_array())
            fail(errc::parse_error, origin + ": 'couplings' must be an array");
        idx = 0;
        for (const auto& node : doc["couplings"]) {
            const std::string where = origin + ": couplings[" + std::to_string(idx) + "]";
            const int i = require_index(node, "i", where);
            const int j = require_index(node, "j", where);
            const double value = require_number(node, "value", where);
            if (i < 1 || i > n || j < 1 || j > n)
                fail(errc::parse_error,
                     where + ": level index out of range 1.." + std::to_string(n));
            if (i == j && value != 0.0)
                fail(errc::nonzero_diagonal, where + ": diagonal coupling must be zero");
            const int a = i - 1, b = j - 1;
            if (seen(a, b) != 0.0 && couplings(a, b) != value) {
                fail(errc::asymmetric_coupling,
                     where + ": conflicts with an earlier entry for the same pair");
            }
            couplings(a, b) = couplings(b, a) = value;
            seen(a, b) = seen(b, a) = 1.0;
            ++idx;
        }
    }

    return validate_system(std::move(levels), std::move(couplings));
}

LevelSystem load_system(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open system file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str(), path);
}

std::string serialize_system(const LevelSystem& system, const std::string& units) {
    json doc;
    doc["units"] = units;
    doc["levels"] = json::array();
    for (const auto& lv : system.levels()) {
        // keep full precision by emitting omega as a parsed literal
        doc["levels"].push_back(
            {{"label", lv.label}, {"omega", json::parse(format_double(lv.omega))}});
    }
    doc["couplings"] = json::array();
    for (const auto& [i, j] : system.coupled_pairs()) {
        doc["couplings"].push_back(
            {{"i", i + 1},
             {"j", j + 1},
             {"value", json::parse(format_double(system.couplings()(i, j)))}});
    }
    return doc.dump(2) + "\n";
}

void save_system(const LevelSystem& system, const std::string& path,
                 const std::string& units) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot write system file '" + path + "'");
    out << serialize_system(system, units);
}

std::uint64_t system_hash(const LevelSystem& system) {
    const std::string canon = serialize_system(system);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string system_hash_hex(const LevelSystem& system) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(system_hash(system)));
    return buf;
}

int resolve_level(const LevelSystem& system, const std::string& token) {
    const int by_label = system.index_of(token);
    if (by_label >= 0) return by_label;
    bool digits = !token.empty() && token.size() <= 6;
    for (char c : token)
        if (!std::isdigit(static_cast<unsigned char>(c))) digits = false;
    if (digits) {
        const int pos = std::stoi(token);
        if (pos >= 1 && pos <= system.size()) return pos - 1;
    }
    fail(errc::level_out_of_range,
         "unknown level '" + token + "' (use a label or a 1-based position)");
}

} // namespace rabispec
