#pragma once

#include <cstdint>
#include <string>

#include "rabispec/core.hpp"

namespace rabispec {

// System files are JSON documents:
//
//   {
//     "units": "atomic",
//     "levels":    [{"label": "1", "omega": 0.0}, {"label": "2", "omega": 1.0}],
//     "couplings": [{"i": 1, "j": 2, "value": 1.0}]
//   }
//
// Coupling entries use 1-based level positions; each unordered pair is
// stored once (a mirrored entry is accepted only when the value agrees
// exactly).  "units" is informational.
LevelSystem load_system(const std::string& path);
LevelSystem parse_system(const std::string& json_text, const std::string& origin = "<string>");

// Canonical serialization (levels in order, upper-triangle couplings,
// 17 significant digits); parse_system(serialize_system(s)) reproduces s
// exactly.
std::string serialize_system(const LevelSystem& system, const std::string& units = "atomic");
void save_system(const LevelSystem& system, const std::string& path,
                 const std::string& units = "atomic");

// FNV-1a over the canonical serialization; identifies the system in
// metadata sidecars.  Not cryptographic.
std::uint64_t system_hash(const LevelSystem& system);
std::string system_hash_hex(const LevelSystem& system);

// Fixed-point-free formatting used by every writer: 17 significant digits,
// enough for binary64 round trips.
std::string format_double(double x);
int resolve_level(const LevelSystem& system, const std::string& token);

} // namespace rabispec
