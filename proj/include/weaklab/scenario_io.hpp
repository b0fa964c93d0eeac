#pragma once

// JSON scenario files:
//   { "dimension": d,
//     "initial": ket (d pairs) or matrix,
//     "steps": [ { "observable": matrix, "sigma": s }, ... ],
//     "postselect": matrix or null }
// Complex entries are [re, im] pairs (a bare number is read as real).
// Matrices are either d rows of d entries or a flat row-major list of d*d
// entries. A list of d complex entries under "initial" is always a ket, so
// a 2x2 density matrix must use [re, im] entries or the flat form. Load
// errors name the offending field.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "weaklab/simulator.hpp"

namespace weaklab {

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scn);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scn, const std::filesystem::path& path);

}  // namespace weaklab
