#pragma once

#include <string>

#include <json.hpp>

#include "gsd/types.hpp"

namespace gsd {

// Rounds to 12 significant digits so serialized reports are byte-stable
// across runs and platforms.
double round_sig(double x);

nlohmann::json to_json(const VecD& v);
nlohmann::json to_json(const MatD& m);  // array of time slices

// Recursively rounds every number in-place, then dumps with sorted keys,
// two-space indent and a trailing newline.
std::string dump_report(nlohmann::json j);

// Renders a flat {key: scalar-or-string} object as an aligned two-column table.
std::string dump_table(const nlohmann::json& j);

}  // namespace gsd
