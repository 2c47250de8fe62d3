#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "gsd/market.hpp"

namespace gsd {

// Deserialized scenario file. Probabilities written as "p/q" strings are
// additionally kept as exact rationals in `space_exact`.
struct Scenario {
  ProbSpace space;
  std::optional<ProbSpaceQ> space_exact;
  TimeGrid grid;
  Filtration filt;
  std::map<std::string, MatD> processes;
  std::map<std::string, ConvexSetSpec> sets;
  std::optional<MarketSpec> market;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

}  // namespace gsd
