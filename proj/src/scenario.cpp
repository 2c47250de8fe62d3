#include "gsd/scenario.hpp"

#include <algorithm>
#include <fstream>

namespace gsd {

namespace {

using nlohmann::json;

Eigen::Index atom_index(const Scenario& sc, const std::string& label) {
  for (std::size_t i = 0; i < sc.space.atoms.size(); ++i)
    if (sc.space.atoms[i] == label) return static_cast<Eigen::Index>(i);
  throw StructuralError("scenario: unknown atom label '" + label + "'");
}

VecD parse_vector(const Scenario& sc, const json& j) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(sc.space.size()))
    throw StructuralError("scenario: expected one number per atom");
  VecD v(sc.space.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

// a set generator entry: either a per-atom vector literal or the name of a
// process, whose last time slice is taken
VecD parse_set_entry(const Scenario& sc, const json& j) {
  if (j.is_string()) {
    const auto it = sc.processes.find(j.get<std::string>());
    if (it == sc.processes.end())
      throw StructuralError("scenario: set references unknown process '" +
                            j.get<std::string>() + "'");
    return it->second.col(it->second.cols() - 1);
  }
  return parse_vector(sc, j);
}

}  // namespace

Scenario parse_scenario(const json& j) {
  Scenario sc;
  try {
    if (!j.contains("space") || !j["space"].contains("atoms"))
      throw StructuralError("scenario: missing space.atoms");

    const auto& atoms = j["space"]["atoms"];
    sc.space.probs.resize(static_cast<Eigen::Index>(atoms.size()));
    VecQ exact(static_cast<Eigen::Index>(atoms.size()));
    bool all_exact = true;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      sc.space.atoms.push_back(atoms[i].at("label").get<std::string>());
      const auto& p = atoms[i].at("prob");
      if (p.is_string()) {
        exact[static_cast<Eigen::Index>(i)] = parse_rational(p.get<std::string>());
        sc.space.probs[static_cast<Eigen::Index>(i)] =
            to_double(exact[static_cast<Eigen::Index>(i)]);
      } else {
        all_exact = false;
        sc.space.probs[static_cast<Eigen::Index>(i)] = p.get<double>();
      }
    }
    sc.space.validate();
    if (all_exact) {
      sc.space_exact = ProbSpaceQ(sc.space.atoms, exact);
    }

    sc.grid = TimeGrid(j.at("grid").get<std::vector<double>>());

    std::vector<Partition> parts;
    for (const auto& jp : j.at("filtration")) {
      Partition part;
      for (const auto& jc : jp) {
        std::vector<Eigen::Index> cell;
        for (const auto& label : jc) cell.push_back(atom_index(sc, label.get<std::string>()));
        part.push_back(std::move(cell));
      }
      parts.push_back(std::move(part));
    }
    sc.filt = Filtration(sc.grid, std::move(parts), sc.space.size());

    if (j.contains("processes")) {
      for (const auto& [name, jp] : j["processes"].items()) {
        if (!jp.is_array() || jp.size() != sc.grid.size())
          throw StructuralError("scenario: process '" + name + "' needs one slice per grid time");
        MatD X(sc.space.size(), static_cast<Eigen::Index>(sc.grid.size()));
        for (std::size_t t = 0; t < jp.size(); ++t)
          X.col(static_cast<Eigen::Index>(t)) = parse_vector(sc, jp[t]);
        sc.processes.emplace(name, std::move(X));
      }
    }

    if (j.contains("sets")) {
      for (const auto& [name, js] : j["sets"].items()) {
        ConvexSetSpec set;
        set.space = sc.space;
        for (const auto& jg : js.at("generators")) set.generators.push_back(parse_set_entry(sc, jg));
        if (js.contains("rays"))
          for (const auto& jr : js["rays"]) set.rays.push_back(parse_set_entry(sc, jr));
        set.solid = js.value("solid", false);
        set.validate();
        sc.sets.emplace(name, std::move(set));
      }
    }

    if (j.contains("market")) {
      MarketSpec m;
      m.space = sc.space;
      m.grid = sc.grid;
      m.filt = sc.filt;
      for (const auto& jn : j["market"].at("generators")) {
        const std::string name = jn.get<std::string>();
        const auto it = sc.processes.find(name);
        if (it == sc.processes.end())
          throw StructuralError("scenario: market references unknown process '" + name + "'");
        m.names.push_back(name);
        m.generators.push_back(it->second);
      }
      if (j["market"].contains("strictly_positive")) {
        for (const auto& jn : j["market"]["strictly_positive"]) {
          const std::string name = jn.get<std::string>();
          const auto it = std::find(m.names.begin(), m.names.end(), name);
          if (it == m.names.end())
            throw StructuralError("scenario: strictly_positive lists unknown generator '" +
                                  name + "'");
          m.strictly_positive.push_back(static_cast<int>(it - m.names.begin()));
        }
      }
      sc.market = std::move(m);
    }
  } catch (const json::exception& e) {
    throw StructuralError(std::string("scenario: malformed JSON structure: ") + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("scenario: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("scenario: parse error: ") + e.what());
  }
  return parse_scenario(j);
}

}  // namespace gsd
