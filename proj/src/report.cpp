#include "gsd/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace gsd {

double round_sig(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

nlohmann::json to_json(const VecD& v) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

nlohmann::json to_json(const MatD& m) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index t = 0; t < m.cols(); ++t) arr.push_back(to_json(VecD(m.col(t))));
  return arr;
}

namespace {

void round_in_place(nlohmann::json& j) {
  if (j.is_number_float()) {
    j = round_sig(j.get<double>());
  } else if (j.is_array() || j.is_object()) {
    for (auto& child : j) round_in_place(child);
  }
}

}  // namespace

std::string dump_report(nlohmann::json j) {
  round_in_place(j);
  // nlohmann objects iterate in key order, so dumping is deterministic
  return j.dump(2) + "\n";
}

std::string dump_table(const nlohmann::json& j) {
  std::size_t width = 0;
  for (auto it = j.begin(); it != j.end(); ++it) width = std::max(width, it.key().size());
  std::ostringstream out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string value;
    if (it->is_string())
      value = it->get<std::string>();
    else if (it->is_number_float())
      value = nlohmann::json(round_sig(it->get<double>())).dump();
    else
      value = it->dump();
    out << it.key() << std::string(width - it.key().size() + 2, ' ') << value << "\n";
  }
  return out.str();
}

}  // namespace gsd
