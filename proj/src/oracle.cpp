#include "gsd/oracle.hpp"

#include <cmath>
#include <map>

namespace gsd {
namespace oracle {

GridNumeraireResult grid_numeraire(const ConvexSetSpec& set, int resolution) {
  set.validate();
  const std::size_t n_gen = set.generators.size();
  if (n_gen > 3) throw StructuralError("grid_numeraire: refuses more than three generators");
  if (resolution < 1) throw StructuralError("grid_numeraire: resolution must be positive");
  for (const auto& r : set.rays)
    if ((r > 0.0).any()) throw StructuralError("grid_numeraire: set has a nonzero ray");

  const VecD& p = set.space.probs;
  auto objective = [&](const VecD& f) {
    double acc = 0;
    for (Eigen::Index a = 0; a < f.size(); ++a) {
      if (f[a] <= 0.0) return -std::numeric_limits<double>::infinity();
      acc += p[a] * std::log(f[a]);
    }
    return acc;
  };

  GridNumeraireResult best;
  best.log_value = -std::numeric_limits<double>::infinity();
  const double step = 1.0 / resolution;

  auto consider = [&](double w0, double w1, double w2) {
    VecD f = w0 * set.generators[0];
    if (n_gen > 1) f += w1 * set.generators[1];
    if (n_gen > 2) f += w2 * set.generators[2];
    const double val = objective(f);
    if (val > best.log_value) {
      best.log_value = val;
      best.fhat = f;
      best.weights.resize(static_cast<Eigen::Index>(n_gen));
      best.weights[0] = w0;
      if (n_gen > 1) best.weights[1] = w1;
      if (n_gen > 2) best.weights[2] = w2;
    }
  };

  if (n_gen == 1) {
    consider(1.0, 0.0, 0.0);
  } else if (n_gen == 2) {
    for (int i = 0; i <= resolution; ++i) consider(i * step, 1.0 - i * step, 0.0);
  } else {
    for (int i = 0; i <= resolution; ++i)
      for (int j = 0; j + i <= resolution; ++j)
        consider(i * step, j * step, 1.0 - (i + j) * step);
  }
  return best;
}

namespace {

void enumerate_level(const MarketSpec& m, std::size_t upto, std::size_t cap, std::size_t k,
                     std::size_t cell, PureStrategy& partial, std::vector<int>& cur,
                     std::vector<PureStrategy>& out) {
  if (k >= upto) {  // decisions fixed through the horizon of interest
    if (out.size() >= cap)
      throw TooLargeError("enumerate_strategies: instance too large, cap " +
                          std::to_string(cap) + " reached");
    out.push_back(partial);
    return;
  }
  const Partition& part = m.filt.partitions[k];
  if (cell >= part.size()) {
    // apply this level's choices to the per-atom holdings, then descend
    std::vector<int> next = cur;
    for (std::size_t c = 0; c < part.size(); ++c) {
      const int g = partial.choices[k - 1][c];
      if (g == kHold) continue;
      for (Eigen::Index a : part[c]) next[static_cast<std::size_t>(a)] = g;
    }
    std::vector<int> saved = std::move(cur);
    cur = std::move(next);
    enumerate_level(m, upto, cap, k + 1, 0, partial, cur, out);
    cur = std::move(saved);
    return;
  }
  const int holding = cur[static_cast<std::size_t>(part[cell].front())];
  // a strictly positive holding makes an explicit hold redundant
  if (!m.is_sp(holding)) {
    partial.choices[k - 1][cell] = kHold;
    enumerate_level(m, upto, cap, k, cell + 1, partial, cur, out);
  }
  for (int g : m.strictly_positive) {
    partial.choices[k - 1][cell] = g;
    enumerate_level(m, upto, cap, k, cell + 1, partial, cur, out);
  }
}

}  // namespace

std::vector<PureStrategy> enumerate_strategies(const MarketSpec& m, std::size_t upto,
                                               std::size_t cap) {
  if (upto >= m.n_times()) throw StructuralError("enumerate_strategies: horizon off the grid");
  const std::size_t K = m.n_times();

  std::vector<PureStrategy> out;
  for (std::size_t base = 0; base < m.generators.size(); ++base) {
    PureStrategy partial;
    partial.base = static_cast<int>(base);
    partial.choices.assign(K - 2, {});
    for (std::size_t k = 1; k + 1 < K; ++k)
      partial.choices[k - 1].assign(m.filt.partitions[k].size(), kHold);
    std::vector<int> cur(static_cast<std::size_t>(m.space.size()), partial.base);
    enumerate_level(m, std::max<std::size_t>(upto, 1), cap, 1, 0, partial, cur, out);
  }
  return out;
}

Filtration natural_filtration(const std::vector<MatD>& processes, const TimeGrid& grid) {
  if (processes.empty()) throw StructuralError("natural_filtration: no processes");
  const Eigen::Index n_atoms = processes.front().rows();
  for (const auto& X : processes)
    if (X.rows() != n_atoms || static_cast<std::size_t>(X.cols()) != grid.size())
      throw StructuralError("natural_filtration: shape mismatch");

  Filtration filt;
  filt.grid = grid;
  Partition current{std::vector<Eigen::Index>(static_cast<std::size_t>(n_atoms))};
  for (Eigen::Index a = 0; a < n_atoms; ++a) current[0][static_cast<std::size_t>(a)] = a;

  for (std::size_t k = 0; k < grid.size(); ++k) {
    // split every cell by the joint level sets of all slices at time k
    Partition refined;
    for (const auto& cell : current) {
      std::map<std::vector<double>, std::vector<Eigen::Index>> groups;
      for (Eigen::Index a : cell) {
        std::vector<double> key;
        for (const auto& X : processes) key.push_back(X(a, static_cast<Eigen::Index>(k)));
        groups[key].push_back(a);
      }
      for (auto& [key, atoms] : groups) refined.push_back(std::move(atoms));
    }
    current = std::move(refined);
    filt.partitions.push_back(current);
  }
  filt.validate(n_atoms);
  return filt;
}

bool classical_supermartingale_check(const MatD& Z, const Filtration& filt,
                                     const ProbSpace& space, double tol) {
  const std::size_t K = filt.grid.size();
  if (static_cast<std::size_t>(Z.cols()) != K || Z.rows() != space.size())
    throw StructuralError("classical check: shape mismatch");
  for (std::size_t s = 0; s < K; ++s) {
    const Partition& part = filt.partitions[s];
    for (std::size_t t = s; t < K; ++t) {
      for (const auto& cell : part) {
        double mass = 0, acc = 0;
        for (Eigen::Index a : cell) {
          mass += space.probs[a];
          acc += space.probs[a] * Z(a, static_cast<Eigen::Index>(t));
        }
        const double z_s = Z(cell.front(), static_cast<Eigen::Index>(s));
        if (acc / mass > z_s * (1.0 + tol)) return false;
      }
    }
  }
  return true;
}

}  // namespace oracle
}  // namespace gsd
