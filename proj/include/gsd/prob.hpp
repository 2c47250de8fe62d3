#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gsd/types.hpp"

namespace gsd {

// Atoms with strictly positive probabilities summing to one.
template <class Scalar>
struct FiniteProbSpace {
  std::vector<std::string> atoms;
  Vec<Scalar> probs;

  FiniteProbSpace() = default;
  FiniteProbSpace(std::vector<std::string> labels, Vec<Scalar> p)
      : atoms(std::move(labels)), probs(std::move(p)) {
    validate();
  }

  Eigen::Index size() const { return probs.size(); }

  void validate() const {
    if (atoms.empty() || static_cast<Eigen::Index>(atoms.size()) != probs.size())
      throw StructuralError("probability space: atom/probability count mismatch");
    std::set<std::string> seen(atoms.begin(), atoms.end());
    if (seen.size() != atoms.size())
      throw StructuralError("probability space: duplicate atom labels");
    Scalar total(0);
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
      if (!(probs[i] > Scalar(0)))
        throw StructuralError("probability space: atom '" + atoms[i] +
                              "' has non-positive probability");
      total += probs[i];
    }
    if constexpr (std::is_floating_point_v<Scalar>) {
      if (std::abs(total - 1.0) > 1e-12)
        throw StructuralError("probability space: probabilities do not sum to 1");
    } else {
      if (total != Scalar(1))
        throw StructuralError("probability space: probabilities do not sum to 1 exactly");
    }
  }
};

using ProbSpace = FiniteProbSpace<double>;
using ProbSpaceQ = FiniteProbSpace<Rational>;

inline ProbSpace to_double(const ProbSpaceQ& sq) {
  ProbSpace s;
  s.atoms = sq.atoms;
  s.probs = to_double(sq.probs);
  // renormalization is unnecessary: an exact rational pmf converts within 1e-12
  return s;
}

// Strictly increasing finite grid, first point 0.
struct TimeGrid {
  std::vector<double> times;

  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> t) : times(std::move(t)) { validate(); }

  std::size_t size() const { return times.size(); }

  void validate() const {
    if (times.size() < 2) throw StructuralError("time grid: need at least two points");
    if (times.front() != 0.0) throw StructuralError("time grid: must start at 0");
    for (std::size_t k = 1; k < times.size(); ++k)
      if (!(times[k] > times[k - 1]))
        throw StructuralError("time grid: times must be strictly increasing");
  }
};

// A partition of {0,...,n-1} into disjoint covering cells of atom indices.
using Partition = std::vector<std::vector<Eigen::Index>>;

inline void validate_partition(const Partition& part, Eigen::Index n_atoms) {
  std::vector<char> hit(static_cast<std::size_t>(n_atoms), 0);
  for (const auto& cell : part) {
    if (cell.empty()) throw StructuralError("partition: empty cell");
    for (Eigen::Index a : cell) {
      if (a < 0 || a >= n_atoms) throw StructuralError("partition: atom index out of range");
      if (hit[static_cast<std::size_t>(a)]) throw StructuralError("partition: cells overlap");
      hit[static_cast<std::size_t>(a)] = 1;
    }
  }
  for (char h : hit)
    if (!h) throw StructuralError("partition: does not cover all atoms");
}

// True iff every cell of `fine` sits inside one cell of `coarse`.
inline bool refines(const Partition& fine, const Partition& coarse, Eigen::Index n_atoms) {
  std::vector<int> owner(static_cast<std::size_t>(n_atoms), -1);
  for (std::size_t c = 0; c < coarse.size(); ++c)
    for (Eigen::Index a : coarse[c]) owner[static_cast<std::size_t>(a)] = static_cast<int>(c);
  for (const auto& cell : fine) {
    int o = owner[static_cast<std::size_t>(cell.front())];
    for (Eigen::Index a : cell)
      if (owner[static_cast<std::size_t>(a)] != o) return false;
  }
  return true;
}

// One partition per grid time, trivial at t0 and refining over time.
struct Filtration {
  TimeGrid grid;
  std::vector<Partition> partitions;

  Filtration() = default;
  Filtration(TimeGrid g, std::vector<Partition> parts, Eigen::Index n_atoms)
      : grid(std::move(g)), partitions(std::move(parts)) {
    validate(n_atoms);
  }

  void validate(Eigen::Index n_atoms) const {
    if (partitions.size() != grid.size())
      throw StructuralError("filtration: one partition per grid time required");
    for (const auto& p : partitions) validate_partition(p, n_atoms);
    if (partitions.front().size() != 1)
      throw StructuralError("filtration: partition at t0 must be trivial");
    for (std::size_t k = 1; k < partitions.size(); ++k)
      if (!refines(partitions[k], partitions[k - 1], n_atoms))
        throw StructuralError("filtration: partitions must refine over time");
  }
};

template <class Scalar>
Scalar expectation(const Vec<Scalar>& rv, const FiniteProbSpace<Scalar>& space) {
  if (rv.size() != space.size()) throw StructuralError("expectation: size mismatch");
  return (rv * space.probs).sum();
}

// E[rv | partition]: constant on each cell. In double mode an infinite value
// on any atom of a cell makes the whole cell infinite.
template <class Scalar>
Vec<Scalar> cond_exp(const Vec<Scalar>& rv, const Partition& part,
                     const FiniteProbSpace<Scalar>& space) {
  if (rv.size() != space.size()) throw StructuralError("cond_exp: size mismatch");
  validate_partition(part, space.size());
  for (Eigen::Index i = 0; i < rv.size(); ++i)
    if (rv[i] < Scalar(0)) throw DomainError("cond_exp: negative value");
  Vec<Scalar> out(rv.size());
  for (const auto& cell : part) {
    Scalar mass(0), acc(0);
    bool inf = false;
    for (Eigen::Index a : cell) {
      mass += space.probs[a];
      if constexpr (std::is_floating_point_v<Scalar>) {
        if (std::isinf(rv[a])) inf = true;
      }
      if (!inf) acc += space.probs[a] * rv[a];
    }
    Scalar value;
    if constexpr (std::is_floating_point_v<Scalar>) {
      value = inf ? std::numeric_limits<Scalar>::infinity() : acc / mass;
    } else {
      value = acc / mass;
    }
    for (Eigen::Index a : cell) out[a] = value;
  }
  return out;
}

// Pointwise num/den with 0/0 = 1 and positive/0 = infinity.
inline VecD ratio_conventional(const VecD& num, const VecD& den) {
  if (num.size() != den.size()) throw StructuralError("ratio: size mismatch");
  VecD out(num.size());
  for (Eigen::Index i = 0; i < num.size(); ++i) {
    if (num[i] < 0 || den[i] < 0) throw DomainError("ratio: negative value");
    if (std::isinf(den[i])) throw DomainError("ratio: infinite denominator");
    if (den[i] == 0.0)
      out[i] = (num[i] == 0.0) ? 1.0 : std::numeric_limits<double>::infinity();
    else
      out[i] = num[i] / den[i];
  }
  return out;
}

// Exact-mode ratio; positive/0 has no rational representation.
inline VecQ ratio_conventional(const VecQ& num, const VecQ& den) {
  if (num.size() != den.size()) throw StructuralError("ratio: size mismatch");
  VecQ out(num.size());
  for (Eigen::Index i = 0; i < num.size(); ++i) {
    if (num[i] < 0 || den[i] < 0) throw DomainError("ratio: negative value");
    if (den[i] == 0) {
      if (num[i] == 0)
        out[i] = 1;
      else
        throw DomainError("ratio: infinite value not representable in exact mode");
    } else {
      out[i] = num[i] / den[i];
    }
  }
  return out;
}

// E[min(|f-g|, 1)], metrizing convergence in probability.
template <class Scalar>
Scalar ky_fan_distance(const Vec<Scalar>& f, const Vec<Scalar>& g,
                       const FiniteProbSpace<Scalar>& space) {
  if (f.size() != g.size() || f.size() != space.size())
    throw StructuralError("ky_fan_distance: size mismatch");
  Scalar acc(0);
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if constexpr (std::is_floating_point_v<Scalar>) {
      if (std::isinf(f[i]) || std::isinf(g[i]))
        throw DomainError("ky_fan_distance: infinite value");
    }
    Scalar d = f[i] > g[i] ? f[i] - g[i] : g[i] - f[i];
    acc += space.probs[i] * (d < Scalar(1) ? d : Scalar(1));
  }
  return acc;
}

struct AdaptednessReport {
  bool adapted = true;
  // first violation, when not adapted
  std::size_t time = 0;
  std::size_t cell = 0;
};

// A process is adapted iff each time-slice is constant on each cell.
template <class Scalar>
AdaptednessReport is_adapted(const Mat<Scalar>& proc, const Filtration& filt) {
  if (static_cast<std::size_t>(proc.cols()) != filt.grid.size())
    throw StructuralError("is_adapted: process/grid size mismatch");
  for (std::size_t k = 0; k < filt.partitions.size(); ++k) {
    const Partition& part = filt.partitions[k];
    for (std::size_t c = 0; c < part.size(); ++c) {
      const auto& cell = part[c];
      for (Eigen::Index a : cell)
        if (proc(a, static_cast<Eigen::Index>(k)) !=
            proc(cell.front(), static_cast<Eigen::Index>(k)))
          return {false, k, c};
    }
  }
  return {};
}

}  // namespace gsd
