#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>

#include <string>

#include "gsd/errors.hpp"

namespace gsd {

using Rational = boost::multiprecision::cpp_rational;

template <class Scalar>
using Vec = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

// A process stores one column per grid time, one row per atom.
template <class Scalar>
using Mat = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VecD = Vec<double>;
using VecQ = Vec<Rational>;
using MatD = Mat<double>;
using MatQ = Mat<Rational>;

// Parses "p/q" or a plain integer string into an exact rational.
Rational parse_rational(const std::string& s);

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline VecD to_double(const VecQ& v) {
  VecD out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

}  // namespace gsd
