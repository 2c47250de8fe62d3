#include "gsd/types.hpp"

namespace gsd {

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos)
      return Rational(boost::multiprecision::cpp_int(s));
    const boost::multiprecision::cpp_int num(s.substr(0, slash));
    const boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw StructuralError("rational: zero denominator in '" + s + "'");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw StructuralError("rational: cannot parse '" + s + "'");
  }
}

}  // namespace gsd
