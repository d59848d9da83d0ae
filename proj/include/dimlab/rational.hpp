#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dimlab {

// expression templates off: operators return value types, so std::min/max
// and brace initialization behave normally
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::backends::rational_adaptor<
                                      boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

// Largest integer <= r.
inline BigInt floor_big(const Rational& r) {
  BigInt q = num(r) / den(r);
  if (num(r) < 0 && q * den(r) != num(r)) --q;
  return q;
}

inline BigInt ceil_big(const Rational& r) { return -floor_big(-r); }

inline Rational abs_rat(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline int64_t to_int64(const BigInt& b) {
  if (b > std::numeric_limits<int64_t>::max() || b < std::numeric_limits<int64_t>::min())
    throw std::overflow_error("value does not fit in 64 bits: " + b.str());
  return static_cast<int64_t>(b);
}

// Canonical "p" / "p/q" form used in every file format.
inline std::string to_string(const Rational& r) {
  if (den(r) == 1) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt p(s.substr(0, slash));
    BigInt q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator");
    return Rational(p, q);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace dimlab
