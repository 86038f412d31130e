#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>

#include "fano_balance/error.hpp"

namespace fano {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw InvalidInput("zero denominator");
  return Rational(Integer(num), Integer(den));
}

/// Parses "p", "p/q" or "-p/q".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.erase(v.begin());
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
  };
  trim(s);
  if (s.empty()) throw InvalidInput("empty rational");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    trim(num);
    trim(den);
    Integer d(den);
    if (d == 0) throw InvalidInput("zero denominator in '" + s + "'");
    return Rational(Integer(num), d);
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse rational '" + s + "'");
  }
}

/// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rational& r) {
  const Integer& n = boost::multiprecision::numerator(r);
  const Integer& d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  Integer g = boost::multiprecision::gcd(a, b);
  Integer r = a / g * b;
  return r < 0 ? Integer(-r) : r;
}

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace fano
