#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fano_balance/error.hpp"
#include "fano_balance/rational.hpp"

namespace fano {

/// Univariate polynomial with exact rational coefficients, indexed by degree.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coefficients)
      : coefficients_(std::move(coefficients)) {
    trim();
  }

  /// Coefficient of x^i; zero beyond the stored range.
  Rational coefficient(std::size_t i) const {
    return i < coefficients_.size() ? coefficients_[i] : Rational(0);
  }
  const std::vector<Rational>& coefficients() const { return coefficients_; }

  bool is_zero() const { return coefficients_.empty(); }

  /// Degree, -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  std::string to_string(const std::string& var = "m") const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      const Rational& c = coefficients_[i];
      if (c == 0) continue;
      if (!out.empty()) out += c < 0 ? " - " : " + ";
      else if (c < 0) out += "-";
      Rational a = c < 0 ? Rational(-c) : c;
      bool unit = a == 1 && i > 0;
      if (!unit) out += fano::to_string(a);
      if (i > 0) {
        if (!unit) out += "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

 private:
  void trim() {
    while (!coefficients_.empty() && coefficients_.back() == 0) coefficients_.pop_back();
  }

  std::vector<Rational> coefficients_;
};

struct Sample {
  std::int64_t m = 0;
  Rational value;
};

/// Exact interpolation of degree `degree` through the first degree+1 samples;
/// every surplus sample must be reproduced exactly. At least one surplus
/// sample is required.
inline RationalPolynomial fit_polynomial(const std::vector<Sample>& samples, int degree) {
  if (degree < 0) throw InvalidInput("negative degree");
  const std::size_t need = static_cast<std::size_t>(degree) + 2;
  if (samples.size() < need)
    throw InvalidInput("fit_polynomial needs at least degree+2 samples");
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j)
      if (samples[i].m == samples[j].m) throw InvalidInput("duplicate sample abscissa");

  // Newton divided differences on the first degree+1 points.
  const std::size_t n = static_cast<std::size_t>(degree) + 1;
  std::vector<Rational> xs(n), dd(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = Rational(samples[i].m);
    dd[i] = samples[i].value;
  }
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);

  // Expand the Newton form into monomial coefficients.
  std::vector<Rational> coeff(n, Rational(0));
  for (std::size_t i = n; i-- > 0;) {
    // coeff <- coeff * (x - xs[i]) + dd[i]
    std::vector<Rational> next(n, Rational(0));
    for (std::size_t j = 0; j + 1 < n; ++j) {
      next[j + 1] += coeff[j];
      next[j] -= coeff[j] * xs[i];
    }
    next[0] += dd[i];
    coeff = std::move(next);
  }
  RationalPolynomial poly(std::move(coeff));

  for (std::size_t i = n; i < samples.size(); ++i) {
    Rational predicted = poly(Rational(samples[i].m));
    if (predicted != samples[i].value) {
      throw InconsistentSamples("degree-" + std::to_string(degree) + " fit predicts " +
                                fano::to_string(predicted) + " at m=" +
                                std::to_string(samples[i].m) + " but sample is " +
                                fano::to_string(samples[i].value));
    }
  }
  return poly;
}

}  // namespace fano
