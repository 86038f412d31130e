#pragma once

// Exact algebro-geometric invariants of a toric test configuration: the
// dimension/weight expansions and everything derived from them.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fano_balance/error.hpp"
#include "fano_balance/lattice.hpp"
#include "fano_balance/polynomial.hpp"
#include "fano_balance/rational.hpp"
#include "fano_balance/testconfig.hpp"

namespace fano {

/// Coefficients of N_km = sum a_i (km)^(n-i) and w_km = sum b_i (km)^(n+1-i).
struct ExpansionCoeffs {
  std::int64_t k = 1;
  std::vector<Rational> a;  // a_0 .. a_n
  std::vector<Rational> b;  // b_0 .. b_{n+1}
};

struct FitWindow {
  std::int64_t start = 1;  // first sampled m
  int surplus = 1;         // samples beyond degree+1
};

namespace detail {

// Fits a polynomial in m of the given degree and rewrites it in powers of km:
// result[i] is the coefficient of (km)^(degree - i).
template <class F>
std::vector<Rational> fit_in_km(F&& value_at, int degree, std::int64_t k, const FitWindow& win) {
  std::vector<Sample> samples;
  for (int i = 0; i < degree + 1 + win.surplus; ++i) {
    std::int64_t m = win.start + i;
    samples.push_back({m, value_at(m)});
  }
  RationalPolynomial poly = fit_polynomial(samples, degree);
  std::vector<Rational> out(degree + 1);
  Rational kpow = 1;
  for (int j = 0; j <= degree; ++j) {
    // coefficient of m^j equals c_(degree-j) * k^j
    out[degree - j] = poly.coefficient(j) / kpow;
    kpow *= k;
  }
  return out;
}

}  // namespace detail

inline ExpansionCoeffs expansion(const ToricTestConfig& tc, const FitWindow& win = {}) {
  const int n = tc.polytope().dim();
  const std::int64_t k = tc.k();
  ExpansionCoeffs e;
  e.k = k;
  e.a = detail::fit_in_km(
      [&](std::int64_t m) { return Rational(ehrhart_count(tc.polytope(), k * m)); }, n, k, win);
  e.b = detail::fit_in_km([&](std::int64_t m) { return total_weight(tc, m); }, n + 1, k, win);
  return e;
}

inline Rational donaldson_futaki(const ExpansionCoeffs& e) {
  return 2 * (e.a[1] * e.b[0] - e.a[0] * e.b[1]) / (e.a[0] * e.a[0]);
}

inline Rational donaldson_futaki(const ToricTestConfig& tc, const FitWindow& win = {}) {
  return donaldson_futaki(expansion(tc, win));
}

/// Chow_k = b_0/a_0 - w_k/(k N_k), with w_k and N_k at level one.
inline Rational chow_weight(const ToricTestConfig& tc, const ExpansionCoeffs& e) {
  WeightSystem ws = weights_at_level(tc, 1);
  Rational nk = static_cast<long long>(ws.basis.size());
  return e.b[0] / e.a[0] - ws.total() / (Rational(tc.k()) * nk);
}

inline Rational chow_weight(const ToricTestConfig& tc, const FitWindow& win = {}) {
  return chow_weight(tc, expansion(tc, win));
}

/// Fut_k = k N_k (DF + Chow_k).
inline Rational quantized_futaki(const ToricTestConfig& tc, const ExpansionCoeffs& e) {
  Rational nk = ehrhart_count(tc.polytope(), tc.k());
  return Rational(tc.k()) * nk * (donaldson_futaki(e) + chow_weight(tc, e));
}

inline Rational quantized_futaki(const ToricTestConfig& tc, const FitWindow& win = {}) {
  return quantized_futaki(tc, expansion(tc, win));
}

/// km * Chow_km of the rescaled configuration, for m = 1..m_max.
inline std::vector<Rational> chow_df_limit(const ToricTestConfig& tc, std::int64_t m_max,
                                           const FitWindow& win = {}) {
  if (m_max < 2) throw InvalidInput("chow_df_limit needs m_max >= 2");
  ExpansionCoeffs e = expansion(tc, win);
  Rational ratio = e.b[0] / e.a[0];
  std::vector<Rational> out;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    WeightSystem ws = weights_at_level(tc, m);
    Rational km = tc.k() * m;
    Rational n = static_cast<long long>(ws.basis.size());
    out.push_back(km * ratio - ws.total() / n);
  }
  return out;
}

struct PNorm {
  int p = 2;
  Rational leading;  // ||.||_p^p
  double value = 0;  // ||.||_p
};

/// p-norm of the configuration from the leading asymptotics of tr(Abar_km^p).
/// Each power sum S_j(m) = sum w^j is fitted exactly and the centred moment
/// is assembled from their leading coefficients.
inline PNorm pnorm(const ToricTestConfig& tc, int p, const FitWindow& win = {}) {
  if (p < 2 || p % 2 != 0) throw InvalidInput("p must be a positive even integer");
  const int n = tc.polytope().dim();
  const std::int64_t k = tc.k();
  std::vector<Rational> lead(p + 1);
  for (int j = 0; j <= p; ++j) {
    auto sum_pow = [&](std::int64_t m) {
      Rational s = 0;
      for (const auto& w : weights_at_level(tc, m).weights) s += pow(w, j);
      return s;
    };
    lead[j] = detail::fit_in_km(sum_pow, n + j, k, win).front();
  }
  Rational mean = lead[1] / lead[0];
  Rational total = 0;
  Integer binom = 1;
  for (int j = 0; j <= p; ++j) {
    total += Rational(binom) * lead[j] * pow(Rational(-mean), p - j);
    binom = binom * (p - j) / (j + 1);
  }
  if (total == 0) throw DegenerateNorm("leading coefficient of tr(A^" + std::to_string(p) + ") is zero");
  PNorm out;
  out.p = p;
  out.leading = total;
  out.value = std::pow(to_double(total), 1.0 / p);
  return out;
}

/// Exact tr(Abar_km^p) at a single level, used to check the asymptotics.
inline Rational trace_free_power_trace(const ToricTestConfig& tc, std::int64_t m, int p) {
  WeightSystem ws = weights_at_level(tc, m);
  Rational mean = ws.total() / static_cast<long long>(ws.weights.size());
  Rational s = 0;
  for (const auto& w : ws.weights) s += pow(w - mean, p);
  return s;
}

/// F_p = (n+1-p)! (a_0 b_p - a_p b_0)/a_0 for p = 1..n.
inline std::vector<Rational> higher_futaki(const ToricTestConfig& tc, const FitWindow& win = {}) {
  if (!tc.is_product()) throw NotProduct("higher Futaki invariants need a single affine piece");
  ExpansionCoeffs e = expansion(tc, win);
  const int n = tc.polytope().dim();
  std::vector<Rational> out;
  for (int p = 1; p <= n; ++p)
    out.push_back(Rational(factorial(n + 1 - p)) * (e.a[0] * e.b[p] - e.a[p] * e.b[0]) / e.a[0]);
  return out;
}

struct InvariantReport {
  ExpansionCoeffs expansion;
  Rational df;
  Rational chow;
  Rational fut;
  std::int64_t nk = 0;
  bool is_product = false;
  bool is_trivial = false;
  std::vector<Rational> higher_futaki;  // product configurations only
  std::optional<PNorm> pnorm;           // empty when degenerate
  std::vector<Rational> chow_sequence;  // km Chow_km, m = 1..m_max
};

inline InvariantReport invariant_report(const ToricTestConfig& tc, int p = 2,
                                        std::int64_t m_max = 12, const FitWindow& win = {}) {
  InvariantReport r;
  r.expansion = expansion(tc, win);
  r.df = donaldson_futaki(r.expansion);
  r.chow = chow_weight(tc, r.expansion);
  r.nk = ehrhart_count(tc.polytope(), tc.k());
  r.fut = Rational(tc.k()) * r.nk * (r.df + r.chow);
  r.is_product = tc.is_product();
  r.is_trivial = tc.is_trivial();
  if (r.is_product) r.higher_futaki = higher_futaki(tc, win);
  try {
    r.pnorm = pnorm(tc, p, win);
  } catch (const DegenerateNorm&) {
    r.pnorm.reset();
  }
  if (m_max >= 2) r.chow_sequence = chow_df_limit(tc, m_max, win);
  return r;
}

}  // namespace fano
