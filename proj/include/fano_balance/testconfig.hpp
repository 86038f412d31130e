#pragma once

// Toric test configurations of a fixed exponent, encoded by a piecewise-linear
// convex function on the moment polytope, and the diagonal weight systems they
// induce on sections.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fano_balance/error.hpp"
#include "fano_balance/lattice.hpp"
#include "fano_balance/rational.hpp"

namespace fano {

/// Affine function y -> <linear, y> + constant. Unused components are zero.
struct AffinePiece {
  std::array<Rational, 2> linear{};
  Rational constant;

  Rational operator()(const std::array<Rational, 2>& y) const {
    return linear[0] * y[0] + linear[1] * y[1] + constant;
  }
  /// Value at a lattice point of m*P after scaling by m: m * piece(beta / m).
  Rational homogeneous(const LatticePoint& beta, std::int64_t m) const {
    return linear[0] * beta[0] + linear[1] * beta[1] + constant * m;
  }

  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

namespace detail {

using RPoint = std::array<Rational, 2>;

// Clips a convex polygon (counter-clockwise) by {y : f(y) >= 0}.
inline std::vector<RPoint> clip(const std::vector<RPoint>& poly, const AffinePiece& f) {
  std::vector<RPoint> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const RPoint& a = poly[i];
    const RPoint& b = poly[(i + 1) % n];
    Rational fa = f(a);
    Rational fb = f(b);
    if (fa >= 0) out.push_back(a);
    if ((fa > 0 && fb < 0) || (fa < 0 && fb > 0)) {
      Rational s = fa / (fa - fb);
      out.push_back({a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])});
    }
  }
  return out;
}

inline Rational polygon_area(const std::vector<RPoint>& poly) {
  if (poly.size() < 3) return 0;
  Rational twice = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const RPoint& a = poly[i];
    const RPoint& b = poly[(i + 1) % poly.size()];
    twice += a[0] * b[1] - a[1] * b[0];
  }
  return twice / 2;
}

}  // namespace detail

/// g(y) = max over pieces of an affine function. Convex by construction.
class PLConvexFunction {
 public:
  PLConvexFunction() : pieces_{AffinePiece{}} {}
  explicit PLConvexFunction(std::vector<AffinePiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw InvalidInput("PL function needs at least one piece");
  }

  static PLConvexFunction linear(Rational a, Rational b = 0, Rational c = 0) {
    return PLConvexFunction({AffinePiece{{a, b}, c}});
  }

  const std::vector<AffinePiece>& pieces() const { return pieces_; }

  Rational operator()(const std::array<Rational, 2>& y) const {
    Rational best = pieces_.front()(y);
    for (const auto& p : pieces_) best = std::max(best, p(y));
    return best;
  }

  /// m * g(beta / m), exact.
  Rational homogeneous(const LatticePoint& beta, std::int64_t m) const {
    Rational best = pieces_.front().homogeneous(beta, m);
    for (const auto& p : pieces_) best = std::max(best, p.homogeneous(beta, m));
    return best;
  }

  /// Measure of the region of P where piece i attains the maximum.
  Rational piece_region_measure(const LatticePolytope& polytope, std::size_t i) const {
    const auto& target = pieces_.at(i);
    if (polytope.dim() == 1) {
      Rational lo = polytope.vertices()[0][0];
      Rational hi = polytope.vertices()[1][0];
      for (std::size_t j = 0; j < pieces_.size(); ++j) {
        if (j == i) continue;
        // target - other >= 0  <=>  s*y + c >= 0
        Rational s = target.linear[0] - pieces_[j].linear[0];
        Rational c = target.constant - pieces_[j].constant;
        if (s == 0) {
          if (c < 0) return 0;
        } else if (s > 0) {
          lo = std::max(lo, Rational(-c / s));
        } else {
          hi = std::min(hi, Rational(-c / s));
        }
      }
      return hi > lo ? Rational(hi - lo) : Rational(0);
    }
    std::vector<detail::RPoint> poly;
    for (const auto& v : polytope.vertices()) poly.push_back({Rational(v[0]), Rational(v[1])});
    for (std::size_t j = 0; j < pieces_.size() && !poly.empty(); ++j) {
      if (j == i) continue;
      AffinePiece diff{{target.linear[0] - pieces_[j].linear[0],
                        target.linear[1] - pieces_[j].linear[1]},
                       target.constant - pieces_[j].constant};
      poly = detail::clip(poly, diff);
    }
    return detail::polygon_area(poly);
  }

  /// Rejects duplicate pieces and pieces that are nowhere maximal on P.
  void validate_on(const LatticePolytope& polytope) const {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (polytope.dim() == 1 && pieces_[i].linear[1] != 0)
        throw InvalidInput("second linear coefficient set on a 1D polytope");
      for (std::size_t j = i + 1; j < pieces_.size(); ++j)
        if (pieces_[i] == pieces_[j]) throw InvalidInput("duplicate piece in PL function");
    }
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (piece_region_measure(polytope, i) <= 0)
        throw InvalidInput("piece " + std::to_string(i) + " is redundant on the polytope");
    }
  }

  friend bool operator==(const PLConvexFunction&, const PLConvexFunction&) = default;

 private:
  std::vector<AffinePiece> pieces_;
};

/// Weights on the section basis of k*m*P at level m.
struct WeightSystem {
  std::int64_t level = 1;
  std::vector<LatticePoint> basis;
  std::vector<Rational> weights;

  Rational total() const {
    Rational s = 0;
    for (const auto& w : weights) s += w;
    return s;
  }
};

/// Adds c*m to every weight of a level-m system.
inline WeightSystem shift_linearization(WeightSystem ws, const Rational& c) {
  for (auto& w : ws.weights) w += c * ws.level;
  return ws;
}

class ToricTestConfig {
 public:
  ToricTestConfig(LatticePolytope polytope, std::int64_t k, PLConvexFunction g)
      : polytope_(std::move(polytope)), k_(k), g_(std::move(g)) {
    if (k_ < 1) throw InvalidInput("exponent k must be positive");
    g_.validate_on(polytope_);
  }

  const LatticePolytope& polytope() const { return polytope_; }
  std::int64_t k() const { return k_; }
  const PLConvexFunction& g() const { return g_; }
  const Rational& linearization_shift() const { return shift_; }

  /// Returns a copy whose level-m weights are shifted by c*m on top of any
  /// existing shift.
  ToricTestConfig with_shift(const Rational& c) const {
    ToricTestConfig out = *this;
    out.shift_ += c;
    return out;
  }

  /// Weight sign flipped. Only used as a negative control for verification.
  ToricTestConfig reversed() const {
    ToricTestConfig out = *this;
    out.reversed_ = !out.reversed_;
    return out;
  }
  bool is_reversed() const { return reversed_; }

  /// Weight of beta in k*m*P: -k*m*g(beta/(k*m)) + shift*m.
  Rational weight(const LatticePoint& beta, std::int64_t m) const {
    Rational w = -g_.homogeneous(beta, k_ * m);
    if (reversed_) w = -w;
    return w + shift_ * m;
  }

  bool is_product() const { return g_.pieces().size() == 1; }
  bool is_trivial() const {
    const auto& l = g_.pieces().front().linear;
    return is_product() && l[0] == 0 && l[1] == 0;
  }

  /// Least common denominator of the level-one weights.
  Integer weight_denominator() const {
    Integer d = 1;
    for (const auto& beta : lattice_points(polytope_, k_)) d = lcm(d, denominator_of(weight(beta, 1)));
    return d;
  }

 private:
  LatticePolytope polytope_;
  std::int64_t k_;
  PLConvexFunction g_;
  Rational shift_ = 0;
  bool reversed_ = false;
};

/// g scaled by d; the weights scale by d as well.
inline ToricTestConfig scale_config(const ToricTestConfig& tc, const Rational& d) {
  if (d <= 0) throw InvalidInput("scale must be positive");
  std::vector<AffinePiece> pieces = tc.g().pieces();
  for (auto& p : pieces) {
    p.linear[0] *= d;
    p.linear[1] *= d;
    p.constant *= d;
  }
  return ToricTestConfig(tc.polytope(), tc.k(), PLConvexFunction(std::move(pieces)))
      .with_shift(tc.linearization_shift() * d);
}

/// Adds an affine function to g (applied to every piece).
inline ToricTestConfig add_affine(const ToricTestConfig& tc, const AffinePiece& affine) {
  std::vector<AffinePiece> pieces = tc.g().pieces();
  for (auto& p : pieces) {
    p.linear[0] += affine.linear[0];
    p.linear[1] += affine.linear[1];
    p.constant += affine.constant;
  }
  return ToricTestConfig(tc.polytope(), tc.k(), PLConvexFunction(std::move(pieces)))
      .with_shift(tc.linearization_shift());
}

struct ClearedConfig {
  ToricTestConfig config;
  Integer scale;
};

/// Rescales g so that all level-one weights are integers.
inline ClearedConfig clear_denominators(const ToricTestConfig& tc) {
  Integer d = tc.weight_denominator();
  return {scale_config(tc, Rational(d)), d};
}

inline WeightSystem weights_at_level(const ToricTestConfig& tc, std::int64_t m) {
  if (m < 1) throw InvalidInput("level must be positive");
  WeightSystem ws;
  ws.level = m;
  ws.basis = lattice_points(tc.polytope(), tc.k() * m);
  ws.weights.reserve(ws.basis.size());
  for (const auto& beta : ws.basis) ws.weights.push_back(tc.weight(beta, m));
  return ws;
}

inline Rational total_weight(const ToricTestConfig& tc, std::int64_t m) {
  return weights_at_level(tc, m).total();
}

/// Diagonal infinitesimal generator on the level-one section basis.
struct Generator {
  std::vector<LatticePoint> basis;
  std::vector<Rational> weights;
  Rational trace;
  std::vector<Rational> trace_free;

  std::vector<double> weights_double() const {
    std::vector<double> out;
    for (const auto& w : weights) out.push_back(to_double(w));
    return out;
  }
};

inline Generator make_generator(std::vector<LatticePoint> basis, std::vector<Rational> weights) {
  Generator a;
  a.basis = std::move(basis);
  a.weights = std::move(weights);
  a.trace = 0;
  for (const auto& w : a.weights) a.trace += w;
  Rational mean = a.trace / static_cast<long long>(a.weights.size());
  for (const auto& w : a.weights) a.trace_free.push_back(w - mean);
  return a;
}

inline Generator generator(const ToricTestConfig& tc) {
  WeightSystem ws = weights_at_level(tc, 1);
  return make_generator(std::move(ws.basis), std::move(ws.weights));
}

}  // namespace fano
