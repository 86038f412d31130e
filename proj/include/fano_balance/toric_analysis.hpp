#pragma once

// Torus-invariant metrics in logarithmic coordinates x in R^n: diagonal
// Hermitian metrics on sections, their Fubini-Study type potentials
// u(x) = (1/k) log((1/N) sum_beta e^{<beta,x>} / h_beta) + shift, and the
// densities built from them.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fano_balance/error.hpp"
#include "fano_balance/lattice.hpp"
#include "fano_balance/quadrature.hpp"

namespace fano {

/// Positive diagonal metric on the monomial sections of k*P, stored as logs.
class DiagonalHermitian {
 public:
  DiagonalHermitian() = default;
  DiagonalHermitian(LatticePolytope polytope, std::int64_t k, std::vector<double> log_entries)
      : polytope_(std::move(polytope)), k_(k), basis_(lattice_points(polytope_, k)),
        log_h_(std::move(log_entries)) {
    if (k_ < 1) throw InvalidInput("exponent k must be positive");
    if (log_h_.size() != basis_.size())
      throw InvalidInput("metric has " + std::to_string(log_h_.size()) + " entries, basis has " +
                         std::to_string(basis_.size()));
    for (double v : log_h_)
      if (!std::isfinite(v)) throw InvalidInput("metric entry is not positive and finite");
  }

  static DiagonalHermitian identity(const LatticePolytope& p, std::int64_t k) {
    return DiagonalHermitian(p, k, std::vector<double>(lattice_points(p, k).size(), 0.0));
  }

  static DiagonalHermitian from_entries(const LatticePolytope& p, std::int64_t k,
                                        const std::vector<double>& entries) {
    std::vector<double> logs;
    for (double e : entries) {
      if (!(e > 0) || !std::isfinite(e)) throw InvalidInput("metric entries must be positive");
      logs.push_back(std::log(e));
    }
    return DiagonalHermitian(p, k, std::move(logs));
  }

  const LatticePolytope& polytope() const { return polytope_; }
  std::int64_t k() const { return k_; }
  int dim() const { return polytope_.dim(); }
  std::size_t size() const { return basis_.size(); }
  const std::vector<LatticePoint>& basis() const { return basis_; }
  const std::vector<double>& log_entries() const { return log_h_; }

  std::vector<double> entries() const {
    std::vector<double> out;
    for (double v : log_h_) out.push_back(std::exp(v));
    return out;
  }

  DiagonalHermitian scaled(double c) const {
    DiagonalHermitian out = *this;
    double lc = std::log(c);
    for (double& v : out.log_h_) v += lc;
    return out;
  }

  /// Determinant-one gauge.
  DiagonalHermitian normalized() const {
    DiagonalHermitian out = *this;
    double mean = 0;
    for (double v : log_h_) mean += v;
    mean /= static_cast<double>(log_h_.size());
    for (double& v : out.log_h_) v -= mean;
    return out;
  }

  /// log det relative to another metric on the same basis.
  double log_det_relative(const DiagonalHermitian& ref) const {
    check_compatible(ref);
    double s = 0;
    for (std::size_t i = 0; i < log_h_.size(); ++i) s += log_h_[i] - ref.log_h_[i];
    return s;
  }

  void check_compatible(const DiagonalHermitian& other) const {
    if (!(polytope_ == other.polytope_) || k_ != other.k_)
      throw InvalidInput("metrics live on different section spaces");
  }

 private:
  LatticePolytope polytope_;
  std::int64_t k_ = 1;
  std::vector<LatticePoint> basis_;
  std::vector<double> log_h_;
};

struct Jet {
  double value = 0;
  std::array<double, 2> gradient{};
  std::array<std::array<double, 2>, 2> hessian{};
};

inline double hessian_det(const Jet& j, int dim) {
  if (dim == 1) return j.hessian[0][0];
  return j.hessian[0][0] * j.hessian[1][1] - j.hessian[0][1] * j.hessian[1][0];
}

/// Log-sum-exp potential of a diagonal metric plus a constant.
class ToricPotential {
 public:
  ToricPotential() = default;
  explicit ToricPotential(DiagonalHermitian h, double shift = 0.0)
      : h_(std::move(h)), shift_(shift) {
    for (const auto& b : h_.basis()) {
      beta_.push_back({static_cast<double>(b[0]), static_cast<double>(b[1])});
    }
    log_n_ = std::log(static_cast<double>(h_.size()));
  }

  const DiagonalHermitian& metric() const { return h_; }
  double shift() const { return shift_; }
  const LatticePolytope& polytope() const { return h_.polytope(); }
  std::int64_t k() const { return h_.k(); }
  int dim() const { return h_.dim(); }
  std::size_t size() const { return h_.size(); }
  const std::vector<std::array<double, 2>>& exponents() const { return beta_; }

  ToricPotential shifted(double c) const { return ToricPotential(h_, shift_ + c); }

  /// Value, gradient and Hessian at x; `p` receives the softmax weights
  /// e^{<beta,x>}/h_beta normalised to sum one.
  Jet jet(const double* x, std::vector<double>& p) const {
    if (!std::isfinite(x[0]) || !std::isfinite(x[1]))
      throw NumericalUnderflow("non-finite evaluation point");
    const std::size_t n = beta_.size();
    p.resize(n);
    const auto& lh = h_.log_entries();
    double amax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = beta_[i][0] * x[0] + beta_[i][1] * x[1] - lh[i];
      amax = std::max(amax, p[i]);
    }
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = std::exp(p[i] - amax);
      s += p[i];
    }
    if (!(s > 0) || !std::isfinite(s)) throw NumericalUnderflow("softmax normaliser vanished");
    const double inv_k = 1.0 / static_cast<double>(h_.k());
    Jet j;
    j.value = (amax + std::log(s) - log_n_) * inv_k + shift_;
    double m0 = 0, m1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] /= s;
      m0 += p[i] * beta_[i][0];
      m1 += p[i] * beta_[i][1];
    }
    double c00 = 0, c01 = 0, c11 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double d0 = beta_[i][0] - m0, d1 = beta_[i][1] - m1;
      c00 += p[i] * d0 * d0;
      c01 += p[i] * d0 * d1;
      c11 += p[i] * d1 * d1;
    }
    j.gradient = {m0 * inv_k, m1 * inv_k};
    j.hessian = {{{c00 * inv_k, c01 * inv_k}, {c01 * inv_k, c11 * inv_k}}};
    return j;
  }

  Jet jet(const double* x) const {
    thread_local std::vector<double> p;
    return jet(x, p);
  }

  double operator()(const double* x) const { return jet(x).value; }

 private:
  DiagonalHermitian h_;
  double shift_ = 0.0;
  std::vector<std::array<double, 2>> beta_;
  double log_n_ = 0.0;
};

/// Finite-size point helper: x given as {x0} or {x0, x1}.
inline Jet potential_jet(const ToricPotential& u, std::array<double, 2> x) {
  return u.jet(x.data());
}

/// log of the integral of e^{-u} over R^n, with the minimum of u over the grid
/// subtracted before exponentiation.
struct LogMass {
  double log_z = 0;
  double tail = 0;
  QuadratureSpec spec;
};

inline LogMass log_mass(const ToricPotential& u, QuadratureSpec spec) {
  spec = at_level(spec, u.k());
  const double decay = u.polytope().inradius();
  for (int attempt = 0;; ++attempt) {
    TensorGrid grid(u.dim(), spec);
    struct MinAcc {
      double v = std::numeric_limits<double>::infinity();
    };
    double umin = grid.reduce(
                          MinAcc{},
                          [&](const double* x, double, std::size_t, std::size_t, MinAcc& a) {
                            a.v = std::min(a.v, u.jet(x).value);
                          },
                          [](MinAcc& t, const MinAcc& r) { t.v = std::min(t.v, r.v); })
                      .v;
    struct Acc {
      double sum = 0, edge = 0;
    };
    Acc acc = grid.reduce(
        Acc{},
        [&](const double* x, double w, std::size_t i, std::size_t j, Acc& a) {
          double e = std::exp(-(u.jet(x).value - umin));
          a.sum += w * e;
          if (grid.on_boundary(i, j)) a.edge = std::max(a.edge, e);
        },
        [](Acc& t, const Acc& r) {
          t.sum += r.sum;
          t.edge = std::max(t.edge, r.edge);
        });
    double boundary = u.dim() == 1 ? 2.0 : 8.0 * spec.half_width;
    double tail = acc.edge * boundary / decay / acc.sum;
    if (tail <= spec.tail_tol) return {std::log(acc.sum) - umin, tail, spec};
    if (attempt >= spec.max_expansions)
      throw TailTolerance("mass tail " + std::to_string(tail) + " exceeds target");
    spec.half_width *= 2.0;
  }
}

/// Normalised density e^{-u}/Z_u.
struct MuDensity {
  ToricPotential u;
  double log_z = 0;
  double tail = 0;
  QuadratureSpec spec;

  double z() const { return std::exp(log_z); }
  double operator()(const double* x) const { return std::exp(-u(x) - log_z); }
};

inline MuDensity density_mu(const ToricPotential& u, const QuadratureSpec& spec = {}) {
  LogMass lm = log_mass(u, spec);
  return {u, lm.log_z, lm.tail, lm.spec};
}

/// omega_u^n in log coordinates: n! det Hess u.
inline double density_ma(const ToricPotential& u, const double* x) {
  Jet j = u.jet(x);
  return static_cast<double>(factorial(u.dim()).convert_to<long long>()) * hessian_det(j, u.dim());
}

inline IntegralResult ma_mass(const ToricPotential& u, const QuadratureSpec& spec = {}) {
  return integrate(
      u.dim(), [&](const double* x) { return density_ma(u, x); }, at_level(spec, u.k()),
      u.polytope().inradius());
}

/// B = n! mu / omega^n - n!/(-K)^n = e^{-u}/(Z det Hess u) - 1/vol(P).
class BFunction {
 public:
  BFunction(const ToricPotential& u, const QuadratureSpec& spec = {})
      : mu_(density_mu(u, spec)), inv_vol_(1.0 / to_double(volume(u.polytope()))) {}

  double operator()(const double* x) const {
    Jet j = mu_.u.jet(x);
    return std::exp(-j.value - mu_.log_z) / hessian_det(j, mu_.u.dim()) - inv_vol_;
  }

  /// |B|^q det Hess u, written so that vanishing Hessians do not divide by zero.
  double lq_integrand(const double* x, double q) const {
    Jet j = mu_.u.jet(x);
    double det = hessian_det(j, mu_.u.dim());
    if (!(det > 1e-280)) return 0.0;
    double diff = std::abs(std::exp(-j.value - mu_.log_z) - det * inv_vol_);
    return std::pow(diff, q) * std::pow(det, 1.0 - q);
  }

  const MuDensity& mu() const { return mu_; }
  double inverse_volume() const { return inv_vol_; }

 private:
  MuDensity mu_;
  double inv_vol_;
};

/// (integral of |B|^q omega^n/n!)^(1/q).
inline double lq_norm_b(const ToricPotential& u, double q, const QuadratureSpec& spec = {}) {
  if (!(q > 1)) throw InvalidInput("q must exceed 1");
  BFunction b(u, spec);
  QuadratureSpec s = b.mu().spec;
  s.tail_tol = std::max(s.tail_tol, 1e-10);
  TensorGrid grid(u.dim(), s);
  double total = grid.reduce(
      0.0, [&](const double* x, double w, std::size_t, std::size_t, double& a) {
        a += w * b.lq_integrand(x, q);
      },
      [](double& t, const double& r) { t += r; });
  return std::pow(std::max(total, 0.0), 1.0 / q);
}

}  // namespace fano
