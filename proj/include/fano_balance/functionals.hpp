#pragma once

// Quantization maps and the energy functionals on torus-invariant metrics.
//
// Conventions: integrals over X of torus-invariant quantities are taken over
// R^n in logarithmic coordinates with the angular factor normalised to one,
// omega_u^n = n! det Hess u dx, and |s_beta|^2 = e^{<beta,x> - k u(x)}.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fano_balance/error.hpp"
#include "fano_balance/lattice.hpp"
#include "fano_balance/quadrature.hpp"
#include "fano_balance/toric_analysis.hpp"

namespace fano {

/// FS_k(H): the log-sum-exp potential of H.
inline ToricPotential fs(const DiagonalHermitian& h) { return ToricPotential(h); }

namespace detail {

inline double mixed_energy_density(const Jet& a, const Jet& b, int dim) {
  if (dim == 1) return 0.5 * (a.hessian[0][0] + b.hessian[0][0]);
  const auto& A = a.hessian;
  const auto& B = b.hessian;
  double det_a = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  double det_b = B[0][0] * B[1][1] - B[0][1] * B[1][0];
  double mixed = 0.5 * (A[0][0] * B[1][1] + A[1][1] * B[0][0] - 2.0 * A[0][1] * B[0][1]);
  // n!/(n+1) with n = 2.
  return (2.0 / 3.0) * (det_a + mixed + det_b);
}

inline double boundary_size(int dim, double half_width) {
  return dim == 1 ? 2.0 : 8.0 * half_width;
}

}  // namespace detail

/// Everything one sweep over the grid yields for u = FS(H).
struct PotentialMoments {
  double log_z = 0;                 // log of the integral of e^{-u}
  std::vector<double> softmax_mass; // integral of p_beta dmu_u
  std::optional<double> energy;     // E(u) relative to the reference potential
  std::optional<double> energy_rate;// integral of udot omega^n along weights
  double tail = 0;
  QuadratureSpec spec;
};

struct MomentRequest {
  const ToricPotential* reference = nullptr;   // for the Monge-Ampere energy
  const std::vector<double>* weights = nullptr;// generator weights, same basis
};

inline PotentialMoments potential_moments(const ToricPotential& u, QuadratureSpec spec,
                                          const MomentRequest& req = {}) {
  const std::size_t n = u.size();
  const int dim = u.dim();
  const double nfact = dim == 1 ? 1.0 : 2.0;
  const double inv_k = 1.0 / static_cast<double>(u.k());
  const double decay = u.polytope().inradius();
  spec = at_level(spec, req.reference ? std::max(u.k(), req.reference->k()) : u.k());
  if (req.reference && !(u.polytope() == req.reference->polytope()))
    throw InvalidInput("reference potential on a different polytope");
  if (req.weights && req.weights->size() != n) throw InvalidInput("weights do not match basis");

  for (int attempt = 0;; ++attempt) {
    TensorGrid grid(dim, spec);
    struct MinAcc {
      double v = std::numeric_limits<double>::infinity();
    };
    const double umin = grid.reduce(
                                MinAcc{},
                                [&](const double* x, double, std::size_t, std::size_t, MinAcc& a) {
                                  a.v = std::min(a.v, u.jet(x).value);
                                },
                                [](MinAcc& t, const MinAcc& r) { t.v = std::min(t.v, r.v); })
                            .v;

    // Layout: [mass, p_0..p_{n-1}, energy, energy_rate, edge_mass, edge_energy, edge_rate]
    const std::size_t base = n + 1;
    std::vector<double> init(base + 5, 0.0);
    auto acc = grid.reduce(
        init,
        [&](const double* x, double w, std::size_t i, std::size_t j, std::vector<double>& a) {
          thread_local std::vector<double> p;
          Jet jt = u.jet(x, p);
          double e = std::exp(-(jt.value - umin));
          a[0] += w * e;
          for (std::size_t b = 0; b < n; ++b) a[1 + b] += w * e * p[b];
          double ei = 0, ri = 0;
          if (req.reference) {
            Jet j0 = req.reference->jet(x);
            ei = (jt.value - j0.value) * detail::mixed_energy_density(jt, j0, dim);
            a[base] += w * ei;
          }
          if (req.weights) {
            double udot = 0;
            for (std::size_t b = 0; b < n; ++b) udot += p[b] * (*req.weights)[b];
            ri = udot * inv_k * nfact * hessian_det(jt, dim);
            a[base + 1] += w * ri;
          }
          if (grid.on_boundary(i, j)) {
            a[base + 2] = std::max(a[base + 2], e);
            a[base + 3] = std::max(a[base + 3], std::abs(ei));
            a[base + 4] = std::max(a[base + 4], std::abs(ri));
          }
        },
        [&](std::vector<double>& t, const std::vector<double>& r) {
          for (std::size_t b = 0; b < base + 2; ++b) t[b] += r[b];
          for (std::size_t b = base + 2; b < base + 5; ++b) t[b] = std::max(t[b], r[b]);
        });

    const double bsize = detail::boundary_size(dim, spec.half_width) / decay;
    double tail = acc[base + 2] * bsize / acc[0];
    if (req.reference) tail = std::max(tail, acc[base + 3] * bsize / std::max(1.0, std::abs(acc[base])));
    if (req.weights)
      tail = std::max(tail, acc[base + 4] * bsize / std::max(1.0, std::abs(acc[base + 1])));
    if (tail <= spec.tail_tol || attempt >= spec.max_expansions) {
      if (tail > spec.tail_tol)
        throw TailTolerance("moment tail " + std::to_string(tail) + " after " +
                            std::to_string(attempt) + " expansions");
      PotentialMoments m;
      m.log_z = std::log(acc[0]) - umin;
      m.softmax_mass.resize(n);
      for (std::size_t b = 0; b < n; ++b) m.softmax_mass[b] = acc[1 + b] / acc[0];
      if (req.reference) m.energy = acc[base];
      if (req.weights) m.energy_rate = acc[base + 1];
      m.tail = tail;
      m.spec = spec;
      return m;
    }
    spec.half_width *= 2.0;
  }
}

/// Hilb_k(u): h_beta = integral of e^{<beta,x> - k u} dmu_u, for any exponent k.
inline DiagonalHermitian hilb(const ToricPotential& u, std::int64_t k,
                              const QuadratureSpec& spec = {}) {
  const LatticePolytope& p = u.polytope();
  const auto basis = lattice_points(p, k);
  const std::size_t n = basis.size();
  MuDensity mu = density_mu(u, spec);
  TensorGrid grid(u.dim(), at_level(mu.spec, std::max(u.k(), k)));
  const double kd = static_cast<double>(k);
  auto acc = grid.reduce(
      std::vector<double>(n, 0.0),
      [&](const double* x, double w, std::size_t, std::size_t, std::vector<double>& a) {
        double uv = u(x);
        double base = -(kd + 1.0) * uv - mu.log_z;
        for (std::size_t b = 0; b < n; ++b)
          a[b] += w * std::exp(basis[b][0] * x[0] + basis[b][1] * x[1] + base);
      },
      [](std::vector<double>& t, const std::vector<double>& r) {
        for (std::size_t b = 0; b < t.size(); ++b) t[b] += r[b];
      });
  std::vector<double> logs;
  for (double v : acc) {
    if (!(v > 0)) throw NumericalUnderflow("Hilbert map entry underflowed");
    logs.push_back(std::log(v));
  }
  return DiagonalHermitian(p, k, std::move(logs));
}

inline DiagonalHermitian hilb(const ToricPotential& u, const QuadratureSpec& spec = {}) {
  return hilb(u, u.k(), spec);
}

/// Hilb_k(FS_k(H)) from the softmax masses: h'_beta = N h_beta integral p_beta dmu.
inline DiagonalHermitian hilb_fs(const DiagonalHermitian& h, const PotentialMoments& m) {
  std::vector<double> logs = h.log_entries();
  const double log_n = std::log(static_cast<double>(h.size()));
  for (std::size_t b = 0; b < logs.size(); ++b) logs[b] += log_n + std::log(m.softmax_mass[b]);
  return DiagonalHermitian(h.polytope(), h.k(), std::move(logs));
}

/// Monge-Ampere energy of u relative to u0.
inline double energy_e(const ToricPotential& u, const ToricPotential& u0,
                       const QuadratureSpec& spec = {}) {
  MomentRequest req;
  req.reference = &u0;
  return *potential_moments(u, spec, req).energy;
}

/// Reference data: phi_0 = FS(Id) and H_0 = Hilb(phi_0).
struct Reference {
  ToricPotential phi0;
  DiagonalHermitian h0;
  QuadratureSpec spec;
};

inline Reference make_reference(const LatticePolytope& p, std::int64_t k,
                                const QuadratureSpec& spec = {}) {
  ToricPotential phi0 = fs(DiagonalHermitian::identity(p, k));
  return {phi0, hilb(phi0, k, spec), spec};
}

struct FunctionalValues {
  double E = 0;   // Monge-Ampere energy of FS(H)
  double L = 0;   // -log integral e^{-FS(H)}
  double D = 0;   // Ding functional of FS(H)
  double Ek = 0;  // quantized Monge-Ampere energy
  double Zk = 0;  // balancing energy
  double Dk = 0;  // quantized Ding functional
  QuadratureSpec spec;
};

struct GeometryConstants {
  int n;
  double degree;  // (-K_X)^n
  double volume;
  double kpow;    // k^{n+1}
  double nk;      // N_k

  static GeometryConstants of(const DiagonalHermitian& h) {
    GeometryConstants c;
    c.n = h.dim();
    c.volume = to_double(fano::volume(h.polytope()));
    c.degree = to_double(anticanonical_degree(h.polytope()));
    c.kpow = std::pow(static_cast<double>(h.k()), c.n + 1);
    c.nk = static_cast<double>(h.size());
    return c;
  }
};

inline FunctionalValues functional_suite(const DiagonalHermitian& h, const Reference& ref,
                                         const QuadratureSpec& spec = {}) {
  h.check_compatible(ref.h0);
  const auto c = GeometryConstants::of(h);
  ToricPotential u = fs(h);
  MomentRequest req;
  req.reference = &ref.phi0;
  PotentialMoments m = potential_moments(u, spec, req);
  FunctionalValues v;
  v.E = *m.energy;
  v.L = -m.log_z;
  v.D = -v.E / c.degree + v.L;
  v.Ek = -h.log_det_relative(ref.h0) / (static_cast<double>(h.k()) * c.nk);
  v.Zk = (c.degree / std::tgamma(c.n + 1.0)) * c.kpow * (v.E / c.degree - v.Ek);
  v.Dk = -v.Ek + v.L;
  v.spec = m.spec;
  return v;
}

/// Diagonal M(H) and its trace-free part.
struct MMatrix {
  std::vector<double> diagonal;
  std::vector<double> trace_free;

  double residual() const {
    double r = 0;
    for (double v : trace_free) r = std::max(r, std::abs(v));
    return r;
  }
};

inline MMatrix m_matrix(const DiagonalHermitian& h, const PotentialMoments& m) {
  const double kn = std::pow(static_cast<double>(h.k()), h.dim());
  const double shift = kn / static_cast<double>(h.size());
  MMatrix out;
  for (double s : m.softmax_mass) {
    out.diagonal.push_back(kn * s);
    out.trace_free.push_back(kn * s - shift);
  }
  return out;
}

inline MMatrix m_matrix(const DiagonalHermitian& h, const QuadratureSpec& spec = {}) {
  return m_matrix(h, potential_moments(fs(h), spec));
}

/// d/dt D^(k)(e^{-tA} H) at t = 0: tr(A Mbar(H)) / k^{n+1}.
inline double ding_derivative(const DiagonalHermitian& h, const MMatrix& m,
                              const std::vector<double>& weights) {
  if (weights.size() != h.size()) throw InvalidInput("generator does not match basis");
  double s = 0;
  for (std::size_t b = 0; b < weights.size(); ++b) s += weights[b] * m.trace_free[b];
  return s / GeometryConstants::of(h).kpow;
}

inline double ding_derivative(const DiagonalHermitian& h, const std::vector<double>& weights,
                              const QuadratureSpec& spec = {}) {
  return ding_derivative(h, m_matrix(h, spec), weights);
}

/// First derivatives along e^{-tA} H at t = 0.
struct RayRates {
  double ding = 0;        // d D^(k)/dt
  double balancing = 0;   // d Z_k/dt
  double ding_fs = 0;     // d D(FS(H_t))/dt
  double energy = 0;      // d E(FS(H_t))/dt
  double log_mass = 0;    // d L(FS(H_t))/dt
  double residual = 0;    // max |Mbar(H)|
  QuadratureSpec spec;
};

inline RayRates ray_rates(const DiagonalHermitian& h, const std::vector<double>& weights,
                          const QuadratureSpec& spec = {}) {
  const auto c = GeometryConstants::of(h);
  MomentRequest req;
  req.weights = &weights;
  PotentialMoments m = potential_moments(fs(h), spec, req);
  MMatrix mm = m_matrix(h, m);
  RayRates r;
  r.ding = ding_derivative(h, mm, weights);
  double trace = 0, lrate = 0;
  for (std::size_t b = 0; b < weights.size(); ++b) {
    trace += weights[b];
    lrate += weights[b] * m.softmax_mass[b];
  }
  const double kd = static_cast<double>(h.k());
  r.log_mass = lrate / kd;
  r.energy = *m.energy_rate;
  r.ding_fs = -r.energy / c.degree + r.log_mass;
  r.balancing = (c.degree / std::tgamma(c.n + 1.0)) * c.kpow *
                (r.energy / c.degree - trace / (kd * c.nk));
  r.residual = mm.residual();
  r.spec = m.spec;
  return r;
}

}  // namespace fano
