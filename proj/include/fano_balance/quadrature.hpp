#pragma once

// Composite Gauss-Legendre tensor grids on a centred box and a deterministic,
// row-parallel reduction over their nodes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "fano_balance/error.hpp"

namespace fano {

struct QuadratureSpec {
  double half_width = 40.0;    // box [-w, w]^n
  int nodes = 400;             // minimum nodes per axis
  int panel_order = 16;        // Gauss-Legendre points per panel
  double max_panel_width = 3.2;
  double tail_tol = 1e-12;     // relative tail target
  int max_expansions = 3;      // box doublings allowed before TailTolerance
  int level = 1;               // panels shrink to max_panel_width / level

  /// Box rule for objects at geodesic time t.
  static QuadratureSpec for_time(double t, QuadratureSpec base);
  static QuadratureSpec for_time(double t);

  bool operator==(const QuadratureSpec&) const = default;
};

inline QuadratureSpec QuadratureSpec::for_time(double t, QuadratureSpec base) {
  base.half_width = std::max(base.half_width, 2.0 * std::abs(t) + 50.0);
  return base;
}

inline QuadratureSpec QuadratureSpec::for_time(double t) { return for_time(t, QuadratureSpec{}); }

/// Integrands built from sections of level k vary on scale 1/k.
inline QuadratureSpec at_level(QuadratureSpec spec, std::int64_t k) {
  spec.level = static_cast<int>(std::max<std::int64_t>(1, k));
  return spec;
}

/// Gauss-Legendre nodes and weights on [-1, 1].
inline void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w) {
  x.assign(order, 0.0);
  w.assign(order, 0.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= order; ++j) {
        double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_order(z), p0 = P_{order-1}(z)
      dp = order * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int j = 2; j <= order; ++j) {
      double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[order - 1 - i] = z;
    w[i] = w[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

inline unsigned worker_threads() {
  if (const char* env = std::getenv("FANO_BALANCE_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

class TensorGrid {
 public:
  TensorGrid(int dim, const QuadratureSpec& spec) : dim_(dim), spec_(spec) {
    if (dim != 1 && dim != 2) throw InvalidInput("grid dimension must be 1 or 2");
    const double width = 2.0 * spec.half_width;
    int panels = std::max((spec.nodes + spec.panel_order - 1) / spec.panel_order,
                          static_cast<int>(std::ceil(width * std::max(1, spec.level) / spec.max_panel_width)));
    std::vector<double> gx, gw;
    gauss_legendre(spec.panel_order, gx, gw);
    const double h = width / panels;
    for (int p = 0; p < panels; ++p) {
      double a = -spec.half_width + p * h;
      for (int i = 0; i < spec.panel_order; ++i) {
        x_.push_back(a + 0.5 * h * (gx[i] + 1.0));
        w_.push_back(0.5 * h * gw[i]);
      }
    }
  }

  int dim() const { return dim_; }
  const QuadratureSpec& spec() const { return spec_; }
  std::size_t nodes_per_axis() const { return x_.size(); }
  std::size_t size() const { return dim_ == 1 ? x_.size() : x_.size() * x_.size(); }
  const std::vector<double>& axis() const { return x_; }
  const std::vector<double>& axis_weights() const { return w_; }

  /// True if the node lies on the outermost layer of the grid.
  bool on_boundary(std::size_t i, std::size_t j) const {
    const std::size_t last = x_.size() - 1;
    if (dim_ == 1) return i == 0 || i == last;
    return i == 0 || i == last || j == 0 || j == last;
  }

  /// Calls f(point, weight, i, j, acc) for every node. Rows (first axis) are
  /// split across threads; each row accumulates into its own Acc and rows are
  /// merged in index order, so the result does not depend on the thread count.
  template <class Acc, class F, class Merge>
  Acc reduce(const Acc& init, F&& f, Merge&& merge) const {
    const std::size_t rows = x_.size();
    std::vector<Acc> per_row(rows, init);
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        Acc& acc = per_row[i];
        if (dim_ == 1) {
          double pt[2] = {x_[i], 0.0};
          f(pt, w_[i], i, std::size_t{0}, acc);
        } else {
          for (std::size_t j = 0; j < rows; ++j) {
            double pt[2] = {x_[i], x_[j]};
            f(pt, w_[i] * w_[j], i, j, acc);
          }
        }
      }
    };
    unsigned threads = std::min<std::size_t>(worker_threads(), rows);
    if (threads <= 1 || dim_ == 1) {
      work(0, rows);
    } else {
      std::vector<std::thread> pool;
      std::size_t chunk = (rows + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        std::size_t b = t * chunk, e = std::min(rows, b + chunk);
        if (b < e) pool.emplace_back(work, b, e);
      }
      for (auto& th : pool) th.join();
    }
    Acc total = init;
    for (auto& r : per_row) merge(total, r);
    return total;
  }

 private:
  int dim_;
  QuadratureSpec spec_;
  std::vector<double> x_, w_;
};

struct IntegralResult {
  double value = 0;
  double tail = 0;  // estimated mass outside the box
  QuadratureSpec spec;
};

/// Integrates f over R^n. The tail is estimated from the largest boundary
/// value of |f| times the boundary size over the decay rate; the box doubles
/// while the relative tail exceeds spec.tail_tol.
inline IntegralResult integrate(int dim, const std::function<double(const double*)>& f,
                                QuadratureSpec spec, double decay_rate = 1.0) {
  for (int attempt = 0;; ++attempt) {
    TensorGrid grid(dim, spec);
    struct Acc {
      double sum = 0, edge = 0;
    };
    Acc acc = grid.reduce(
        Acc{},
        [&](const double* x, double w, std::size_t i, std::size_t j, Acc& a) {
          double v = f(x);
          a.sum += w * v;
          if (grid.on_boundary(i, j)) a.edge = std::max(a.edge, std::abs(v));
        },
        [](Acc& total, const Acc& r) {
          total.sum += r.sum;
          total.edge = std::max(total.edge, r.edge);
        });
    double boundary = dim == 1 ? 2.0 : 8.0 * spec.half_width;
    double tail = acc.edge * boundary / decay_rate;
    if (tail <= spec.tail_tol * std::max(std::abs(acc.sum), 1e-300) || (acc.sum == 0.0 && tail == 0.0))
      return {acc.sum, tail, spec};
    if (attempt >= spec.max_expansions)
      throw TailTolerance("tail " + std::to_string(tail) + " after " +
                          std::to_string(attempt) + " box expansions");
    spec.half_width *= 2.0;
  }
}

}  // namespace fano
