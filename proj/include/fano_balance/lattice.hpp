#pragma once

// Lattice polytopes of dimension one or two, exact volumes and lattice point
// enumeration of dilations.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fano_balance/error.hpp"
#include "fano_balance/rational.hpp"

namespace fano {

/// Integer point in Z^n, n <= 2. The unused coordinate of a 1D point is zero.
using LatticePoint = std::array<std::int64_t, 2>;

/// Facet inequality <x, normal> >= -offset, normal primitive.
struct Facet {
  LatticePoint normal{};
  std::int64_t offset = 0;

  friend bool operator==(const Facet&, const Facet&) = default;
};

inline std::int64_t dot(const LatticePoint& a, const LatticePoint& b) {
  return a[0] * b[0] + a[1] * b[1];
}

class LatticePolytope {
 public:
  LatticePolytope() = default;

  /// Builds the polytope from its vertex list. Facets are derived from the
  /// convex hull; every listed point must be a genuine vertex.
  static LatticePolytope from_vertices(std::string name, int dim,
                                       std::vector<LatticePoint> vertices) {
    if (dim != 1 && dim != 2) throw InvalidInput("polytope dimension must be 1 or 2");
    LatticePolytope p;
    p.name_ = std::move(name);
    p.dim_ = dim;
    if (dim == 1) {
      if (vertices.size() != 2) throw InvalidInput("1D polytope needs exactly two vertices");
      for (auto& v : vertices) {
        if (v[1] != 0) throw InvalidInput("1D vertex has a second coordinate");
      }
      std::sort(vertices.begin(), vertices.end());
      if (vertices[0][0] == vertices[1][0]) throw InvalidInput("degenerate interval");
      p.vertices_ = vertices;
      p.facets_ = {Facet{{1, 0}, -vertices[0][0]}, Facet{{-1, 0}, vertices[1][0]}};
    } else {
      p.vertices_ = convex_hull(vertices);
      if (p.vertices_.size() < 3) throw InvalidInput("2D polytope is degenerate");
      if (p.vertices_.size() != vertices.size())
        throw InvalidInput("vertex list of '" + p.name_ + "' contains non-vertices");
      const std::size_t nv = p.vertices_.size();
      for (std::size_t i = 0; i < nv; ++i) {
        const auto& a = p.vertices_[i];
        const auto& b = p.vertices_[(i + 1) % nv];
        // Counter-clockwise order: the inward normal is the left normal.
        std::int64_t nx = -(b[1] - a[1]);
        std::int64_t ny = b[0] - a[0];
        std::int64_t g = std::gcd(std::abs(nx), std::abs(ny));
        nx /= g;
        ny /= g;
        LatticePoint normal{nx, ny};
        p.facets_.push_back(Facet{normal, -dot(a, normal)});
      }
    }
    p.validate();
    return p;
  }

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const std::vector<LatticePoint>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }

  /// Exact membership test for m*P.
  bool contains(const LatticePoint& x, std::int64_t m = 1) const {
    for (const auto& f : facets_) {
      if (dot(x, f.normal) < -m * f.offset) return false;
    }
    return true;
  }

  bool strictly_contains(const LatticePoint& x, std::int64_t m = 1) const {
    for (const auto& f : facets_) {
      if (dot(x, f.normal) <= -m * f.offset) return false;
    }
    return true;
  }

  /// All facets at lattice distance one and the origin as the only interior
  /// lattice point.
  bool is_reflexive() const {
    for (const auto& f : facets_) {
      if (f.offset != 1) return false;
    }
    auto [lo, hi] = bounding_box(1);
    std::size_t interior = 0;
    bool origin_inside = false;
    for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
      for (std::int64_t y = lo[1]; y <= hi[1]; ++y) {
        LatticePoint pt{x, y};
        if (strictly_contains(pt)) {
          ++interior;
          if (x == 0 && y == 0) origin_inside = true;
        }
      }
    }
    return interior == 1 && origin_inside;
  }

  /// Smallest distance from the origin to a facet hyperplane.
  double inradius() const {
    double r = 1e300;
    for (const auto& f : facets_) {
      double len = std::sqrt(static_cast<double>(dot(f.normal, f.normal)));
      r = std::min(r, static_cast<double>(f.offset) / len);
    }
    return r;
  }

  /// Componentwise bounding box of m*P.
  std::pair<LatticePoint, LatticePoint> bounding_box(std::int64_t m) const {
    LatticePoint lo = vertices_.front();
    LatticePoint hi = vertices_.front();
    for (const auto& v : vertices_) {
      for (int i = 0; i < 2; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    }
    for (int i = 0; i < 2; ++i) {
      lo[i] *= m;
      hi[i] *= m;
    }
    return {lo, hi};
  }

  friend bool operator==(const LatticePolytope& a, const LatticePolytope& b) {
    return a.dim_ == b.dim_ && a.vertices_ == b.vertices_;
  }

 private:
  static std::int64_t cross(const LatticePoint& o, const LatticePoint& a,
                            const LatticePoint& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  }

  // Andrew's monotone chain; collinear points are dropped. Starts from the
  // lexicographically smallest vertex, counter-clockwise.
  static std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<LatticePoint> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
      while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
      hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
      while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
      hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
  }

  void validate() const {
    // Every vertex satisfies every facet and is tight on at least dim facets.
    for (const auto& v : vertices_) {
      int tight = 0;
      for (const auto& f : facets_) {
        std::int64_t s = dot(v, f.normal) + f.offset;
        if (s < 0) throw InvalidInput("vertex outside facet inequality");
        if (s == 0) ++tight;
      }
      if (tight < dim_) throw InvalidInput("vertex not on enough facets");
    }
  }

  std::string name_;
  int dim_ = 0;
  std::vector<LatticePoint> vertices_;
  std::vector<Facet> facets_;
};

/// Lattice points of m*P in lexicographic order. This order is the basis order
/// of the monomial sections at exponent m.
inline std::vector<LatticePoint> lattice_points(const LatticePolytope& p, std::int64_t m) {
  if (m < 0) throw InvalidInput("negative dilation");
  std::vector<LatticePoint> out;
  auto [lo, hi] = p.bounding_box(m);
  for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
    for (std::int64_t y = lo[1]; y <= hi[1]; ++y) {
      LatticePoint pt{x, y};
      if (p.contains(pt, m)) out.push_back(pt);
    }
  }
  return out;
}

inline std::int64_t ehrhart_count(const LatticePolytope& p, std::int64_t m) {
  if (m < 1) throw InvalidInput("ehrhart_count needs m >= 1");
  return static_cast<std::int64_t>(lattice_points(p, m).size());
}

/// Euclidean volume, exact.
inline Rational volume(const LatticePolytope& p) {
  const auto& v = p.vertices();
  if (p.dim() == 1) return Rational(v[1][0] - v[0][0]);
  Integer twice = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    twice += Integer(a[0]) * b[1] - Integer(a[1]) * b[0];
  }
  return Rational(twice, 2);
}

inline Integer factorial(int n) {
  Integer r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// (-K_X)^n = n! vol(P).
inline Rational anticanonical_degree(const LatticePolytope& p) {
  return Rational(factorial(p.dim())) * volume(p);
}

inline std::vector<std::string> builtin_names() { return {"P1", "P2", "P1xP1", "F1"}; }

inline LatticePolytope builtin_polytope(const std::string& name) {
  if (name == "P1") return LatticePolytope::from_vertices("P1", 1, {{-1, 0}, {1, 0}});
  if (name == "P2")
    return LatticePolytope::from_vertices("P2", 2, {{-1, -1}, {2, -1}, {-1, 2}});
  if (name == "P1xP1")
    return LatticePolytope::from_vertices("P1xP1", 2, {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  if (name == "F1")
    return LatticePolytope::from_vertices("F1", 2, {{-1, 0}, {0, -1}, {2, -1}, {-1, 2}});
  throw InvalidInput("unknown builtin polytope '" + name + "'");
}

inline bool is_builtin(const std::string& name) {
  auto names = builtin_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace fano
