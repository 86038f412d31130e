#pragma once

// The shipped family of test configurations: linear and kinked functions of
// the directions +-e_i and +-(1,1) on every builtin polytope, levels 1 to 3.

#include <string>
#include <vector>

#include "fano_balance/testconfig.hpp"

namespace fano {

struct CorpusEntry {
  std::string name;
  ToricTestConfig config;
};

inline std::vector<std::pair<std::string, LatticePoint>> corpus_directions(int dim) {
  if (dim == 1) return {{"+e1", {1, 0}}, {"-e1", {-1, 0}}};
  return {{"+e1", {1, 0}},  {"-e1", {-1, 0}}, {"+e2", {0, 1}},
          {"-e2", {0, -1}}, {"+11", {1, 1}},  {"-11", {-1, -1}}};
}

inline std::vector<CorpusEntry> builtin_corpus() {
  std::vector<CorpusEntry> out;
  for (const auto& name : builtin_names()) {
    const LatticePolytope p = builtin_polytope(name);
    for (const auto& [tag, l] : corpus_directions(p.dim())) {
      AffinePiece piece{{Rational(l[0]), Rational(l[1])}, 0};
      for (int kink = 0; kink < 2; ++kink) {
        PLConvexFunction g = kink ? PLConvexFunction({AffinePiece{}, piece})
                                  : PLConvexFunction({piece});
        for (std::int64_t k = 1; k <= 3; ++k) {
          out.push_back({name + "-" + (kink ? "kink" : "linear") + tag + "-k" + std::to_string(k),
                         ToricTestConfig(p, k, g)});
        }
      }
    }
  }
  return out;
}

}  // namespace fano
