#pragma once

// JSON and CSV exchange formats for polytopes, test configurations, metrics
// and the reports built on them.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fano_balance/balanced.hpp"
#include "fano_balance/invariants.hpp"

namespace fano::io {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

inline json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::string data_dir() {
  if (const char* env = std::getenv("FANO_BALANCE_DATA")) return env;
#ifdef FANO_BALANCE_DATA_DIR
  return FANO_BALANCE_DATA_DIR;
#else
  return "data";
#endif
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("field '") + key + "' has the wrong type");
  }
}

inline Rational rational_field(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  throw InvalidInput("rational values are written as \"p/q\" strings or integers");
}

// ---------------------------------------------------------------- polytopes

inline json to_json(const LatticePolytope& p) {
  json v = json::array();
  for (const auto& x : p.vertices()) {
    if (p.dim() == 1) v.push_back(json::array({x[0]}));
    else v.push_back(json::array({x[0], x[1]}));
  }
  return {{"name", p.name()}, {"dim", p.dim()}, {"vertices", v}};
}

inline LatticePolytope polytope_from_json(const json& j) {
  const int dim = field<int>(j, "dim");
  std::vector<LatticePoint> verts;
  for (const auto& v : field<json>(j, "vertices")) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
      throw InvalidInput("vertex with wrong number of coordinates");
    verts.push_back({v[0].get<std::int64_t>(), dim == 2 ? v[1].get<std::int64_t>() : 0});
  }
  return LatticePolytope::from_vertices(j.value("name", std::string("custom")), dim, verts);
}

/// A builtin name, a file path (absolute, relative to `base`, or relative to
/// the working directory), a file under the shipped polytope directory, or an
/// inline object.
inline LatticePolytope resolve_polytope(const json& ref, const fs::path& base = {}) {
  if (ref.is_object()) return polytope_from_json(ref);
  if (!ref.is_string()) throw InvalidInput("polytope must be a name, a path or an object");
  const std::string s = ref.get<std::string>();
  if (is_builtin(s)) return builtin_polytope(s);
  std::vector<fs::path> candidates;
  if (fs::path(s).is_absolute()) {
    candidates.push_back(s);
  } else {
    if (!base.empty()) candidates.push_back(base / s);
    candidates.push_back(s);
    candidates.push_back(fs::path(data_dir()) / "polytopes" / s);
    candidates.push_back(fs::path(data_dir()) / "polytopes" / (s + ".json"));
  }
  for (const auto& c : candidates)
    if (fs::is_regular_file(c)) return polytope_from_json(read_json(c));
  throw InvalidInput("unknown polytope '" + s + "'");
}

inline LatticePolytope load_polytope(const fs::path& path) { return polytope_from_json(read_json(path)); }

inline json polytope_reference(const LatticePolytope& p) {
  if (is_builtin(p.name()) && builtin_polytope(p.name()) == p) return p.name();
  return to_json(p);
}

// ------------------------------------------------------ test configurations

inline json to_json(const ToricTestConfig& tc) {
  json pieces = json::array();
  for (const auto& a : tc.g().pieces()) {
    json lin = json::array({to_string(a.linear[0])});
    if (tc.polytope().dim() == 2) lin.push_back(to_string(a.linear[1]));
    pieces.push_back({{"linear", lin}, {"const", to_string(a.constant)}});
  }
  json j = {{"polytope", polytope_reference(tc.polytope())}, {"k", tc.k()}, {"pieces", pieces}};
  if (tc.linearization_shift() != 0) j["shift"] = to_string(tc.linearization_shift());
  if (tc.is_reversed()) j["reversed"] = true;
  return j;
}

inline ToricTestConfig config_from_json(const json& j, const fs::path& base = {}) {
  LatticePolytope p = resolve_polytope(field<json>(j, "polytope"), base);
  const auto k = field<std::int64_t>(j, "k");
  std::vector<AffinePiece> pieces;
  for (const auto& pj : field<json>(j, "pieces")) {
    const json lin = field<json>(pj, "linear");
    if (!lin.is_array() || static_cast<int>(lin.size()) != p.dim())
      throw InvalidInput("linear part must have one entry per dimension");
    AffinePiece a;
    a.linear[0] = rational_field(lin[0]);
    if (p.dim() == 2) a.linear[1] = rational_field(lin[1]);
    if (pj.contains("const")) a.constant = rational_field(pj["const"]);
    pieces.push_back(a);
  }
  if (pieces.empty()) throw InvalidInput("a test configuration needs at least one piece");
  ToricTestConfig tc(p, k, PLConvexFunction(std::move(pieces)));
  if (j.contains("shift")) tc = tc.with_shift(rational_field(j["shift"]));
  if (j.value("reversed", false)) tc = tc.reversed();
  return tc;
}

inline ToricTestConfig load_config(const fs::path& path) {
  return config_from_json(read_json(path), path.parent_path());
}

// ------------------------------------------------------------------ metrics

inline std::string beta_key(const LatticePoint& b, int dim) {
  if (dim == 1) return "(" + std::to_string(b[0]) + ")";
  return "(" + std::to_string(b[0]) + "," + std::to_string(b[1]) + ")";
}

inline json to_json(const DiagonalHermitian& h, double shift = 0.0) {
  json entries = json::object();
  const auto e = h.entries();
  for (std::size_t i = 0; i < h.size(); ++i) entries[beta_key(h.basis()[i], h.dim())] = e[i];
  return {{"polytope", polytope_reference(h.polytope())}, {"k", h.k()}, {"h", entries}, {"shift", shift}};
}

struct LoadedMetric {
  DiagonalHermitian h;
  double shift = 0;
};

inline LoadedMetric metric_from_json(const json& j, const fs::path& base = {}) {
  LatticePolytope p = resolve_polytope(field<json>(j, "polytope"), base);
  const auto k = field<std::int64_t>(j, "k");
  const json entries = field<json>(j, "h");
  const auto basis = lattice_points(p, k);
  if (entries.size() != basis.size())
    throw InvalidInput("metric has " + std::to_string(entries.size()) + " entries, expected " +
                       std::to_string(basis.size()));
  std::vector<double> values;
  for (const auto& b : basis) {
    const std::string key = beta_key(b, p.dim());
    if (!entries.contains(key)) throw InvalidInput("metric lacks entry " + key);
    values.push_back(entries[key].get<double>());
  }
  return {DiagonalHermitian::from_entries(p, k, values), j.value("shift", 0.0)};
}

inline LoadedMetric load_metric(const fs::path& path) {
  return metric_from_json(read_json(path), path.parent_path());
}

// ------------------------------------------------------------------ reports

inline json rationals(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

inline json exact(const Rational& r) { return {{"exact", to_string(r)}, {"decimal", to_double(r)}}; }

inline json to_json(const InvariantReport& r) {
  json j = {{"k", r.expansion.k},
            {"N_k", r.nk},
            {"expansion", {{"a", rationals(r.expansion.a)}, {"b", rationals(r.expansion.b)}}},
            {"DF", exact(r.df)},
            {"Chow_k", exact(r.chow)},
            {"Fut_k", exact(r.fut)},
            {"product", r.is_product},
            {"trivial", r.is_trivial},
            {"chow_sequence", rationals(r.chow_sequence)}};
  if (r.is_product) j["higher_futaki"] = rationals(r.higher_futaki);
  if (r.pnorm) {
    j["pnorm"] = {{"p", r.pnorm->p}, {"leading", to_string(r.pnorm->leading)}, {"value", r.pnorm->value}};
  } else {
    j["pnorm"] = nullptr;
  }
  return j;
}

inline json to_json(const QuadratureSpec& s) {
  return {{"half_width", s.half_width}, {"nodes", s.nodes},
          {"panel_order", s.panel_order}, {"max_panel_width", s.max_panel_width},
          {"tail_tol", s.tail_tol},       {"max_expansions", s.max_expansions}};
}

inline json to_json(const IterationTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"step_change", s.step_change}, {"residual", s.residual},
                     {"ding", s.ding}, {"damping", s.damping}});
  return {{"converged", t.converged}, {"iterations", t.iterations},
          {"ding_increases", t.ding_increases}, {"steps", steps}};
}

inline json to_json(const SlopeReport& r) {
  json series = json::array();
  for (const auto& p : r.series)
    series.push_back({{"t", p.t}, {"d", p.rates.ding}, {"Zk", p.balancing},
                      {"dZk", p.rates.balancing}, {"residual", p.rates.residual}});
  return {{"slope", r.slope},
          {"bracket", r.slope_bracket},
          {"Fut_k", exact(r.fut)},
          {"invariant_side", r.invariant_side},
          {"q_est", r.gap},
          {"Chow_k", exact(r.chow)},
          {"dZk_limit", r.z_rate_limit},
          {"Zk_invariant", r.z_invariant},
          {"product", r.is_product},
          {"series", series}};
}

inline json to_json(const LowerBound& lb) {
  return {{"p", lb.norm.p},   {"q", lb.q},     {"lhs", lb.lhs}, {"rhs", lb.rhs},
          {"margin", lb.margin}, {"DF", exact(lb.df)}, {"pnorm", lb.norm.value}};
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
    out += "\n";
  }
  return out;
}

/// Parses "a:b:step" into a time grid.
inline std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InvalidInput("bad time grid '" + s + "'");
    }
  }
  if (parts.size() != 3) throw InvalidInput("time grid is written start:stop:step");
  return time_grid(parts[0], parts[1], parts[2]);
}

}  // namespace fano::io
