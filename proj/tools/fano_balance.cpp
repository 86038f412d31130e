#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fano_balance/verification.hpp"

namespace {

using fano::io::json;

struct QuadFlags {
  int nodes = 0;
  double box = 0;
  double tail_tol = 0;

  fano::QuadratureSpec spec() const {
    fano::QuadratureSpec s;
    if (nodes > 0) s.nodes = nodes;
    if (box > 0) s.half_width = box;
    if (tail_tol > 0) s.tail_tol = tail_tol;
    return s;
  }
};

void add_quad_flags(CLI::App* app, QuadFlags& q) {
  app->add_option("--nodes", q.nodes, "minimum quadrature nodes per axis")->check(CLI::PositiveNumber);
  app->add_option("--box", q.box, "quadrature box half-width")->check(CLI::PositiveNumber);
  app->add_option("--tail-tol", q.tail_tol, "relative tail tolerance")->check(CLI::PositiveNumber);
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) std::cout << j.dump(2) << "\n";
  else fano::io::write_json(out, j);
}

fano::DiagonalHermitian metric_or_identity(const std::string& path, const fano::ToricTestConfig& tc) {
  if (path.empty()) return fano::DiagonalHermitian::identity(tc.polytope(), tc.k());
  auto m = fano::io::load_metric(path).h;
  m.check_compatible(fano::DiagonalHermitian::identity(tc.polytope(), tc.k()));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized Ding functional lab on toric Fano manifolds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(FANO_BALANCE_VERSION));
  QuadFlags quad;
  std::string out;

  auto* list = app.add_subcommand("list-builtins", "builtin reflexive polytopes");
  list->add_option("--out", out, "write JSON here");

  std::string config_path, h_path;
  int p = 2;
  std::int64_t m_max = 12;
  auto* inv = app.add_subcommand("invariants", "exact invariants of a test configuration");
  inv->add_option("--config", config_path, "test configuration file")->required();
  inv->add_option("--p", p, "even exponent of the norm");
  inv->add_option("--m-max", m_max, "length of the Chow sequence");
  inv->add_option("--out", out, "write JSON here");

  std::string polytope;
  std::int64_t k = 1;
  double tol = 1e-10;
  int max_iter = 500;
  std::string init_path, trace_path;
  auto* bal = app.add_subcommand("balance", "Donaldson iteration towards a balanced metric");
  bal->add_option("--polytope", polytope, "builtin name or polytope file")->required();
  bal->add_option("--k", k, "level")->check(CLI::PositiveNumber);
  bal->add_option("--tol", tol, "convergence tolerance")->check(CLI::PositiveNumber);
  bal->add_option("--max-iter", max_iter, "iteration cap")->check(CLI::PositiveNumber);
  bal->add_option("--init", init_path, "starting metric (default identity)");
  bal->add_option("--trace", trace_path, "write the iteration trace here");
  bal->add_option("--out", out, "write the final metric here");
  add_quad_flags(bal, quad);

  std::string grid = "0:0:1";
  auto* fun = app.add_subcommand("functionals", "energy functionals along a Bergman ray");
  fun->set_help_flag("--help", "print help");
  fun->add_option("--h", h_path, "metric file")->required();
  fun->add_option("--config", config_path, "test configuration generating the ray");
  fun->add_option("--t-grid", grid, "start:stop:step");
  fun->add_option("--out", out, "write CSV here");
  add_quad_flags(fun, quad);

  double t_max = 40, t_step = 2, t_min = 0;
  std::string csv_path;
  auto* slope = app.add_subcommand("slope", "slope of the quantized Ding functional at infinity");
  slope->add_option("--config", config_path, "test configuration file")->required();
  slope->set_help_flag("--help", "print help");
  slope->add_option("--h", h_path, "starting metric (default identity)");
  slope->add_option("--t-max", t_max, "last time")->check(CLI::PositiveNumber);
  slope->add_option("--t-min", t_min, "first time");
  slope->add_option("--step", t_step, "grid step")->check(CLI::PositiveNumber);
  slope->add_option("--csv", csv_path, "write the series as CSV here");
  slope->add_option("--out", out, "write JSON here");
  add_quad_flags(slope, quad);

  auto* lb = app.add_subcommand("lowerbound", "L^q norm of B against -DF/||.||_p");
  lb->add_option("--config", config_path, "test configuration file")->required();
  lb->set_help_flag("--help", "print help");
  lb->add_option("--h", h_path, "metric (default identity)");
  lb->add_option("--p", p, "even exponent");
  lb->add_option("--out", out, "write JSON here");
  add_quad_flags(lb, quad);

  bool quick = false, full = false, negative = false;
  auto* ver = app.add_subcommand("verify-all", "run every acceptance check");
  auto* qf = ver->add_flag("--quick", quick, "quick profile (default)");
  ver->add_flag("--full", full, "full profile")->excludes(qf);
  ver->add_flag("--negative-control", negative, "flip the weight sign of the kink fixture");
  std::vector<int> only;
  ver->add_option("--criterion", only, "run only these criteria")->check(CLI::Range(1, 11));
  ver->add_option("--out", out, "write the report here");
  add_quad_flags(ver, quad);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (list->parsed()) {
      json j = json::array();
      for (const auto& name : fano::builtin_names()) {
        auto poly = fano::builtin_polytope(name);
        j.push_back({{"name", name}, {"dim", poly.dim()}, {"volume", fano::to_string(fano::volume(poly))},
                     {"vertices", fano::io::to_json(poly)["vertices"]}});
        if (out.empty())
          std::cout << name << " dim " << poly.dim() << " volume " << fano::to_string(fano::volume(poly)) << "\n";
      }
      if (!out.empty()) fano::io::write_json(out, j);
      return 0;
    }
    if (inv->parsed()) {
      auto tc = fano::io::load_config(config_path);
      emit(fano::io::to_json(fano::invariant_report(tc, p, m_max)), out);
      return 0;
    }
    if (bal->parsed()) {
      auto poly = fano::io::resolve_polytope(json(polytope));
      if (!poly.is_reflexive()) throw fano::InvalidInput("polytope is not reflexive");
      auto init = init_path.empty() ? fano::DiagonalHermitian::identity(poly, k)
                                    : fano::io::load_metric(init_path).h;
      fano::IterationOptions opt;
      opt.tol = tol;
      opt.max_iter = max_iter;
      opt.spec = quad.spec();
      try {
        auto trace = fano::donaldson_iterate(init, opt);
        if (!trace_path.empty()) fano::io::write_json(trace_path, fano::io::to_json(trace));
        emit(fano::io::to_json(trace.final_metric), out);
        std::cerr << "converged after " << trace.iterations << " iterations\n";
        return 0;
      } catch (const fano::NonConvergence& e) {
        if (!trace_path.empty()) fano::io::write_json(trace_path, fano::io::to_json(e.trace()));
        std::cerr << e.what() << "\n";
        return 2;
      }
    }
    if (fun->parsed()) {
      auto m = fano::io::load_metric(h_path).h;
      std::vector<double> w(m.size(), 0.0);
      if (!config_path.empty()) {
        auto tc = fano::io::load_config(config_path);
        m.check_compatible(fano::DiagonalHermitian::identity(tc.polytope(), tc.k()));
        w = fano::generator(tc).weights_double();
      }
      auto ref = fano::make_reference(m.polytope(), m.k(), quad.spec());
      std::vector<std::vector<double>> rows;
      for (double t : fano::io::parse_grid(grid)) {
        auto s = fano::QuadratureSpec::for_time(t, quad.spec());
        auto ht = fano::bergman_ray(m, w, t);
        auto v = fano::functional_suite(ht, ref, s);
        auto r = fano::ray_rates(ht, w, s);
        rows.push_back({t, v.E, v.L, v.D, v.Ek, v.Zk, v.Dk, r.ding, r.residual});
      }
      std::string text = fano::io::csv({"t", "E", "L", "D", "Ek", "Zk", "Dk", "ding_derivative", "residual"}, rows);
      if (out.empty()) std::cout << text;
      else fano::io::write_text(out, text);
      return 0;
    }
    if (slope->parsed()) {
      auto tc = fano::io::load_config(config_path);
      auto m = metric_or_identity(h_path, tc);
      fano::RayOptions ro;
      ro.spec = quad.spec();
      auto rep = fano::slope_at_infinity(m, tc, fano::time_grid(t_min, t_max, t_step), ro);
      if (!csv_path.empty()) {
        std::vector<std::vector<double>> rows;
        for (const auto& pt : rep.series) rows.push_back({pt.t, pt.rates.ding, pt.balancing, pt.rates.balancing});
        fano::io::write_text(csv_path, fano::io::csv({"t", "d", "Zk", "dZk"}, rows));
      }
      emit(fano::io::to_json(rep), out);
      return 0;
    }
    if (lb->parsed()) {
      auto tc = fano::io::load_config(config_path);
      double shift = 0;
      fano::DiagonalHermitian m = fano::DiagonalHermitian::identity(tc.polytope(), tc.k());
      if (!h_path.empty()) {
        auto loaded = fano::io::load_metric(h_path);
        m = loaded.h;
        shift = loaded.shift;
        m.check_compatible(fano::DiagonalHermitian::identity(tc.polytope(), tc.k()));
      }
      auto r = fano::lower_bound_check(fano::ToricPotential(m, shift), tc, p, quad.spec());
      emit(fano::io::to_json(r), out);
      return r.margin >= -1e-6 ? 0 : 2;
    }
    if (ver->parsed()) {
      fano::VerifyOptions opt;
      opt.profile = full ? fano::Profile::full : fano::Profile::quick;
      opt.spec = quad.spec();
      opt.corrupt_weights = negative;
      auto report = only.empty() ? fano::verify_all(opt) : fano::verify_selected(only, opt);
      for (const auto& c : report.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.criterion << " " << c.name << "\n";
      if (!out.empty()) {
        fano::io::write_json(out, fano::io::to_json(report));
        std::filesystem::path tpath(out);
        tpath.replace_extension(".timing.json");
        fano::io::write_json(tpath, fano::io::timing_json(report));
      } else {
        std::cout << fano::io::to_json(report).dump(2) << "\n";
      }
      return report.all_pass() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "fano-balance: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
