// finslerlab: batch front end for the Finsler metric verification library.
// Subcommands evaluate tensor packs, run named check suites, exercise the line equation,
// compare profiles against the finsleroid energy, and sweep quantities for certified
// bounds. Reports go to stdout as versioned JSON (or --format table).
//
// Exit codes: 0 pass (or hypothesis-not-established), 1 residual failure, 2 usage/spec error.
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "finsler/errors.hpp"
#include "finsler/geom/riccati.hpp"
#include "finsler/rng.hpp"
#include "finsler/verify/oracle.hpp"
#include "finsler/verify/suites.hpp"

using namespace finsler;
using nlohmann::json;

namespace {

std::vector<double> parse_csv(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

PolyScalar parse_alpha_option(const std::string& text, int dim) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(errc::schema, std::string("--alpha is not valid JSON: ") + e.what());
  }
  if (!j.contains("terms")) fail(errc::schema, "--alpha must be a polynomial object with terms");
  std::vector<PolyScalar::Term> terms;
  for (const json& tj : j["terms"]) {
    PolyScalar::Term t;
    for (const json& e : tj.at("powers")) t.powers.push_back(e.get<int>());
    t.coeff = tj.at("coeff").get<double>();
    terms.push_back(std::move(t));
  }
  return PolyScalar(dim, std::move(terms));
}

json tensor1(const std::vector<double>& v) { return json(v); }

json tensor2(const std::vector<double>& v, int n) {
  json rows = json::array();
  for (int i = 0; i < n; ++i)
    rows.push_back(std::vector<double>(v.begin() + (size_t)i * n, v.begin() + (size_t)(i + 1) * n));
  return rows;
}

json tensor3(const std::vector<double>& v, int n) {
  json out = json::array();
  for (int i = 0; i < n; ++i)
    out.push_back(tensor2({v.begin() + (size_t)i * n * n, v.begin() + (size_t)(i + 1) * n * n}, n));
  return out;
}

json tensor4(const std::vector<double>& v, int n) {
  json out = json::array();
  for (int i = 0; i < n; ++i)
    out.push_back(
        tensor3({v.begin() + (size_t)i * n * n * n, v.begin() + (size_t)(i + 1) * n * n * n}, n));
  return out;
}

int status_to_exit(const CheckReport& rep) {
  if (rep.status == "fail") return 1;
  return 0;
}

int run_check(const std::string& spec_path, const std::string& suite, const SuiteOptions& opt,
              const std::string& format) {
  MetricSpec spec = MetricSpec::from_file(spec_path);
  CheckReport rep = run_suite(suite, spec, opt);
  std::cout << (format == "table" ? rep.to_table() : rep.to_json()) << "\n";
  return status_to_exit(rep);
}

int run_eval(const std::string& spec_path, const std::string& xs, const std::string& ys,
             const std::string& tensor, int ycap) {
  MetricSpec spec = MetricSpec::from_file(spec_path);
  ChartPoint p{parse_csv(xs), parse_csv(ys)};
  if ((int)p.x.size() != spec.dim || (int)p.y.size() != spec.dim)
    fail(errc::config, "point coordinates must have the spec dimension");
  TensorPack pk = evaluate_pack(spec, p, {spec.dim, 1, ycap});
  const int n = pk.n;
  json out;
  out["version"] = 1;
  out["spec_digest"] = spec.digest();
  out["x"] = p.x;
  out["y"] = p.y;
  if (tensor == "g" || tensor == "pack") {
    out["E"] = pk.E;
    out["F"] = pk.F;
    out["g"] = tensor2(pk.g, n);
    out["g_inv"] = tensor2(pk.g_inv, n);
  }
  if (tensor == "cartan" || tensor == "pack") {
    out["cartan"] = tensor3(pk.cartan, n);
    out["cartan_raised"] = tensor3(pk.cartan_up, n);
    out["vv_curvature"] = tensor4(pk.q_up, n);
  }
  if (tensor == "spray" || tensor == "pack") {
    out["spray"] = tensor1(pk.spray);
    out["spray_d1"] = tensor2(pk.spray_d1, n);
    out["spray_d2"] = tensor3(pk.spray_d2, n);
  }
  if (tensor == "berwald" || tensor == "pack") out["berwald_mixed"] = tensor4(pk.berwald_mixed, n);
  if (tensor == "landsberg" || tensor == "pack") out["landsberg"] = tensor3(pk.landsberg, n);
  if (tensor == "pack") out["l"] = tensor1(pk.l);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_riccati(double K, double fstar, double t0, double t1, int steps) {
  auto traj = integrate_numerically(K, fstar, t0, t1, steps);
  const double estar = 0.5 * fstar * fstar;
  double max_err = 0;
  std::vector<RiccatiSample> closed;
  for (const auto& s : traj) {
    const double want = closed_form_z(K, fstar, estar, s.t);
    max_err = std::max(max_err, std::abs(s.z - want));
    closed.push_back({s.t, want, closed_form_z_prime(K, fstar, estar, s.t)});
  }
  json out;
  out["version"] = 1;
  out["K"] = K;
  out["fstar"] = fstar;
  out["steps"] = steps;
  out["t_range"] = {t0, t1};
  out["initial_slope"] = closed_form_z(K, fstar, estar, 0.0);
  out["closed_form_residual"] = riccati_residual(closed, fstar * fstar, 1.0);
  out["integrator_max_error"] = max_err;
  const bool pass = max_err <= 1e-6 && out["closed_form_residual"].get<double>() <= 1e-10;
  out["status"] = pass ? "pass" : "fail";
  std::cout << out.dump(2) << "\n";
  return pass ? 0 : 1;
}

int run_compare(const std::string& spec_path, int grid, const SuiteOptions& base_opt,
                const std::string& format) {
  MetricSpec spec = MetricSpec::from_file(spec_path);
  SuiteOptions opt = base_opt;
  opt.grid = grid;
  CheckReport rep = run_suite("compare", spec, opt);
  std::cout << (format == "table" ? rep.to_table() : rep.to_json()) << "\n";
  return status_to_exit(rep);
}

int run_sweep(const std::string& spec_path, const std::string& quantity, int samples,
              const SuiteOptions& opt) {
  MetricSpec spec = MetricSpec::from_file(spec_path);
  const MetricSpec& base = suite_base_metric(spec);
  const PolyScalar alpha = suite_alpha(spec, opt);

  oracle::PointSampler sampler = [&](uint64_t i, std::vector<double>& x, std::vector<double>& y) {
    ChartPoint p = sample_admissible_point(base, opt.seed, i);
    x = p.x;
    y = p.y;
  };
  oracle::PointFunction f;
  if (quantity == "indicatrix-curvature") {
    f = [&](const std::vector<double>& x, const std::vector<double>& y) {
      TensorPack pk = evaluate_pack(base, {x, y});
      std::vector<double> u((size_t)base.dim), w((size_t)base.dim);
      for (int i = 0; i < base.dim; ++i) {
        u[(size_t)i] = uniform(opt.seed ^ 0x5a5a, (uint64_t)(x[0] * 1e6) + (uint64_t)i, -1, 1);
        w[(size_t)i] = uniform(opt.seed ^ 0xa5a5, (uint64_t)(y[0] * 1e6) + (uint64_t)i, -1, 1);
      }
      return indicatrix_sectional_curvature(pk, u, w);
    };
  } else if (quantity == "gram1" || quantity == "gram2") {
    f = [&, quantity](const std::vector<double>& x, const std::vector<double>& y) {
      ConformalPack c = build_conformal_pack(base, alpha, {x, y});
      GramReport g = gram_tests(c);
      if (quantity == "gram1") return g.gram1 / g.gram1_scale;
      if (!g.xstar_available)
        fail(errc::inadmissible_point, "associated metric not positive definite here");
      return g.gram2 / g.gram2_scale;
    };
  } else if (quantity == "b-contraction") {
    f = [&](const std::vector<double>& x, const std::vector<double>& y) {
      ConformalPack c = build_conformal_pack(base, alpha, {x, y});
      TensorPack w = wrapped_pack(base, alpha, {x, y});
      InvarianceSample s = contracted_invariance_sample(c, w);
      return s.mixed_contracted / s.scale;
    };
  } else {
    fail(errc::config, "unknown sweep quantity: " + quantity);
  }

  oracle::SweepResult r = oracle::sweep_min(f, sampler, (size_t)samples);
  json out;
  out["version"] = 1;
  out["quantity"] = quantity;
  out["spec_digest"] = spec.digest();
  out["seed"] = opt.seed;
  out["samples"] = samples;
  out["admissible"] = r.admissible;
  out["skipped"] = r.skipped;
  out["min_abs"] = r.min_abs;
  out["max_abs"] = r.max_abs;
  out["argmin_x"] = r.argmin_x;
  out["argmin_y"] = r.argmin_y;
  std::cout << out.dump(2) << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"finslerlab: numerical verification of Finsler conformal rigidity machinery"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  app.add_option("--format", format)->check(CLI::IsMember({"json", "table"}));

  SuiteOptions opt;
  std::string spec_path, suite = "all", xs, ys, tensor = "pack", alpha_text, quantity;
  double K = 0, fstar = 1, t0 = -5, t1 = 5;
  int steps = 10000, grid = 101, sweep_samples = 1000, ycap = 5;

  CLI::App* check = app.add_subcommand("check", "run a named check suite against a spec");
  check->add_option("--spec", spec_path)->required();
  check->add_option("--suite", suite)
      ->check(CLI::IsMember({"identities", "conformal", "rigidity", "riccati", "compare", "all"}));
  check->add_option("--samples", opt.samples);
  check->add_option("--seed", opt.seed);
  check->add_option("--tol-scale", opt.tol_scale);
  check->add_option("--directions", opt.directions);
  check->add_option("--grid", opt.grid);
  check->add_option("--alpha", alpha_text, "scale function as a polynomial JSON object");

  CLI::App* eval = app.add_subcommand("eval", "evaluate tensors at one point");
  eval->add_option("--spec", spec_path)->required();
  eval->add_option("--x", xs)->required();
  eval->add_option("--y", ys)->required();
  eval->add_option("--tensor", tensor)
      ->check(CLI::IsMember({"g", "cartan", "spray", "berwald", "landsberg", "pack"}));
  eval->add_option("--ycap", ycap, "direction-derivative budget (>= 5)")
      ->check(CLI::Range(5, 12));

  CLI::App* ric = app.add_subcommand("riccati", "closed form vs numerical integration");
  ric->add_option("--K", K)->required();
  ric->add_option("--fstar", fstar)->required();
  ric->add_option("--t0", t0);
  ric->add_option("--t1", t1);
  ric->add_option("--steps", steps);

  CLI::App* cmp = app.add_subcommand("compare", "profile vs finsleroid energy along the line");
  cmp->add_option("--spec", spec_path)->required();
  cmp->add_option("--grid", grid);
  cmp->add_option("--seed", opt.seed);
  cmp->add_option("--alpha", alpha_text, "scale function as a polynomial JSON object");

  CLI::App* swp = app.add_subcommand("sweep", "sweep a quantity for certified bounds");
  swp->add_option("--spec", spec_path)->required();
  swp->add_option("--quantity", quantity)
      ->required()
      ->check(CLI::IsMember({"indicatrix-curvature", "gram1", "gram2", "b-contraction"}));
  swp->add_option("--samples", sweep_samples);
  swp->add_option("--seed", opt.seed);
  swp->add_option("--alpha", alpha_text, "scale function as a polynomial JSON object");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return 2;
  }

  try {
    if (!alpha_text.empty()) {
      MetricSpec probe = MetricSpec::from_file(spec_path);
      opt.alpha_override = parse_alpha_option(alpha_text, probe.dim);
    }
    if (check->parsed()) return run_check(spec_path, suite, opt, format);
    if (eval->parsed()) return run_eval(spec_path, xs, ys, tensor, ycap);
    if (ric->parsed()) return run_riccati(K, fstar, t0, t1, steps);
    if (cmp->parsed()) return run_compare(spec_path, grid, opt, format);
    if (swp->parsed()) return run_sweep(spec_path, quantity, sweep_samples, opt);
  } catch (const error& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
