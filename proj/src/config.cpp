#include "hodiff/config.hpp"

#include <fstream>
#include <sstream>

#include "hodiff/error.hpp"
#include "hodiff/identity.hpp"
#include "hodiff/multiadditive.hpp"
#include "hodiff/sampling.hpp"

namespace hodiff {

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
  throw ConfigError("config " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const json& require(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) config_fail(path, std::string("missing '") + key + "'");
  return obj.at(key);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) config_fail(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) config_fail(path, "expected an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) config_fail(path, "expected a string");
  return v.get<std::string>();
}

Interval as_interval(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) config_fail(path, "expected [lo, hi]");
  const double lo = as_number(v[0], path + "/0");
  const double hi = as_number(v[1], path + "/1");
  if (!(lo < hi)) config_fail(path, "interval needs lo < hi");
  return {lo, hi};
}

SmoothFn as_function(const json& v, const std::string& path) {
  if (v.is_number()) return fn_constant(v.get<double>());
  const std::string text = as_string(v, path);
  try {
    return fn_from_text(text);
  } catch (const SyntaxError& e) {
    config_fail(path, std::string(e.what()) + " in \"" + text + "\"");
  }
}

std::vector<SmoothFn> function_list(const json& obj, const std::string& path, const char* key,
                                    std::size_t expected) {
  if (!obj.contains(key)) return std::vector<SmoothFn>(expected, fn_constant(0.0));
  const json& arr = obj.at(key);
  const std::string p = path + "/" + key;
  if (!arr.is_array()) config_fail(p, "expected an array of expressions");
  if (arr.size() != expected) {
    config_fail(p, "expected " + std::to_string(expected) + " coefficients, got " +
                       std::to_string(arr.size()));
  }
  std::vector<SmoothFn> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_function(arr[i], p + "/" + std::to_string(i)));
  return out;
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) config_fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "/" + std::to_string(i)));
  return out;
}

Domain parse_domain(const json& cfg) {
  const json& d = require(cfg, "", "domain");
  const json* list = &d;
  std::string path = "/domain";
  if (d.is_object()) {
    list = &require(d, path, "intervals");
    path += "/intervals";
  }
  if (!list->is_array() || list->empty()) config_fail(path, "expected a nonempty list of intervals");
  std::vector<Interval> ivs;
  if ((*list)[0].is_number()) {
    ivs.push_back(as_interval(*list, path));
  } else {
    for (std::size_t i = 0; i < list->size(); ++i) {
      ivs.push_back(as_interval((*list)[i], path + "/" + std::to_string(i)));
    }
  }
  for (const auto& iv : ivs) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) config_fail(path, "endpoints must be finite");
  }
  try {
    return Domain(std::move(ivs));
  } catch (const StructuralError& e) {
    config_fail(path, e.what());
  }
}

Operator parse_operator(const json& cfg, const Domain& domain, int& n) {
  const std::string path = "/operator";
  const json& op = require(cfg, "", "operator");
  const std::string kind = as_string(require(op, path, "kind"), path + "/kind");
  n = as_int(require(op, path, "n"), path + "/n");
  if (n < 1 || n > 8) config_fail(path + "/n", "n must lie in 1..8");
  if (kind == "canonical") {
    auto c = function_list(op, path, "c", static_cast<std::size_t>(n));
    auto d = function_list(op, path, "d", static_cast<std::size_t>(n));
    return make_canonical(std::move(c), std::move(d), domain);
  }
  if (kind == "blackbox-builtin") {
    const std::string name = as_string(require(op, path, "name"), path + "/name");
    if (name == "square") return builtin::square(domain);
    if (name == "translate") {
      const double shift = op.contains("shift") ? as_number(op["shift"], path + "/shift") : 0.5;
      return builtin::translate(shift, domain);
    }
    if (name == "third-derivative") return builtin::third_derivative(domain);
    if (name == "km-entropy") return builtin::km_entropy(domain);
    config_fail(path + "/name", "unknown builtin '" + name +
                                    "' (square, translate, third-derivative, km-entropy)");
  }
  config_fail(path + "/kind", "unknown operator kind '" + kind + "' (canonical, blackbox-builtin)");
}

const char* const kCheckTypes[] = {"suite", "id_n", "id_single", "units", "localization",
                                   "annihilation", "degree"};

}  // namespace

RunConfig load_config(const json& cfg) {
  if (!cfg.is_object()) config_fail("", "top level must be an object");
  RunConfig run;
  run.domain = parse_domain(cfg);
  run.op = parse_operator(cfg, run.domain, run.n);
  if (cfg.contains("seed")) {
    if (!cfg["seed"].is_number_unsigned()) config_fail("/seed", "expected a nonnegative integer");
    run.seed = cfg["seed"].get<std::uint64_t>();
  }
  if (cfg.contains("checks")) {
    const json& checks = cfg["checks"];
    if (!checks.is_array()) config_fail("/checks", "expected an array");
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const std::string p = "/checks/" + std::to_string(i);
      CheckSpec spec;
      spec.path = p;
      spec.type = as_string(require(checks[i], p, "type"), p + "/type");
      if (std::find(std::begin(kCheckTypes), std::end(kCheckTypes), spec.type) == std::end(kCheckTypes)) {
        config_fail(p + "/type", "unknown check type '" + spec.type + "'");
      }
      spec.name = checks[i].contains("name") ? as_string(checks[i]["name"], p + "/name") : spec.type;
      spec.params = checks[i];
      run.checks.push_back(std::move(spec));
    }
  }
  if (cfg.contains("recovery")) {
    const std::string p = "/recovery";
    const json& r = cfg["recovery"];
    if (!r.is_object()) config_fail(p, "expected an object");
    RecoverySpec spec;
    if (r.contains("grid")) {
      const json& g = r["grid"];
      if (g.is_array()) {
        spec.grid = number_list(g, p + "/grid");
      } else {
        spec.grid = run.domain.grid(as_int(require(g, p + "/grid", "points"), p + "/grid/points"));
      }
    } else {
      spec.grid = run.domain.grid(21);
    }
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
      if (!run.domain.contains(spec.grid[i])) {
        config_fail(p + "/grid/" + std::to_string(i), "grid point outside the domain");
      }
    }
    if (r.contains("lambdas")) spec.probes.lambdas = number_list(r["lambdas"], p + "/lambdas");
    if (r.contains("mus")) spec.probes.mus = number_list(r["mus"], p + "/mus");
    if (r.contains("holdout")) {
      const json& h = r["holdout"];
      if (!h.is_array()) config_fail(p + "/holdout", "expected an array of expressions");
      for (std::size_t i = 0; i < h.size(); ++i) {
        spec.holdout.push_back(as_function(h[i], p + "/holdout/" + std::to_string(i)));
      }
    } else {
      spec.holdout = {fn_from_text("sin(x)"), fn_from_text("x^3"), fn_from_text("x*exp(x)")};
    }
    if (r.contains("tol_abs")) spec.tol.abs = as_number(r["tol_abs"], p + "/tol_abs");
    if (r.contains("tol_rel")) spec.tol.rel = as_number(r["tol_rel"], p + "/tol_rel");
    run.recovery = std::move(spec);
  }
  return run;
}

RunConfig load_config_text(const std::string& text) {
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  return load_config(cfg);
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str());
}

// ---------------------------------------------------------------------------

namespace {

Tolerance check_tolerance(const CheckSpec& spec, Tolerance base, const Overrides& ov) {
  if (spec.params.contains("tol_abs")) base.abs = as_number(spec.params["tol_abs"], spec.path + "/tol_abs");
  if (spec.params.contains("tol_rel")) base.rel = as_number(spec.params["tol_rel"], spec.path + "/tol_rel");
  if (ov.tol_abs) base.abs = *ov.tol_abs;
  if (ov.tol_rel) base.rel = *ov.tol_rel;
  return base;
}

std::uint64_t check_seed(const CheckSpec& spec, const RunConfig& run, const Overrides& ov) {
  if (ov.seed) return *ov.seed;
  if (spec.params.contains("seed")) {
    if (!spec.params["seed"].is_number_unsigned()) config_fail(spec.path + "/seed", "expected a nonnegative integer");
    return spec.params["seed"].get<std::uint64_t>();
  }
  return run.seed;
}

int int_param(const CheckSpec& spec, const char* key, int fallback) {
  return spec.params.contains(key) ? as_int(spec.params[key], spec.path + "/" + key) : fallback;
}

std::vector<double> points_param(const CheckSpec& spec, const Domain& domain) {
  if (spec.params.contains("points")) {
    auto pts = number_list(spec.params["points"], spec.path + "/points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!domain.contains(pts[i])) config_fail(spec.path + "/points/" + std::to_string(i), "point outside the domain");
    }
    return pts;
  }
  return domain.grid(int_param(spec, "grid_points", 21));
}

FamilyParams family_param(const CheckSpec& spec) {
  FamilyParams fp;
  if (!spec.params.contains("family")) return fp;
  const std::string f = as_string(spec.params["family"], spec.path + "/family");
  if (f == "mixed") fp.family = FunctionFamily::Mixed;
  else if (f == "polynomial") fp.family = FunctionFamily::Polynomial;
  else if (f == "exponential") fp.family = FunctionFamily::Exponential;
  else if (f == "exp-product") fp.family = FunctionFamily::ExpProduct;
  else config_fail(spec.path + "/family", "unknown family '" + f + "'");
  return fp;
}

std::vector<std::string> names(std::span<const SmoothFn> fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(f.descriptor());
  return out;
}

ResidualReport run_one(const RunConfig& run, const CheckSpec& spec, const Overrides& ov) {
  const Tolerance tol = check_tolerance(spec, Tolerance{}, ov);
  ResidualReport report;
  if (spec.type == "suite") {
    SuiteConfig sc;
    sc.seed = check_seed(spec, run, ov);
    sc.tuples = int_param(spec, "samples", 10);
    sc.grid = points_param(spec, run.domain);
    sc.family = family_param(spec);
    sc.tol = tol;
    report = run_check_suite(run.op, run.n, sc, ov.jobs);
  } else if (spec.type == "id_n" || spec.type == "id_single") {
    const bool single = spec.type == "id_single";
    std::vector<SmoothFn> fs;
    if (single) {
      fs.push_back(as_function(require(spec.params, spec.path, "function"), spec.path + "/function"));
    } else {
      const json& arr = require(spec.params, spec.path, "functions");
      if (!arr.is_array() || arr.size() != static_cast<std::size_t>(run.n) + 1) {
        config_fail(spec.path + "/functions", "expected n+1 = " + std::to_string(run.n + 1) + " expressions");
      }
      for (std::size_t i = 0; i < arr.size(); ++i) {
        fs.push_back(as_function(arr[i], spec.path + "/functions/" + std::to_string(i)));
      }
    }
    ReportBuilder b(spec.type, run.n, tol);
    for (double x : points_param(spec, run.domain)) {
      try {
        const Residual r = single ? id_single_residual(run.op, fs.front(), run.n, x)
                                  : id_n_residual(run.op, fs, x);
        b.add(r, x, names(fs));
      } catch (const Error& e) {
        b.add_error(e.what());
      }
    }
    report = b.finish();
  } else if (spec.type == "units") {
    const auto grid = points_param(spec, run.domain);
    report = check_units(run.op, grid, tol);
  } else if (spec.type == "localization") {
    const SmoothFn f = as_function(require(spec.params, spec.path, "f"), spec.path + "/f");
    const Interval J = as_interval(require(spec.params, spec.path, "interval"), spec.path + "/interval");
    const json& bump = require(spec.params, spec.path, "bump");
    const std::string bp = spec.path + "/bump";
    const Interval support = as_interval(require(bump, bp, "support"), bp + "/support");
    const Interval plateau = as_interval(require(bump, bp, "plateau"), bp + "/plateau");
    if (support.hi > J.lo && support.lo < J.hi) config_fail(bp + "/support", "bump support must not meet the interval");
    const double amp = spec.params.contains("amplitude") ? as_number(spec.params["amplitude"], spec.path + "/amplitude") : 1.0;
    SmoothFn b = [&] {
      try {
        return fn_bump(support, plateau);
      } catch (const StructuralError& e) {
        config_fail(bp, e.what());
      }
    }();
    const SmoothFn f2 = fn_scale_add(1.0, f, amp, b);
    const auto grid = Domain({J}).grid(int_param(spec, "grid_points", 21));
    report = check_localization(run.op, f, f2, J, grid, tol);
  } else if (spec.type == "annihilation") {
    const int j = as_int(require(spec.params, spec.path, "j"), spec.path + "/j");
    const auto grid = points_param(spec, run.domain);
    report = check_poly_annihilation(run.op, j, grid, tol);
  } else if (spec.type == "degree") {
    const Tolerance dtol = check_tolerance(spec, Tolerance{1e-9, 1e-6}, ov);
    const Operator P = conjugate_exp(run.op);
    Rng rng(check_seed(spec, run, ov));
    const FamilyParams fp{FunctionFamily::Polynomial, 2, 1.0};
    const int samples = int_param(spec, "samples", 10);
    const auto grid = points_param(spec, run.domain);
    ReportBuilder b("degree", run.n, dtol);
    for (int s = 0; s < samples; ++s) {
      const SmoothFn g = random_function(rng, fp);
      const FnPerturbation hs = random_tuple(rng, run.n + 1, fp);
      std::vector<std::string> desc{g.descriptor()};
      for (const auto& h : hs) desc.push_back(h.descriptor());
      for (double x : grid) {
        try {
          b.add(frechet_degree_residual(P, g, hs, x), x, desc);
        } catch (const Error& e) {
          b.add_error(e.what());
        }
      }
    }
    report = b.finish();
  }
  report.identity = spec.name;
  return report;
}

}  // namespace

std::vector<ResidualReport> run_checks(const RunConfig& run, const Overrides& ov) {
  std::vector<ResidualReport> out;
  for (const auto& spec : run.checks) out.push_back(run_one(run, spec, ov));
  return out;
}

RecoveryOutcome run_recovery(const RunConfig& run, const Overrides& ov) {
  if (!run.recovery) throw ConfigError("config /: missing 'recovery' section");
  const auto& spec = *run.recovery;
  Tolerance tol = spec.tol;
  if (ov.tol_abs) tol.abs = *ov.tol_abs;
  if (ov.tol_rel) tol.rel = *ov.tol_rel;
  RecoveryOutcome out;
  out.profile = recover_profile(run.op, run.n, spec.grid, spec.probes, ov.jobs);
  out.validation = validate_recovery(run.op, out.profile, spec.holdout, tol);
  return out;
}

nlohmann::json profile_to_json(const CoefficientProfile& p) {
  json rows = json::array();
  for (const auto& row : p.rows) {
    json r{{"x", row.x}};
    if (row.result) {
      r["c"] = row.result->c;
      r["d"] = row.result->d;
      r["condition_c"] = row.result->condition_c;
      r["condition_d"] = row.result->condition_d;
      if (!row.result->warnings.empty()) r["warnings"] = row.result->warnings;
    } else {
      r["error"] = row.error;
    }
    rows.push_back(std::move(r));
  }
  return json{{"n", p.n}, {"rows", std::move(rows)}, {"max_adjacent_jump", p.max_adjacent_jump},
              {"failures", p.failures()}};
}

int exit_code(const std::vector<ResidualReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const ResidualReport& r) { return r.pass; }) ? 0 : 1;
}

}  // namespace hodiff
