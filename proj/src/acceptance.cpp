#include "hodiff/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "hodiff/error.hpp"
#include "hodiff/expr.hpp"
#include "hodiff/identity.hpp"
#include "hodiff/logderiv.hpp"
#include "hodiff/multiadditive.hpp"
#include "hodiff/recovery.hpp"
#include "hodiff/sampling.hpp"

namespace hodiff::acceptance {

namespace {

using nlohmann::json;

const Domain& suite_domain() {
  static const Domain d = Domain::interval(-2.0, 2.0);
  return d;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (a + 1) + 0xBF58476D1CE4E5B9ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// ---------------------------------------------------------------------------

struct SuiteTotals {
  double max_abs = 0.0;
  double max_normalized = 0.0;
  double max_diag_gap = 0.0;
  std::size_t samples = 0;
  std::size_t errors = 0;
  bool all_pass = true;
};

struct SuiteSweep {
  std::vector<SuiteTotals> per_n;  // index n-1
};

SuiteSweep converse_sweep(const Options& opts) {
  SuiteSweep sweep;
  for (int n = 1; n <= 4; ++n) {
    SuiteTotals t;
    Rng rng(mix(opts.seed, 1, static_cast<std::uint64_t>(n)));
    for (int i = 0; i < 100; ++i) {
      const Operator D = random_canonical(rng, n, suite_domain());
      SuiteConfig cfg;
      cfg.seed = mix(opts.seed, 100 + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(i));
      cfg.tuples = 10;
      cfg.grid = suite_domain().grid(21);
      const SuiteResult r = run_check_suite_detailed(D, n, cfg, opts.jobs);
      t.max_abs = std::max(t.max_abs, r.id_n.max_abs_residual);
      t.max_normalized = std::max(t.max_normalized, r.id_n.max_normalized);
      t.max_diag_gap = std::max(t.max_diag_gap, r.max_diagonal_gap);
      t.samples += r.id_n.samples;
      t.errors += r.id_n.errors.size() + r.id_single.errors.size();
      t.all_pass = t.all_pass && r.id_n.pass;
    }
    sweep.per_n.push_back(t);
  }
  return sweep;
}

CriterionResult criterion_converse(const SuiteSweep& sweep, double seconds, const Options& opts) {
  CriterionResult c{1, "converse suite: canonical operators satisfy id_n", true, "", json::object(), seconds};
  json per = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < sweep.per_n.size(); ++i) {
    const auto& t = sweep.per_n[i];
    per.push_back({{"n", i + 1}, {"samples", t.samples}, {"max_abs_residual", t.max_abs},
                   {"max_normalized", t.max_normalized}, {"errors", t.errors}});
    c.pass = c.pass && t.errors == 0 && t.all_pass && t.max_normalized <= 1.0 && t.samples == 100 * 10 * 21;
    worst = std::max(worst, t.max_normalized);
  }
  // Runtime bound only applies to the single-threaded configuration.
  const bool timed = opts.jobs == 1;
  if (timed && seconds >= 30.0) c.pass = false;
  c.detail = {{"per_n", per}, {"tolerance", {{"abs", 1e-9}, {"rel", 1e-8}}}};
  c.summary = "worst |r|/(1e-9 + 1e-8*scale) = " + fmt(worst) + " over 4 x 100 ops x 10 tuples x 21 points" +
              (timed ? ", " + fmt(seconds) + " s single-threaded (limit 30 s)" : "");
  return c;
}

CriterionResult criterion_counterexample(const Options& opts) {
  CriterionResult c{2, "counterexample: square black box violates id_n", false, "", json::object(), 0.0};
  const Operator sq = builtin::square(suite_domain());
  const SmoothFn x = fn_identity();
  const std::vector<SmoothFn> fs{x, x};
  const double r = eval_id_n_residual(sq, fs, 1.0);
  SuiteConfig cfg;
  cfg.seed = opts.seed;
  cfg.tuples = 10;
  cfg.grid = suite_domain().grid(21);
  const ResidualReport suite = run_check_suite(sq, 1, cfg, opts.jobs);
  const int code = suite.pass ? 0 : 1;
  c.pass = std::abs(r - (-1.0)) <= 1e-12 && code != 0;
  c.detail = {{"residual_at_1", r}, {"suite_pass", suite.pass}, {"exit_code", code},
              {"suite_max_abs_residual", suite.max_abs_residual}};
  c.summary = "residual(x, x; 1) = " + std::to_string(r) + " (expected -1), suite exit code " + std::to_string(code);
  return c;
}

// Counts multiplicity vectors by scanning the whole box 0 <= m_i <= k/i.
std::size_t brute_force_partition_count(int k) {
  std::vector<int> m(static_cast<std::size_t>(k), 0);
  std::size_t count = 0;
  while (true) {
    int weight = 0;
    for (int i = 0; i < k; ++i) weight += (i + 1) * m[static_cast<std::size_t>(i)];
    if (weight == k) ++count;
    int pos = 0;
    while (pos < k) {
      auto& slot = m[static_cast<std::size_t>(pos)];
      if (slot < k / (pos + 1)) {
        ++slot;
        break;
      }
      slot = 0;
      ++pos;
    }
    if (pos == k) break;
  }
  return count;
}

CriterionResult criterion_logderiv(const Options& opts) {
  CriterionResult c{3, "partition log-derivative matches jet ln|f|", true, "", json::object(), 0.0};
  Rng rng(mix(opts.seed, 3));
  std::uniform_real_distribution<double> mag(0.1, 3.0);
  std::uniform_real_distribution<double> other(-2.0, 2.0);
  std::bernoulli_distribution sign(0.5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> d(9);
    d[0] = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    for (std::size_t i = 1; i < d.size(); ++i) d[i] = other(rng);
    const Jet f(0.25, d);
    const Jet l = ln_abs(f);
    for (int k = 1; k <= 8; ++k) {
      const double a = log_deriv_via_partitions(f, k);
      const double b = l[k];
      const double rel = std::abs(a - b) / std::max(std::abs(b), 1e-300);
      worst = std::max(worst, rel);
    }
  }
  const std::vector<std::size_t> expected{1, 2, 3, 5, 7, 11, 15, 22};
  json counts = json::array();
  bool counts_ok = true;
  for (int k = 1; k <= 8; ++k) {
    const std::size_t got = enumerate_partition_multisets(k).size();
    const std::size_t brute = brute_force_partition_count(k);
    counts.push_back(got);
    counts_ok = counts_ok && got == brute && got == expected[static_cast<std::size_t>(k - 1)];
  }
  c.pass = worst <= 1e-8 && counts_ok;
  c.detail = {{"max_relative_error", worst}, {"counts", counts}};
  c.summary = "max relative error " + fmt(worst) + " (limit 1e-8), counts " + counts.dump();
  return c;
}

CriterionResult criterion_units_localization(const Options& opts) {
  CriterionResult c{4, "units, localization and alternating binomial sum", true, "", json::object(), 0.0};
  Rng rng(mix(opts.seed, 4));
  const auto grid = suite_domain().grid(21);
  double units = 0.0;
  double local = 0.0;
  const Interval J{-0.5, 0.5};
  const auto jgrid = Domain({J}).grid(21);
  const SmoothFn bump = fn_bump({0.8, 1.8}, {1.1, 1.5});
  const SmoothFn sq = fn_monomial(2);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 4;
    const Operator D = random_canonical(rng, n, suite_domain());
    const auto u = check_units(D, grid);
    units = std::max(units, u.max_abs_residual);
    if (!u.errors.empty()) c.pass = false;
    const SmoothFn f = random_function(rng);
    const auto l1 = check_localization(D, sq, fn_scale_add(1.0, sq, 1.0, bump), J, jgrid);
    const auto l2 = check_localization(D, f, fn_scale_add(1.0, f, 3.0, bump), J, jgrid);
    local = std::max({local, l1.max_abs_residual, l2.max_abs_residual});
    if (!l1.errors.empty() || !l2.errors.empty()) c.pass = false;
  }
  bool binom_ok = true;
  for (int n = 0; n <= 12; ++n) {
    const std::int64_t expect = n % 2 == 0 ? 1 : -1;
    binom_ok = binom_ok && alternating_binomial_sum(n) == expect;
    const auto layers = subset_layer_sizes(n + 1);
    for (int i = 0; i <= n + 1; ++i) {
      binom_ok = binom_ok && static_cast<double>(layers[static_cast<std::size_t>(i)]) == binomial(n + 1, i);
    }
  }
  c.pass = c.pass && units == 0.0 && local <= 1e-12 && binom_ok;
  c.detail = {{"max_units", units}, {"max_localization", local}, {"binomial_identity", binom_ok}};
  c.summary = "max |D(+-1)| = " + fmt(units) + ", localization " + fmt(local) + " (limit 1e-12), binomial sums " +
              (binom_ok ? "exact" : "WRONG");
  return c;
}

CriterionResult criterion_diagonal(const SuiteSweep& sweep) {
  CriterionResult c{5, "diagonal consistency: id_single equals id_n on equal tuples", true, "", json::object(), 0.0};
  double worst = 0.0;
  for (const auto& t : sweep.per_n) worst = std::max(worst, t.max_diag_gap);
  c.pass = worst <= 1e-12;
  c.detail = {{"max_relative_gap", worst}};
  c.summary = "max relative gap " + fmt(worst) + " (limit 1e-12) across the converse suite";
  return c;
}

CriterionResult criterion_recovery(const Options& opts) {
  CriterionResult c{6, "coefficient recovery round-trip", true, "", json::object(), 0.0};
  Rng rng(mix(opts.seed, 6));
  const auto grid = suite_domain().grid(21);
  const std::vector<SmoothFn> holdout{fn_from_text("sin(x)"), fn_from_text("x^3"), fn_from_text("x*exp(x)")};
  double worst = 0.0;
  bool validation_ok = true;
  std::size_t failures = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + i % 4;
    const Operator D = random_canonical(rng, n, suite_domain());
    const CoefficientProfile p = recover_profile(D, n, grid, {}, opts.jobs);
    failures += p.failures();
    const auto* op = D.canonical();
    for (const auto& row : p.rows) {
      if (!row.result) continue;
      for (int k = 0; k < n; ++k) {
        const auto u = static_cast<std::size_t>(k);
        const double tc = op->c[u].value(row.x);
        const double td = op->d[u].value(row.x);
        worst = std::max({worst, std::abs(row.result->c[u] - tc) / std::max(1.0, std::abs(tc)),
                          std::abs(row.result->d[u] - td) / std::max(1.0, std::abs(td))});
      }
    }
    validation_ok = validation_ok && validate_recovery(D, p, holdout).pass;
  }
  const Operator sq = builtin::square(suite_domain());
  const auto sq_profile = recover_profile(sq, 1, grid, {}, opts.jobs);
  const auto sq_report = validate_recovery(sq, sq_profile, holdout);
  c.pass = failures == 0 && worst <= 1e-6 && validation_ok && !sq_report.pass;
  c.detail = {{"max_relative_error", worst}, {"failures", failures}, {"holdout_pass", validation_ok},
              {"square_validation_pass", sq_report.pass}, {"square_max_abs_residual", sq_report.max_abs_residual}};
  c.summary = "max coefficient error " + fmt(worst) + " (limit 1e-6), holdout " + (validation_ok ? "pass" : "FAIL") +
              ", square validation " + (sq_report.pass ? "PASSED (wrong)" : "fails as expected");
  return c;
}

CriterionResult criterion_degree(const Options& opts) {
  CriterionResult c{7, "degree bound of the exp-conjugated operator", true, "", json::object(), 0.0};
  Rng rng(mix(opts.seed, 7));
  const FamilyParams fp{FunctionFamily::Polynomial, 2, 1.0};
  const auto grid = suite_domain().grid(5);
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    for (int i = 0; i < 10; ++i) {
      const Operator P = conjugate_exp(random_canonical(rng, n, suite_domain()));
      for (int s = 0; s < 5; ++s) {
        const SmoothFn g = random_function(rng, fp);
        const FnPerturbation hs = random_tuple(rng, n + 1, fp);
        for (double x : grid) {
          const Residual r = frechet_degree_residual(P, g, hs, x);
          if (r.scale > 0.0) worst = std::max(worst, std::abs(r.value) / r.scale);
          else if (r.value != 0.0) worst = std::numeric_limits<double>::infinity();
        }
      }
    }
  }
  // conjugate_exp(square) is g -> exp(g(x)); its second difference at g = 0
  // with h1 = h2 = 1 is e^2 - 2e + 1.
  const Operator witness = conjugate_exp(builtin::square(suite_domain()));
  const SmoothFn one = fn_constant(1.0);
  const Residual w = frechet_degree_residual(witness, fn_constant(0.0), {one, one}, 0.3);
  const double e = std::numbers::e;
  const double expected = e * e - 2.0 * e + 1.0;
  c.pass = worst <= 1e-6 && std::abs(w.value - expected) <= 1e-9;
  c.detail = {{"max_relative_residual", worst}, {"witness", w.value}, {"witness_expected", expected}};
  c.summary = "max |(n+1)-fold difference|/scale = " + fmt(worst) + " (limit 1e-6), witness " +
              std::to_string(w.value) + " vs e^2-2e+1 = " + std::to_string(expected);
  return c;
}

CriterionResult criterion_annihilation(const Options& opts) {
  CriterionResult c{8, "annihilating operators kill low-degree monomials", true, "", json::object(), 0.0};
  Rng rng(mix(opts.seed, 8));
  const auto grid = suite_domain().grid(21);
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    for (int j = 0; j < n; ++j) {
      for (int t = 0; t < 5; ++t) {
        std::vector<SmoothFn> coeffs;
        for (int i = 1; i <= n; ++i) {
          coeffs.push_back(i <= j ? fn_constant(0.0) : fn_polynomial(random_coefficients(rng, 2, 1.0)));
        }
        const Operator D = make_linear(std::move(coeffs), suite_domain());
        const auto r = check_poly_annihilation(D, j, grid);
        worst = std::max(worst, r.max_abs_residual);
        if (!r.pass) c.pass = false;
      }
    }
  }
  const auto dx = check_poly_annihilation(make_derivative(1, 1.0, suite_domain()), 1, grid);
  c.pass = c.pass && worst == 0.0 && !dx.pass && dx.max_abs_residual == 1.0;
  c.detail = {{"max_abs_residual", worst}, {"ddx_j1_residual", dx.max_abs_residual}, {"ddx_j1_pass", dx.pass}};
  c.summary = "max |D(x^m)| = " + fmt(worst) + " (must be exactly 0); d/dx at j=1 gives " +
              std::to_string(dx.max_abs_residual);
  return c;
}

// ---------------------------------------------------------------------------
// Parser conformance

Expr X() { return Expr::variable(); }
Expr C(double v) { return Expr::constant(v); }
Expr U(UnaryOp op, Expr a) { return Expr::unary(op, std::move(a)); }
Expr B(BinaryOp op, Expr a, Expr b) { return Expr::binary(op, std::move(a), std::move(b)); }
Expr Pw(Expr a, double e) { return Expr::power(std::move(a), e); }

struct GoldenOk {
  const char* text;
  std::function<Expr()> expected;
};

struct GoldenErr {
  const char* text;
  std::size_t offset;
};

std::vector<GoldenOk> golden_ok() {
  using enum BinaryOp;
  using enum UnaryOp;
  return {
      {"x^2 + 1", [] { return B(Add, Pw(X(), 2), C(1)); }},
      {"sin(x)*exp(x)", [] { return B(Mul, U(Sin, X()), U(Exp, X())); }},
      {"1 - 2 - 3", [] { return B(Sub, B(Sub, C(1), C(2)), C(3)); }},
      {"8/4/2", [] { return B(Div, B(Div, C(8), C(4)), C(2)); }},
      {"-x^2", [] { return U(Neg, Pw(X(), 2)); }},
      {"-2*x", [] { return B(Mul, U(Neg, C(2)), X()); }},
      {"2*-x", [] { return B(Mul, C(2), U(Neg, X())); }},
      {"--x", [] { return U(Neg, U(Neg, X())); }},
      {"(x+1)^3", [] { return Pw(B(Add, X(), C(1)), 3); }},
      {"ln(abs(x))", [] { return U(Ln, U(Abs, X())); }},
      {"  cos( x )  +\tx ", [] { return B(Add, U(Cos, X()), X()); }},
      {"1.5e-3*x", [] { return B(Mul, C(1.5e-3), X()); }},
      {"x - (1 - x)", [] { return B(Sub, X(), B(Sub, C(1), X())); }},
      {"exp(-x)", [] { return U(Exp, U(Neg, X())); }},
      {"2^0.5", [] { return Pw(C(2), 0.5); }},
      {"x*x/x", [] { return B(Div, B(Mul, X(), X()), X()); }},
      {"((x))", [] { return X(); }},
      {"1+2*3", [] { return B(Add, C(1), B(Mul, C(2), C(3))); }},
      {"2E+2", [] { return C(200); }},
  };
}

std::vector<GoldenErr> golden_err() {
  return {
      {"2*(x", 4}, {"2x", 1},    {"x^-1", 2}, {"foo(x)", 0}, {"sin x", 4}, {"x +", 3},
      {"1.", 2},   {"x $ 1", 2}, {")", 0},    {"x^2^3", 3},  {"", 0},      {"sin()", 4},
  };
}

Expr random_expr(Rng& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 12);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  const int k = pick(rng);
  switch (k) {
    case 0: return X();
    case 1: {
      const double v = value(rng);
      return C(std::bernoulli_distribution(0.5)(rng) ? std::round(v) : v);
    }
    case 2: return U(UnaryOp::Neg, random_expr(rng, depth - 1));
    case 3: return U(UnaryOp::Sin, random_expr(rng, depth - 1));
    case 4: return U(UnaryOp::Cos, random_expr(rng, depth - 1));
    case 5: return U(UnaryOp::Exp, random_expr(rng, depth - 1));
    case 6: return U(UnaryOp::Ln, random_expr(rng, depth - 1));
    case 7: return U(UnaryOp::Abs, random_expr(rng, depth - 1));
    case 8: {
      static const double exps[] = {0, 1, 2, 3, 0.5, 2.5, 1e-3};
      return Pw(random_expr(rng, depth - 1), exps[std::uniform_int_distribution<int>(0, 6)(rng)]);
    }
    default: {
      const auto op = static_cast<BinaryOp>(k - 9);
      Expr l = random_expr(rng, depth - 1);
      Expr r = random_expr(rng, depth - 1);
      return B(op, std::move(l), std::move(r));
    }
  }
}

CriterionResult criterion_parser(const Options& opts) {
  CriterionResult c{9, "parser conformance and print-parse round-trip", true, "", json::object(), 0.0};
  std::size_t ok_pass = 0;
  std::size_t err_pass = 0;
  json failures = json::array();
  const auto oks = golden_ok();
  for (const auto& g : oks) {
    try {
      if (structurally_equal(parse(g.text), g.expected())) {
        ++ok_pass;
        continue;
      }
    } catch (const SyntaxError&) {
    }
    failures.push_back(g.text);
  }
  const auto errs = golden_err();
  for (const auto& g : errs) {
    try {
      parse(g.text);
    } catch (const SyntaxError& e) {
      if (e.offset() == g.offset) {
        ++err_pass;
        continue;
      }
    }
    failures.push_back(g.text);
  }
  Rng rng(mix(opts.seed, 9));
  std::size_t round_trips = 0;
  for (int i = 0; i < 200; ++i) {
    const Expr e = random_expr(rng, 4);
    const std::string text = to_string(e);
    try {
      if (structurally_equal(parse(text), e) && to_string(parse(text)) == text) {
        ++round_trips;
        continue;
      }
    } catch (const SyntaxError&) {
    }
    failures.push_back(text);
  }
  const std::size_t golden = oks.size() + errs.size();
  c.pass = golden >= 20 && ok_pass == oks.size() && err_pass == errs.size() && round_trips == 200;
  c.detail = {{"golden_cases", golden}, {"golden_pass", ok_pass + err_pass}, {"round_trips", round_trips},
              {"failures", failures}};
  c.summary = std::to_string(ok_pass + err_pass) + "/" + std::to_string(golden) + " golden cases, " +
              std::to_string(round_trips) + "/200 round-trips";
  return c;
}

std::vector<CriterionResult> run_core(const Options& opts) {
  using clock = std::chrono::steady_clock;
  std::vector<CriterionResult> out;
  auto t0 = clock::now();
  const SuiteSweep sweep = converse_sweep(opts);
  const double sweep_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  out.push_back(criterion_converse(sweep, sweep_seconds, opts));

  auto timed = [&](auto&& fn) {
    const auto start = clock::now();
    CriterionResult r = fn();
    r.seconds = std::chrono::duration<double>(clock::now() - start).count();
    out.push_back(std::move(r));
  };
  timed([&] { return criterion_counterexample(opts); });
  timed([&] { return criterion_logderiv(opts); });
  timed([&] { return criterion_units_localization(opts); });
  timed([&] { return criterion_diagonal(sweep); });
  timed([&] { return criterion_recovery(opts); });
  timed([&] { return criterion_degree(opts); });
  timed([&] { return criterion_annihilation(opts); });
  timed([&] { return criterion_parser(opts); });
  return out;
}

}  // namespace

json to_json(const std::vector<CriterionResult>& results, std::uint64_t seed) {
  json crit = json::array();
  bool all = true;
  for (const auto& r : results) {
    crit.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    all = all && r.pass;
  }
  return {{"seed", seed}, {"criteria", crit}, {"pass", all}};
}

std::vector<CriterionResult> run_all(const Options& opts) {
  auto results = run_core(opts);
  if (!opts.determinism) return results;
  const auto start = std::chrono::steady_clock::now();
  Options other = opts;
  other.jobs = opts.jobs == 1 ? 2 : 1;
  const auto again = run_core(other);
  const std::string a = to_json(results, opts.seed).dump();
  const std::string b = to_json(again, opts.seed).dump();
  CriterionResult c{10, "determinism: identical structured reports across runs", a == b, "", json::object(), 0.0};
  c.detail = {{"identical", a == b}, {"bytes", a.size()}};
  c.summary = std::string(a == b ? "identical" : "DIFFERENT") + " reports (" + std::to_string(a.size()) +
              " bytes) for jobs=" + std::to_string(opts.jobs) + " and jobs=" + std::to_string(other.jobs);
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  results.push_back(std::move(c));
  return results;
}

}  // namespace hodiff::acceptance
