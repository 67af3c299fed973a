#include "hodiff/identity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "hodiff/error.hpp"

#ifdef HODIFF_HAVE_OPENMP
#include <omp.h>
#endif

namespace hodiff {

namespace {

constexpr int kMaxArity = kMaxOrder + 1;

std::vector<std::string> descriptors(std::span<const SmoothFn> fs) {
  std::vector<std::string> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(f.descriptor());
  return out;
}

}  // namespace

Residual id_n_residual(const Operator& D, std::span<const SmoothFn> fs, double x) {
  const int m = static_cast<int>(fs.size());
  if (m < 2 || m > kMaxArity) {
    throw StructuralError("identity needs between 2 and " + std::to_string(kMaxArity) +
                          " functions");
  }
  std::vector<double> values(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) values[j] = fs[j].value(x);

  const std::uint32_t full = (1u << m) - 1u;
  Residual r;
  std::vector<SmoothFn> rest;
  rest.reserve(fs.size());
  // mask = I; the full set (|I| = n+1) is excluded.
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    double outside = 1.0;
    rest.clear();
    for (int j = 0; j < m; ++j) {
      if (mask & (1u << j)) {
        outside *= values[static_cast<std::size_t>(j)];
      } else {
        rest.push_back(fs[static_cast<std::size_t>(j)]);
      }
    }
    const double sign = (std::popcount(mask) % 2 == 0) ? 1.0 : -1.0;
    const double term = sign * outside * D(fn_product(rest), x);
    r.value += term;
    r.scale = std::max(r.scale, std::abs(term));
  }
  return r;
}

double eval_id_n_residual(const Operator& D, std::span<const SmoothFn> fs, double x) {
  return id_n_residual(D, fs, x).value;
}

Residual id_single_residual(const Operator& D, const SmoothFn& f, int n, double x) {
  if (n < 1 || n >= kMaxArity) throw StructuralError("identity order out of range");
  const double fx = f.value(x);
  Residual r;
  double fpow = 1.0;
  for (int i = 0; i <= n; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const double term = sign * binomial(n + 1, i) * fpow * D(fn_power(f, n + 1 - i), x);
    r.value += term;
    r.scale = std::max(r.scale, std::abs(term));
    fpow *= fx;
  }
  return r;
}

double eval_id_single_residual(const Operator& D, const SmoothFn& f, int n, double x) {
  return id_single_residual(D, f, n, x).value;
}

Residual graded_leibniz_residual(std::span<const Operator> Ts, const SmoothFn& f,
                                 const SmoothFn& g, double x) {
  if (Ts.empty()) throw StructuralError("graded Leibniz needs T_0..T_n");
  const int n = static_cast<int>(Ts.size()) - 1;
  const double lhs = Ts[static_cast<std::size_t>(n)](fn_product({f, g}), x);
  Residual r{lhs, std::abs(lhs)};
  for (int k = 0; k <= n; ++k) {
    const double term = binomial(n, k) * Ts[static_cast<std::size_t>(k)](f, x) *
                        Ts[static_cast<std::size_t>(n - k)](g, x);
    r.value -= term;
    r.scale = std::max(r.scale, std::abs(term));
  }
  return r;
}

double eval_graded_leibniz_residual(std::span<const Operator> Ts, const SmoothFn& f,
                                    const SmoothFn& g, double x) {
  return graded_leibniz_residual(Ts, f, g, x).value;
}

std::vector<std::uint64_t> subset_layer_sizes(int m) {
  if (m < 0 || m > 30) throw StructuralError("subset enumeration size out of range");
  std::vector<std::uint64_t> layers(static_cast<std::size_t>(m) + 1, 0);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) ++layers[std::popcount(mask)];
  return layers;
}

std::int64_t alternating_binomial_sum(int n) {
  if (n < 0 || n > 60) throw StructuralError("alternating sum order out of range");
  std::int64_t c = 1;  // C(n+1, 0)
  std::int64_t acc = 0;
  for (int i = 0; i <= n; ++i) {
    acc += (i % 2 == 0) ? c : -c;
    c = c * (n + 1 - i) / (i + 1);
  }
  return acc;
}

ResidualReport check_units(const Operator& D, std::span<const double> grid, Tolerance tol) {
  ReportBuilder b("units", 0, tol);
  const SmoothFn one = fn_constant(1.0);
  const SmoothFn minus_one = fn_constant(-1.0);
  for (double x : grid) {
    try {
      b.add({D(one, x), 0.0}, x, {one.descriptor()});
      b.add({D(minus_one, x), 0.0}, x, {minus_one.descriptor()});
    } catch (const Error& e) {
      b.add_error(e.what());
    }
  }
  return b.finish();
}

ResidualReport check_localization(const Operator& D, const SmoothFn& f1, const SmoothFn& f2,
                                  Interval J, std::span<const double> grid, Tolerance tol) {
  ReportBuilder b("localization", 0, tol);
  for (double x : grid) {
    if (!J.contains(x)) {
      b.add_error("grid point " + std::to_string(x) + " outside the agreement interval");
      continue;
    }
    try {
      const double a = D(f1, x);
      const double c = D(f2, x);
      b.add({a - c, std::max(std::abs(a), std::abs(c))}, x, {f1.descriptor(), f2.descriptor()});
    } catch (const Error& e) {
      b.add_error(e.what());
    }
  }
  return b.finish();
}

ResidualReport check_poly_annihilation(const Operator& D, int j, std::span<const double> grid,
                                       Tolerance tol) {
  if (j < 0) throw StructuralError("annihilation degree must be nonnegative");
  ReportBuilder b("annihilation", j, tol);
  for (int m = 0; m <= j; ++m) {
    const SmoothFn mono = fn_monomial(m);
    for (double x : grid) {
      try {
        b.add({D(mono, x), 0.0}, x, {mono.descriptor()});
      } catch (const Error& e) {
        b.add_error(e.what());
      }
    }
  }
  return b.finish();
}

// ---------------------------------------------------------------------------
// Random suite

namespace {

struct SampleOutcome {
  std::optional<Residual> id_n;
  std::optional<Residual> single;
  double diagonal_gap = 0.0;
  std::string error;
};

struct SuitePlan {
  std::vector<std::vector<SmoothFn>> tuples;
  std::vector<double> grid;

  std::size_t size() const { return tuples.size() * grid.size(); }
};

SuitePlan plan_suite(int n, const SuiteConfig& cfg) {
  if (n < 1 || n >= kMaxArity) throw StructuralError("suite order out of range");
  if (cfg.tuples < 0) throw StructuralError("negative tuple count");
  SuitePlan plan;
  plan.grid = cfg.grid;
  Rng rng(cfg.seed);
  for (int t = 0; t < cfg.tuples; ++t) plan.tuples.push_back(random_tuple(rng, n + 1, cfg.family));
  return plan;
}

SampleOutcome evaluate_sample(const Operator& D, int n, const SuitePlan& plan, std::size_t index) {
  SampleOutcome out;
  const auto& tuple = plan.tuples[index / plan.grid.size()];
  const double x = plan.grid[index % plan.grid.size()];
  try {
    out.id_n = id_n_residual(D, tuple, x);
    out.single = id_single_residual(D, tuple.front(), n, x);
    const std::vector<SmoothFn> diag(tuple.size(), tuple.front());
    const Residual d = id_n_residual(D, diag, x);
    const double denom = std::max(d.scale, std::numeric_limits<double>::min());
    out.diagonal_gap = std::abs(out.single->value - d.value) / denom;
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

SuiteResult reduce(const SuitePlan& plan, int n, const SuiteConfig& cfg,
                   const std::vector<SampleOutcome>& outcomes) {
  ReportBuilder id_n("id_n", n, cfg.tol);
  ReportBuilder single("id_single", n, cfg.tol);
  double gap = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    const auto& tuple = plan.tuples[i / plan.grid.size()];
    const double x = plan.grid[i % plan.grid.size()];
    if (!o.error.empty()) {
      id_n.add_error(o.error);
      single.add_error(o.error);
      continue;
    }
    id_n.add(*o.id_n, x, descriptors(tuple));
    single.add(*o.single, x, {tuple.front().descriptor()});
    gap = std::max(gap, o.diagonal_gap);
  }
  return SuiteResult{id_n.finish(), single.finish(), gap};
}

}  // namespace

ResidualReport SuiteResult::combined() const {
  ResidualReport r;
  r.identity = "id_n+id_single";
  r.n = id_n.n;
  r.samples = id_n.samples + id_single.samples;
  r.tol = id_n.tol;
  r.max_scale = std::max(id_n.max_scale, id_single.max_scale);
  r.max_normalized = std::max(id_n.max_normalized, id_single.max_normalized);
  const bool single_worse = id_single.max_abs_residual > id_n.max_abs_residual;
  r.max_abs_residual = single_worse ? id_single.max_abs_residual : id_n.max_abs_residual;
  r.worst = single_worse ? id_single.worst : id_n.worst;
  r.vacuous = id_n.vacuous && id_single.vacuous;
  r.errors = id_n.errors;
  r.errors.insert(r.errors.end(), id_single.errors.begin(), id_single.errors.end());
  r.pass = r.errors.empty() && r.max_abs_residual <= r.tol.bound(r.max_scale);
  return r;
}

SuiteResult run_check_suite_serial(const Operator& D, int n, const SuiteConfig& cfg) {
  const SuitePlan plan = plan_suite(n, cfg);
  std::vector<SampleOutcome> outcomes;
  outcomes.reserve(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) outcomes.push_back(evaluate_sample(D, n, plan, i));
  return reduce(plan, n, cfg, outcomes);
}

SuiteResult run_check_suite_detailed(const Operator& D, int n, const SuiteConfig& cfg, int jobs) {
  const SuitePlan plan = plan_suite(n, cfg);
  std::vector<SampleOutcome> outcomes(plan.size());
  const auto count = static_cast<std::int64_t>(plan.size());
#ifdef HODIFF_HAVE_OPENMP
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    outcomes[static_cast<std::size_t>(i)] = evaluate_sample(D, n, plan, static_cast<std::size_t>(i));
  }
  (void)jobs;
  return reduce(plan, n, cfg, outcomes);
}

ResidualReport run_check_suite(const Operator& D, int n, const SuiteConfig& cfg, int jobs) {
  return run_check_suite_detailed(D, n, cfg, jobs).combined();
}

}  // namespace hodiff
