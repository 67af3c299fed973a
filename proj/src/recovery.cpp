#include "hodiff/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "hodiff/error.hpp"

#ifdef HODIFF_HAVE_OPENMP
#include <omp.h>
#endif

namespace hodiff {

namespace {

std::size_t square_size(const std::vector<double>& A, std::size_t rhs) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(A.size()))));
  if (n == 0 || n * n != A.size() || n != rhs) throw StructuralError("linear system shape mismatch");
  return n;
}

double norm1(const std::vector<double>& A, std::size_t n) {
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(A[i * n + j]);
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

std::vector<double> solve_linear(std::vector<double> A, std::vector<double> b) {
  const std::size_t n = square_size(A, b.size());
  double amax = 0.0;
  for (double v : A) amax = std::max(amax, std::abs(v));
  const double tiny = 64.0 * std::numeric_limits<double>::epsilon() * amax;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(A[i * n + k]) > std::abs(A[piv * n + k])) piv = i;
    }
    if (!(std::abs(A[piv * n + k]) > tiny)) {
      throw RecoveryError("singular probe system (duplicate or zero probes?)",
                          std::numeric_limits<double>::infinity());
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = A[i * n + k] / A[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) A[i * n + j] -= f * A[k * n + j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= A[ii * n + j] * x[j];
    x[ii] = acc / A[ii * n + ii];
  }
  return x;
}

double condition_1norm(const std::vector<double>& A, std::size_t n) {
  if (A.size() != n * n) throw StructuralError("condition: shape mismatch");
  std::vector<double> inv(n * n);
  try {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      const auto col = solve_linear(A, e);
      for (std::size_t i = 0; i < n; ++i) inv[i * n + j] = col[i];
    }
  } catch (const RecoveryError&) {
    return std::numeric_limits<double>::infinity();
  }
  return norm1(A, n) * norm1(inv, n);
}

std::vector<double> default_probes(int count) {
  std::vector<double> out;
  for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
    const double mag = i / 2 + 1;
    out.push_back(i % 2 == 0 ? mag : -mag);
  }
  return out;
}

namespace {

struct SolveResult {
  std::vector<double> x;
  double condition;
};

// rows[r] = (p_r, p_r^2, ..., p_r^n); least squares when there are more rows than n.
SolveResult solve_probe_system(std::span<const double> probes, std::span<const double> rhs, int n,
                               const char* which) {
  const auto m = probes.size();
  const auto un = static_cast<std::size_t>(n);
  if (m < un) {
    throw StructuralError(std::string("need at least n ") + which + " probes");
  }
  std::vector<double> V(m * un);
  for (std::size_t r = 0; r < m; ++r) {
    double p = 1.0;
    for (std::size_t i = 0; i < un; ++i) {
      p *= probes[r];
      V[r * un + i] = p;
    }
  }
  std::vector<double> A;
  std::vector<double> b;
  if (m == un) {
    A = V;
    b.assign(rhs.begin(), rhs.end());
  } else {
    A.assign(un * un, 0.0);
    b.assign(un, 0.0);
    for (std::size_t i = 0; i < un; ++i) {
      for (std::size_t j = 0; j < un; ++j) {
        for (std::size_t r = 0; r < m; ++r) A[i * un + j] += V[r * un + i] * V[r * un + j];
      }
      for (std::size_t r = 0; r < m; ++r) b[i] += V[r * un + i] * rhs[r];
    }
  }
  const double cond = condition_1norm(A, un);
  try {
    return {solve_linear(A, b), cond};
  } catch (const RecoveryError& e) {
    throw RecoveryError(std::string(which) + " probe system: " + e.what(), cond);
  }
}

}  // namespace

PointRecovery recover_at_point(const Operator& D, int n, double x0, std::span<const double> lambdas,
                               std::span<const double> mus) {
  if (n < 1 || n > kMaxOrder) throw StructuralError("recovery order out of range");
  PointRecovery out;
  out.x = x0;

  std::vector<double> yc;
  for (double lambda : lambdas) {
    const SmoothFn probe = fn_exp_of(fn_from_jet(x0, {0.0, lambda}));
    yc.push_back(D(probe, x0));
  }
  auto c = solve_probe_system(lambdas, yc, n, "exponential");

  std::vector<double> yd;
  for (double mu : mus) {
    const double level = std::exp(mu);
    yd.push_back(D(fn_constant(level), x0) / level);
  }
  auto d = solve_probe_system(mus, yd, n, "constant");

  out.c = std::move(c.x);
  out.d = std::move(d.x);
  out.condition_c = c.condition;
  out.condition_d = d.condition;
  for (auto [name, cond] : {std::pair{"exponential", c.condition}, std::pair{"constant", d.condition}}) {
    if (cond > kConditionWarning) {
      std::ostringstream os;
      os << name << " probe system condition " << cond << " exceeds " << kConditionWarning;
      out.warnings.push_back(os.str());
    }
  }
  return out;
}

PointRecovery recover_at_point(const Operator& D, int n, double x0) {
  const auto probes = default_probes(n);
  return recover_at_point(D, n, x0, probes, probes);
}

std::size_t CoefficientProfile::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const RecoveryRow& r) { return !r.result; }));
}

namespace {

RecoveryRow recover_row(const Operator& D, int n, double x, const ProbeConfig& probes) {
  RecoveryRow row;
  row.x = x;
  try {
    const auto lambdas = probes.lambdas.empty() ? default_probes(n) : probes.lambdas;
    const auto mus = probes.mus.empty() ? default_probes(n) : probes.mus;
    row.result = recover_at_point(D, n, x, lambdas, mus);
  } catch (const Error& e) {
    row.error = e.what();
  }
  return row;
}

void finish_profile(CoefficientProfile& p) {
  const RecoveryRow* prev = nullptr;
  for (const auto& row : p.rows) {
    if (!row.result) continue;
    if (prev) {
      for (std::size_t i = 0; i < row.result->c.size(); ++i) {
        p.max_adjacent_jump =
            std::max({p.max_adjacent_jump, std::abs(row.result->c[i] - prev->result->c[i]),
                      std::abs(row.result->d[i] - prev->result->d[i])});
      }
    }
    prev = &row;
  }
}

}  // namespace

CoefficientProfile recover_profile_serial(const Operator& D, int n, std::span<const double> grid,
                                          const ProbeConfig& probes) {
  CoefficientProfile p;
  p.n = n;
  for (double x : grid) p.rows.push_back(recover_row(D, n, x, probes));
  finish_profile(p);
  return p;
}

CoefficientProfile recover_profile(const Operator& D, int n, std::span<const double> grid,
                                   const ProbeConfig& probes, int jobs) {
  CoefficientProfile p;
  p.n = n;
  p.rows.resize(grid.size());
  const auto count = static_cast<std::int64_t>(grid.size());
#ifdef HODIFF_HAVE_OPENMP
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    const auto u = static_cast<std::size_t>(i);
    p.rows[u] = recover_row(D, n, grid[u], probes);
  }
  (void)jobs;
  finish_profile(p);
  return p;
}

ResidualReport validate_recovery(const Operator& D, const CoefficientProfile& recovered,
                                 std::span<const SmoothFn> holdout, Tolerance tol) {
  ReportBuilder b("recovery_validation", recovered.n, tol);
  if (holdout.empty()) return b.finish();
  for (const auto& row : recovered.rows) {
    if (!row.result) {
      b.add_error("no recovered coefficients at x=" + std::to_string(row.x) + ": " + row.error);
      continue;
    }
    for (const auto& f : holdout) {
      try {
        const double actual = D(f, row.x);
        const double model = canonical_value(row.result->c, row.result->d, f.jet(row.x, recovered.n));
        b.add({actual - model, std::max(std::abs(actual), std::abs(model))}, row.x,
              {f.descriptor()});
      } catch (const Error& e) {
        b.add_error(e.what());
      }
    }
  }
  return b.finish();
}

}  // namespace hodiff
