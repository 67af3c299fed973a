#include "hodiff/logderiv.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "hodiff/error.hpp"

namespace hodiff {

namespace {

std::int64_t ifactorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Fills m[idx..k-1] (parts of size idx+1..k) so that the weighted sum reaches k,
// emitting vectors in lexicographic order of (m_1, ..., m_k).
void enumerate(int k, int idx, int remaining, std::vector<int>& m,
               std::vector<PartitionTerm>& out) {
  if (idx == k) {
    if (remaining == 0) {
      PartitionTerm t;
      t.k = k;
      t.multiplicities = m;
      const int parts = std::accumulate(m.begin(), m.end(), 0);
      std::int64_t denom = 1;
      for (int mi : m) denom *= ifactorial(mi);
      const std::int64_t sign = (parts - 1) % 2 == 0 ? 1 : -1;
      t.coefficient = ifactorial(k) / denom * sign * ifactorial(parts - 1);
      out.push_back(std::move(t));
    }
    return;
  }
  const int size = idx + 1;
  for (int count = 0; count * size <= remaining; ++count) {
    m[static_cast<std::size_t>(idx)] = count;
    enumerate(k, idx + 1, remaining - count * size, m, out);
  }
  m[static_cast<std::size_t>(idx)] = 0;
}

using Table = std::array<std::vector<PartitionTerm>, kMaxPartitionOrder + 1>;

const Table& table() {
  static const Table t = [] {
    Table built;
    for (int k = 1; k <= kMaxPartitionOrder; ++k) {
      std::vector<int> m(static_cast<std::size_t>(k), 0);
      enumerate(k, 0, k, m, built[static_cast<std::size_t>(k)]);
    }
    return built;
  }();
  return t;
}

}  // namespace

int PartitionTerm::parts() const noexcept {
  return std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
}

std::int64_t PartitionTerm::derivative_coefficient() const {
  std::int64_t denom = 1;
  for (std::size_t j = 0; j < multiplicities.size(); ++j) {
    const std::int64_t jf = ifactorial(static_cast<int>(j) + 1);
    for (int r = 0; r < multiplicities[j]; ++r) denom *= jf;
  }
  return coefficient / denom;
}

std::span<const PartitionTerm> enumerate_partition_multisets(int k) {
  if (k < 1 || k > kMaxPartitionOrder) {
    throw StructuralError("partition order " + std::to_string(k) + " outside 1.." +
                          std::to_string(kMaxPartitionOrder));
  }
  return table()[static_cast<std::size_t>(k)];
}

double log_deriv_via_partitions(const Jet& fjet, int k) {
  const auto terms = enumerate_partition_multisets(k);
  if (fjet.order() < k) throw StructuralError("jet order below requested derivative");
  const double f = fjet.value();
  if (f == 0.0) throw DomainError("log singularity at base point x0=" + std::to_string(fjet.x0()));

  std::vector<double> scaled(static_cast<std::size_t>(k) + 1);
  for (int j = 1; j <= k; ++j) scaled[static_cast<std::size_t>(j)] = fjet[j] / factorial(j);

  double acc = 0.0;
  for (const auto& t : terms) {
    double term = static_cast<double>(t.coefficient) / std::pow(f, t.parts());
    for (int j = 1; j <= k; ++j) {
      const int mj = t.multiplicities[static_cast<std::size_t>(j - 1)];
      if (mj > 0) term *= std::pow(scaled[static_cast<std::size_t>(j)], mj);
    }
    acc += term;
  }
  return acc;
}

}  // namespace hodiff
