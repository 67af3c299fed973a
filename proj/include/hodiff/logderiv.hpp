#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hodiff/jet.hpp"

namespace hodiff {

/// One summand of the partition expansion of (ln f)^(k):
///   coefficient * f^(-M) * prod_j (f^(j) / j!)^(m_j),   M = sum_j m_j,
/// with coefficient = k!/(m_1!...m_k!) * (-1)^(M-1) (M-1)!.
struct PartitionTerm {
  int k = 0;
  std::vector<int> multiplicities;  // m_1..m_k, sum_i i*m_i == k
  std::int64_t coefficient = 0;

  int parts() const noexcept;  // M
  /// Coefficient on prod_j (f^(j))^(m_j) / f^M, with the j! factors absorbed.
  std::int64_t derivative_coefficient() const;
};

inline constexpr int kMaxPartitionOrder = 12;

/// All multiplicity vectors for k in lexicographic order of (m_1, ..., m_k).
/// Tables are built once and shared.
std::span<const PartitionTerm> enumerate_partition_multisets(int k);

/// k-th derivative of ln|f| at the jet's base point via the partition sum.
double log_deriv_via_partitions(const Jet& fjet, int k);

}  // namespace hodiff
