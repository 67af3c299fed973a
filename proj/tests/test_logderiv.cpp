#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "hodiff/error.hpp"
#include "hodiff/logderiv.hpp"
#include "test_support.hpp"

using namespace hodiff;

namespace {

// Integer partitions of k counted by brute force recursion.
int count_partitions(int k, int max_part) {
  if (k == 0) return 1;
  int total = 0;
  for (int p = std::min(k, max_part); p >= 1; --p) total += count_partitions(k - p, p);
  return total;
}

}  // namespace

TEST_CASE("partition enumeration") {
  for (int k = 1; k <= kMaxPartitionOrder; ++k) {
    const auto terms = enumerate_partition_multisets(k);
    CHECK(static_cast<int>(terms.size()) == count_partitions(k, k));
    for (const auto& t : terms) {
      int weight = 0;
      for (std::size_t i = 0; i < t.multiplicities.size(); ++i)
        weight += static_cast<int>(i + 1) * t.multiplicities[i];
      CHECK(weight == k);
    }
  }
  CHECK(enumerate_partition_multisets(4).size() == 5);
  CHECK_THROWS_AS(enumerate_partition_multisets(0), StructuralError);
  CHECK_THROWS_AS(enumerate_partition_multisets(kMaxPartitionOrder + 1), StructuralError);
}

TEST_CASE("third order coefficients") {
  // (ln f)''' = f'''/f - 3 f' f''/f^2 + 2 (f'/f)^3
  std::map<std::vector<int>, std::int64_t> want{{{0, 0, 1}, 1}, {{1, 1, 0}, -3}, {{3, 0, 0}, 2}};
  for (const auto& t : enumerate_partition_multisets(3)) {
    REQUIRE(want.count(t.multiplicities) == 1);
    CHECK(t.derivative_coefficient() == want[t.multiplicities]);
  }
}

TEST_CASE("log derivative examples") {
  CHECK(log_deriv_via_partitions(Jet(0.0, {2, 6}), 1) == 3.0);
  // f = e^{x^2} at 0: (ln f)'' = 2
  CHECK(log_deriv_via_partitions(Jet(0.0, {1, 0, 2}), 2) == doctest::Approx(2.0));
  // f = e^{x^3} at 0: (ln f)''' = 6
  CHECK(log_deriv_via_partitions(Jet(0.0, {1, 0, 0, 6}), 3) == doctest::Approx(6.0));
  CHECK_THROWS_AS(log_deriv_via_partitions(Jet(0.0, {0, 1}), 1), DomainError);
  CHECK_THROWS_AS(log_deriv_via_partitions(Jet(0.0, {1, 1}), 2), StructuralError);
}

TEST_CASE("partition formula agrees with jet logarithm") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 8;
    std::vector<double> d(static_cast<std::size_t>(k) + 1);
    for (auto& v : d) v = u(rng);
    if (std::abs(d[0]) < 0.2) d[0] = d[0] < 0 ? -0.5 : 0.5;
    const Jet f(0.0, d);
    const double want = ln_abs(f)[k];
    CHECK(close_rel(log_deriv_via_partitions(f, k), want, 1e-8));
  }
}
