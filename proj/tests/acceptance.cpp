// Runs every acceptance criterion with the pinned seed and prints one line each.

#include <cstdio>
#include <exception>

#include "hodiff/acceptance.hpp"

int main() {
  try {
    const auto results = hodiff::acceptance::run_all({42, 1, true});
    int failed = 0;
    for (const auto& r : results) {
      std::printf("%s criterion %2d: %s -- %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.summary.c_str(), r.seconds);
      if (!r.pass) ++failed;
    }
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
    return 2;
  }
}
