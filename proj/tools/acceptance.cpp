// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

// One PASS/FAIL line per acceptance criterion. Counts, seeds and tolerances are fixed here;
// the tolerances themselves live in the suite checks.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "vgrass/suites.hpp"

using namespace vgrass;

namespace {

constexpr std::uint64_t kSeed = 20261019;

struct Criterion {
  int id;
  std::string title;
  std::vector<std::pair<std::string, int>> families;  // family, cases
  double max_seconds;
};

std::string metrics_text(const FamilyReport& f) {
  std::string out;
  for (const auto& [k, v] : f.metrics) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s%s=%.3g", out.empty() ? "" : ", ", k.c_str(), v);
    out += buf;
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "worked example: V Qu1 C(theta) e3 = s e3 - s t e5 + t^2 e6", {{"qu1", 1}}, 1},
      {2, "conjugation identities R, H, HR, T', TR (200 per construction)", {{"conjugation", 200}}, 60},
      {3, "virtual cancellation B(a) (50 idempotents)", {{"cancellation", 50}}, 60},
      {4, "H-ring identity suite (100 cases)", {{"hring", 100}}, 60},
      {5, "chi-invariant laws (500 cases)", {{"chi", 500}}, 60},
      {6, "regular idempotents, coherence and dimension laws (100 cases)", {{"regular", 100}, {"dim", 100}}, 60},
      {7, "stabilization: C^T C, sandwich, endpoints, room rotation (100 cases)", {{"stab", 100}}, 60},
      {8, "transport residual <= 1e-6 at step 1e-3, halving ratio >= 8", {{"transport", 1}}, 10},
      {9, "idem, connector factorization, sign connector, finite_reduce (50 cases)", {{"analytic", 50}}, 60},
      {10, "Fredholm pairs: F^2 = 1, index laws, tensor variants, xi~ (100 cases)", {{"fredholm", 100}}, 60},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    long long checks = 0;
    std::vector<FamilyReport> reps;
    for (const auto& [fam, n] : c.families) reps.push_back(run_family(fam, kSeed, n));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string detail;
    size_t fails = 0;
    for (const FamilyReport& r : reps) {
      checks += r.checks;
      fails += r.failures.size();
      if (!r.failures.empty() && detail.empty())
        detail = r.failures.front().construction + ": " + r.failures.front().detail;
      std::string m = metrics_text(r);
      if (!m.empty()) detail += (detail.empty() ? "" : "; ") + m;
    }
    bool ok = fails == 0 && checks > 0 && secs < c.max_seconds;
    if (secs >= c.max_seconds) detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    if (!ok) ++failed;
    std::printf("%s [%2d] %s: %lld checks, %zu failures, %.2f s (limit %.0f s)%s%s\n", ok ? "PASS" : "FAIL", c.id,
                c.title.c_str(), checks, fails, secs, c.max_seconds, detail.empty() ? "" : " | ", detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
