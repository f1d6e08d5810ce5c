// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vgrass/io.hpp"

namespace vgrass {

struct CaseFailure {
  std::uint64_t seed = 0;
  std::string construction;
  std::string detail;  // first differing entry or the error text
};

struct FamilyReport {
  std::string name;
  long long checks = 0;
  std::vector<CaseFailure> failures;
  std::map<std::string, double> metrics;  // worst residuals, timings, observed ratios
  double seconds = 0;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  int cases = 0;
  std::vector<FamilyReport> families;
  double seconds = 0;

  long long checks() const;
  long long failure_count() const;
  bool passed() const { return failure_count() == 0; }
};

// all | grassmann | regular | stab | analytic | fredholm
const std::vector<std::string>& suite_names();
// Identity families in run order; each family belongs to exactly one suite.
std::vector<std::string> suite_families(const std::string& suite);
// Case i of a family draws from an Rng seeded with seed ^ i. Throws std::invalid_argument on unknown names.
FamilyReport run_family(const std::string& family, std::uint64_t seed, int cases);
SuiteReport run_suite(const std::string& suite, std::uint64_t seed, int cases);

Json report_to_json(const SuiteReport& r);

// V Qu1 C(theta) applied to e0 ^ e1 (code 3) over the trig quotient ring.
struct Qu1Demo {
  std::map<long long, Scalar> image;  // V-code -> coefficient
  std::map<long long, Scalar> expected;
  bool pass = false;
  std::string text;
};
Qu1Demo demo_qu1();

// First entry where two matrices differ, for failure reports.
std::string first_difference(const Matrix& a, const Matrix& b);

}  // namespace vgrass
