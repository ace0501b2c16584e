#pragma once

// Exhaustive exact-arithmetic checks of the combinatorial identities the
// library relies on. Every suite is deterministic for a fixed seed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ccp {

inline constexpr std::size_t kMaxRecordedFailures = 20;

struct VerifyOptions {
  int n_max = 8;
  int trials = 50;  // random popularities per n
  std::uint64_t seed = 1;
  int grid_n_max = 20;  // for the pure-integer and uniform identities
};

struct IdentityFailure {
  std::string identity;
  std::string inputs;
  std::string lhs;
  std::string rhs;
};

struct SuiteResult {
  std::string name;
  std::uint64_t checks = 0;
  std::uint64_t failed = 0;
  std::vector<IdentityFailure> failures;  // first kMaxRecordedFailures only

  bool passed() const { return failed == 0; }
};

struct VerifyReport {
  VerifyOptions options;
  std::vector<SuiteResult> suites;

  bool passed() const;
};

std::vector<std::string> verify_suite_names();

VerifyReport verify_identities(const VerifyOptions& opts);

}  // namespace ccp
