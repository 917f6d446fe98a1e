#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evenbe/oracle.hpp"
#include "evenbe/pencil.hpp"

namespace evenbe {

struct VerifyOptions {
  Index n = 4;
  Index m = 3;
  std::uint64_t seed = 1;
  int instances = 8;  // seeded (pencil, query) pairs per property
  bool with_oracle = true;
  OracleConfig oracle{};
  // Test hook: multiplies the closed-form values entering the divisor,
  // dominance and oracle cross-checks; any value != 1 must fail the run.
  double fault_injection_scale = 1.0;
};

struct PropertyResult {
  std::string name;
  int passed = 0;
  int total = 0;
  std::string first_failure;  // empty when passed == total
};

struct VerifySummary {
  std::vector<PropertyResult> properties;
  bool all_passed = false;
};

// Runs the invariant suite: mapping closures, residual closure of the
// reconstructed minimizers, equal-scope identities, divisor relations,
// dominance chains, the oracle sandwich and eigenvalue certification.
// With a caller-supplied pencil the per-instance seeds vary the query only;
// otherwise each instance draws its own strictly passive pencil.
VerifySummary run_verification(const VerifyOptions& opts,
                               const StructuredPencil* pencil = nullptr);

}  // namespace evenbe
