#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace starcalc {

struct VerifyOptions {
  std::uint64_t seed = 42;
  /// Cap on random ground sizes for checks stated up to ten points.
  unsigned n = 10;
  std::size_t mc_samples = 100000;
  bool performance = true;
};

struct CheckResult {
  std::string id;        // "1", "6.Y2", "inv.transforms.assoc", ...
  std::string title;
  bool passed = false;
  bool informational = false;  // reported, never gating
  std::string detail;
};

/// The numbered acceptance criteria. Criterion 6 is preceded by one line per
/// inequality it covers; its own line is their conjunction.
std::vector<CheckResult> acceptance_checks(const VerifyOptions& opt = {});

/// Module invariants not already covered by an acceptance criterion.
std::vector<CheckResult> invariant_checks(const VerifyOptions& opt = {});

std::vector<CheckResult> verify_all(const VerifyOptions& opt = {});

bool all_passed(const std::vector<CheckResult>& checks);

std::string format_check(const CheckResult& c);

}  // namespace starcalc
