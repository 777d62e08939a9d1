#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spinrec {

struct SelftestOptions {
  std::uint64_t seed = 2018;
  int max_n = 6;
  int samples = 10;  // random inputs per signature and suite
  /// Replaces every suite's own threshold when set.
  std::optional<double> tolerance;
};

struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  double worst = 0.0;  // largest observed deviation
  double tolerance = 0.0;
  bool passed() const noexcept { return failures == 0; }
};

/// Round-trip recovery, averaging, generator conjugation, beta-blade and
/// block-minor checks over every signature with n <= max_n. Beta-blade
/// deviations are divided by max(1, ||P||_inf^2) and the block-minor gap by
/// max(1, |top minor|), since both are limited by how pseudo-orthogonal the
/// double-precision matrix is.
std::vector<SuiteResult> run_selftest(const SelftestOptions& options);

}  // namespace spinrec
