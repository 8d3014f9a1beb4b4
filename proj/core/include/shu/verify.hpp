#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace shu::verify {

/// One verifiable claim: a self-contained statement, the expected value or
/// bound, the observed value, and the tolerance actually applied.
struct CheckRow {
  std::string id;
  std::string claim;
  std::string expected;
  std::string observed;
  std::string tolerance;
  bool pass = false;
  /// A failure that is understood and documented (the claim as stated is
  /// inconsistent with the exact quantities it is built from); such rows
  /// fail honestly but do not fail the run.
  bool allowed_failure = false;
  std::string note;
};

struct CriterionResult {
  int index = 0;
  std::string title;
  std::vector<CheckRow> rows;
  double seconds = 0.0;

  bool pass() const;        ///< every row passed
  bool acceptable() const;  ///< every failing row is an allowed failure
};

struct VerifyReport {
  uint64_t seed = 0;
  std::vector<CriterionResult> criteria;
  bool overall_pass = false;        ///< strict conjunction over all rows
  bool overall_acceptable = false;  ///< conjunction modulo allowed failures
};

inline constexpr int criteria_count = 14;

/// Runs one acceptance criterion (1-based). All Monte Carlo inside is driven
/// by streams derived from (seed, verify tag, criterion-specific replica
/// indices), so a fixed seed gives bit-identical reports.
CriterionResult run_criterion(int index, uint64_t seed);

/// Runs all criteria in order.
VerifyReport run_all(uint64_t seed);

/// One-line rendering: "[ 7] PASS  simulated laws ... (12.3s)".
std::string summary_line(const CriterionResult& criterion);

}  // namespace shu::verify
