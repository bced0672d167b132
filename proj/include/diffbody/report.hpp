#pragma once

#include "diffbody/io.hpp"

namespace diffbody {

enum class CheckStatus { Pass, Fail, Skipped };
std::string_view status_name(CheckStatus s);

struct CheckResult {
  std::string name;
  std::string paper_ref;  // "module/operation" anchor
  CheckStatus status = CheckStatus::Fail;
  Json value;             // "p/q" for exact values, a number for estimates
  double error = 0;       // standard error; 0 for exact checks
  std::string tolerance;
  double seconds = 0;
  std::string reason;     // set when skipped or failed
};

struct SuiteConfig {
  std::string suite = "all";  // kernel | mdiff | polar | symmetry | gaussian | all
  std::uint64_t seed = 1;
  long samples = 100000;
  long min_samples = 10000;   // MC checks below this are skipped
  int budget_dim = kDefaultBudgetDim;
  bool timing = true;         // false writes 0 seconds, for byte-stable reports
  /// Throws ConfigInvalid.
  void validate() const;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;  // sorted by name
  bool ok() const;
  long count(CheckStatus s) const;
};

Json to_json(const Report& r);
std::vector<std::string> suite_names();

/// Runs every check of the suite on a worker pool. Failures and errors are
/// recorded, never thrown; BudgetExceeded and short sample budgets become
/// skipped.
Report run_suite(const SuiteConfig& config);

/// Summary of a polytope, H-polytope or collection file: dimension, vertex
/// and facet counts, exact volume when dim ≤ budget_dim, centroid and the
/// origin-interior flag; collections also list D^m data within budget.
Json describe(const Json& input, int budget_dim = kDefaultBudgetDim);

}  // namespace diffbody
