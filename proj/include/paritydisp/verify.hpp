#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paritydisp/linalg.hpp"
#include "paritydisp/operators.hpp"

namespace paritydisp {

enum class Verdict { pass, fail, skipped };
std::string to_string(Verdict v);

/// Parameters of one check evaluation; only the ones the family uses are set.
struct ParamPoint {
  std::optional<int> m;
  std::optional<cplx> z;
  std::optional<cplx> u;
  std::optional<double> lambda;
  std::optional<double> lambda2;
  std::optional<int> n;

  std::string describe() const;
};

struct CheckResult {
  std::string check_id;
  std::string variant;
  ParamPoint params;
  int dim = 0;
  int interior_dim = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::skipped;
  /// Printed-but-incorrect form of an equation: expected to fail, never
  /// counted as a suite failure.
  bool discrepancy = false;
  std::string note;

  bool genuine_failure() const { return verdict == Verdict::fail && !discrepancy; }
};

struct SuiteEnvironment {
  int dim = 0;
  int interior_dim = 0;
  double tail_tol = 0.0;
  double safe_radius = 0.0;
  double default_tolerance = 0.0;
  double convergence_threshold = 0.0;
  std::string fault = "none";
};

struct SuiteSummary {
  int total = 0;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  int genuine_failures = 0;
  /// Discrepancy variants that failed as expected / unexpectedly passed.
  int discrepancies_confirmed = 0;
  int discrepancies_not_reproduced = 0;
};

struct SuiteReport {
  SuiteEnvironment environment;
  SuiteSummary summary;
  std::vector<CheckResult> results;
  std::string generated_at;

  bool ok() const { return summary.genuine_failures == 0; }
};

struct ParameterGrid {
  int dim = 128;
  std::optional<int> interior_dim;
  double tail_tol = 1e-10;
  std::vector<int> ms{1, 2, 3};
  std::vector<cplx> zs{{0.2, 0.0}, {0.5, 0.3}};
  std::vector<double> lambdas{0.0, 0.7, 0.78539816339744830962, 1.57079632679489661923};
  std::vector<cplx> us{{0.0, 0.4}};
  std::vector<int> basis_ns{0, 1, 2, 3, 5};
  int reality_n_max = 7;
};

struct SuiteOptions {
  OperatorConfig ops{};
  double default_tolerance = 1e-8;
  /// Keyed by "check-id" (all variants) or "check-id:variant".
  std::map<std::string, double> tolerance_overrides;
  double convergence_threshold = 1e-8;
  int jobs = 1;
  /// Used verbatim as generated_at when set; otherwise the current UTC time.
  std::optional<std::string> timestamp;
};

struct CheckVariantInfo {
  std::string name;
  std::optional<double> tolerance;  // nullopt: SuiteOptions::default_tolerance
  bool discrepancy = false;
};

struct CheckFamilyInfo {
  std::string id;
  std::string summary;
  std::vector<std::string> covers;  // equation tags, e.g. "eq15a"
  std::vector<CheckVariantInfo> variants;
};

/// Every registered check family, sorted by id.
std::vector<CheckFamilyInfo> check_registry();

/// Equation tags the registry must cover: eq1..eq10, eq11a..eq39a and the two
/// unnumbered parity-action equations.
std::vector<std::string> equation_tags();

/// Tags from equation_tags() with no covering family (empty when complete).
std::vector<std::string> audit_registry();

/// Runs the selected families (all when `selection` is empty) over the grid.
/// Throws InvalidArgument for an unknown check id.
SuiteReport run_suite(const ParameterGrid& grid, const std::vector<std::string>& selection = {},
                      const SuiteOptions& options = {});

}  // namespace paritydisp
