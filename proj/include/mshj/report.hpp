#pragma once

#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mshj/jet_core.hpp"

namespace mshj {

/// One named residual family evaluated at a single point.
struct FamilyResidual {
  std::string name;
  std::vector<double> values;
};

using PointResiduals = std::vector<FamilyResidual>;
using PointEvaluator = std::function<PointResiduals(std::span<const double> point)>;

/// Residual suites. Generalized: tangency equations only. Standard: adds the
/// isotropy (Lagrangian) or closedness (Hamiltonian) conditions. Classic: the
/// generating-form HJ equation. Coefficients: the field equations and
/// integrability conditions of the coefficient functions F or G.
enum class Suite { Generalized, Standard, Classic, Coefficients };

const char* suite_name(Suite s);
Suite parse_suite(const std::string& text);  // throws ConfigError

enum class ErrorPolicy { FailFast, RecordAndSkip };

struct SweepOptions {
  unsigned jobs = 1;
  ErrorPolicy policy = ErrorPolicy::FailFast;
  bool keep_pointwise = false;  // per-point max |r| of each family
};

struct FamilyStats {
  std::string name;
  std::size_t components = 0;  // per point
  double max_abs = 0.0;
  double rms = 0.0;
  std::vector<double> argmax;
  std::size_t argmax_component = 0;
  std::vector<double> pointwise;  // only with keep_pointwise
};

struct ResidualReport {
  std::vector<std::string> axis_names;
  std::vector<FamilyStats> families;
  std::size_t grid_size = 0;
  std::size_t skipped = 0;
  std::vector<std::string> skipped_messages;  // first few
  double tolerance = 0.0;
  bool pass = false;

  double max_abs() const;
  const FamilyStats* family(const std::string& name) const;
  /// Per-point max over all families (requires keep_pointwise).
  std::vector<double> pointwise_max() const;
};

/// Evaluates `eval` on every grid point and aggregates max, RMS and argmax per
/// family. RMS sums squares pairwise over fixed-size blocks, so the result does
/// not depend on the job count. Passes iff every family max is below `tol` and
/// no point was skipped.
ResidualReport grid_report(const PointEvaluator& eval, const GridSpec& grid, double tol,
                           const SweepOptions& options = {});

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

void print_report(std::ostream& os, const ResidualReport& report, const std::string& title);

}  // namespace mshj
