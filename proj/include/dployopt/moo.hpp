#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dployopt/measurements.hpp"
#include "dployopt/model.hpp"

namespace dployopt {

enum class Metric { Latency, Fps, Memory, Accuracy };

const char* to_string(Metric m);
Metric metric_from_string(const std::string& s);

/// Which aggregate of a metric to read. Only latency carries a full spread of
/// statistics; fps is a single table value, memory is always peak, accuracy is
/// a scalar of the variant (use Kind::Scalar for the latter two).
struct Statistic {
  enum class Kind { Avg, Median, Min, Max, Percentile, Scalar };
  Kind kind = Kind::Scalar;
  int percentile = 0;  // meaningful when kind == Percentile, in [1,99]

  static Statistic avg() { return {Kind::Avg, 0}; }
  static Statistic median() { return {Kind::Median, 0}; }
  static Statistic min() { return {Kind::Min, 0}; }
  static Statistic max() { return {Kind::Max, 0}; }
  static Statistic pct(int n) { return {Kind::Percentile, n}; }
  static Statistic scalar() { return {Kind::Scalar, 0}; }

  auto operator<=>(const Statistic&) const = default;
  std::string str() const;
};

Statistic statistic_from_string(const std::string& s);

struct MetricRef {
  Metric metric = Metric::Latency;
  Statistic statistic;

  auto operator<=>(const MetricRef&) const = default;
  std::string str() const;
};

enum class ObjectiveMode { Maximize, Minimize, Target };

struct ObjectiveSpec {
  MetricRef ref;
  ObjectiveMode mode = ObjectiveMode::Maximize;
  double target = 0.0;  // for ObjectiveMode::Target, in metric units
  double weight = 1.0;  // must be > 0
};

enum class ConstraintDirection {
  AtMost,
  AtLeast,
  /// Value must not drop more than `bound` below the problem's
  /// reference_accuracy: value >= reference - bound.
  AtLeastDrop,
};

struct ConstraintSpec {
  MetricRef ref;
  double bound = 0.0;
  ConstraintDirection direction = ConstraintDirection::AtMost;

  std::string str() const;
};

struct MooProblem {
  std::vector<ObjectiveSpec> objectives;
  std::vector<ConstraintSpec> constraints;
  std::optional<double> reference_accuracy;
  /// Per-metric positive scales used to make weighted terms dimensionless.
  /// Usually filled by the optimizer from the feasible space; may be pinned
  /// explicitly. Target-mode terms normalize by |target| instead.
  std::map<Metric, double> normalizers;
  /// When true the optimizer computes missing normalizers over the whole
  /// enumerated space instead of the feasible subset.
  bool normalize_full_space = false;
};

void validate_problem(const MooProblem& p);

/// Read one metric statistic for a design. Latency and memory come straight
/// from the lookup entry; fps is the table value divided by the design's
/// recognition rate (inferring on a fraction r of frames sustains a stream
/// 1/r times faster); accuracy is the variant's scalar.
double metric_value(const Design& design, const LookupTable& table,
                    const MetricRef& ref);

struct ConstraintViolation {
  std::size_t constraint_index = 0;
  double value = 0.0;
  double limit = 0.0;
};

struct FeasibilityResult {
  bool feasible = true;
  std::vector<ConstraintViolation> violations;  // all of them, not the first
};

FeasibilityResult is_feasible(const Design& design, const LookupTable& table,
                              const MooProblem& problem);

/// Weighted scalarization: maximize terms add value/normalizer, minimize
/// terms subtract it, target terms subtract |value - target| / |target|.
/// Throws MissingNormalizer when an objective's metric has no normalizer.
double scalar_score(const Design& design, const LookupTable& table,
                    const MooProblem& problem);

/// Max observed value per objective metric over `designs`, for metrics not
/// already pinned in problem.normalizers. Non-positive maxima fall back to 1.
std::map<Metric, double> compute_normalizers(const std::vector<Design>& designs,
                                             const LookupTable& table,
                                             const MooProblem& problem);

/// The three canned use-cases. reference_accuracy is left unset on MaxFps;
/// callers fill it before evaluating feasibility.
MooProblem preset_max_fps(double epsilon,
                          std::optional<Statistic> stat = std::nullopt);
MooProblem preset_target_latency(double t_target_ms,
                                 std::optional<Statistic> stat = std::nullopt);
MooProblem preset_max_acc_max_fps(double w_fps);

}  // namespace dployopt
