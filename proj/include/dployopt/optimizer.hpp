#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dployopt/moo.hpp"

namespace dployopt {

struct OptimizeOptions {
  std::size_t top_k = 10;
  /// Skip designs whose key is missing from the table instead of erroring.
  bool skip_missing = false;
};

struct RankedDesign {
  Design design;
  double score = 0.0;
};

struct OptimizationResult {
  std::optional<Design> best;  // present iff feasible_count > 0
  double best_score = 0.0;
  std::size_t feasible_count = 0;
  std::size_t evaluated_count = 0;
  std::size_t skipped_count = 0;
  std::vector<RankedDesign> ranked;  // top-k, score desc then tie-break
  /// Violation count per constraint index, over all evaluated designs.
  std::vector<std::size_t> constraint_violations;
  std::map<Metric, double> normalizers_used;
};

/// Exhaustive search: enumerate every design, filter by feasibility, rank by
/// scalar score. Ties break toward lower peak memory, then lower median
/// latency, then ascending design key, so the result is a total order and
/// independent of input permutation.
OptimizationResult optimize(const std::vector<ModelVariant>& variants,
                            const DeviceProfile& device,
                            const LookupTable& table, const MooProblem& problem,
                            const std::vector<double>& r_grid,
                            const OptimizeOptions& options = {});

/// Human-readable ranking dump: per ranked design, every metric statistic the
/// problem references plus the feasibility verdict; on an infeasible result,
/// the per-constraint violation counts.
struct ExplainRow {
  Design design;
  double score = 0.0;
  bool feasible = true;
  std::vector<std::pair<std::string, double>> metrics;  // ref string -> value
};

struct ExplainReport {
  std::vector<ExplainRow> rows;
  std::vector<std::pair<std::string, std::size_t>> violations;  // constraint -> count
  std::size_t feasible_count = 0;
  std::size_t evaluated_count = 0;
};

ExplainReport explain(const OptimizationResult& result, const LookupTable& table,
                      const MooProblem& problem);

}  // namespace dployopt
