#include "dployopt/optimizer.hpp"

#include <algorithm>

#include "dployopt/design_space.hpp"
#include "dployopt/error.hpp"

namespace dployopt {

namespace {

struct Scored {
  const Design* design;
  double score;
  double peak_mem;
  double median_ms;
};

bool ranks_before(const Scored& a, const Scored& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.peak_mem != b.peak_mem) return a.peak_mem < b.peak_mem;
  if (a.median_ms != b.median_ms) return a.median_ms < b.median_ms;
  return design_order(*a.design, *b.design) < 0;
}

}  // namespace

OptimizationResult optimize(const std::vector<ModelVariant>& variants,
                            const DeviceProfile& device,
                            const LookupTable& table, const MooProblem& problem,
                            const std::vector<double>& r_grid,
                            const OptimizeOptions& options) {
  validate_problem(problem);
  const std::vector<Design> designs = enumerate_designs(variants, device, r_grid);

  OptimizationResult result;
  result.evaluated_count = designs.size();
  result.constraint_violations.assign(problem.constraints.size(), 0);

  std::vector<const Design*> feasible;
  for (const auto& d : designs) {
    if (!table.contains(key_of(d))) {
      if (options.skip_missing) {
        ++result.skipped_count;
        continue;
      }
      fail(ErrorCode::MissingEntry,
           "lookup table has no entry for " + key_of(d).str() +
               " (complete search needs full coverage)");
    }
    const auto feas = is_feasible(d, table, problem);
    for (const auto& v : feas.violations)
      ++result.constraint_violations[v.constraint_index];
    if (feas.feasible) feasible.push_back(&d);
  }
  result.feasible_count = feasible.size();
  if (feasible.empty()) return result;  // best stays empty: no feasible design

  MooProblem scored_problem = problem;
  {
    std::vector<Design> domain;
    if (problem.normalize_full_space) {
      for (const auto& d : designs)
        if (table.contains(key_of(d))) domain.push_back(d);
    } else {
      domain.reserve(feasible.size());
      for (const Design* d : feasible) domain.push_back(*d);
    }
    scored_problem.normalizers = compute_normalizers(domain, table, problem);
  }
  result.normalizers_used = scored_problem.normalizers;

  std::vector<Scored> scored;
  scored.reserve(feasible.size());
  for (const Design* d : feasible) {
    const auto& stats = table.at(key_of(*d));
    scored.push_back({d, scalar_score(*d, table, scored_problem),
                      stats.peak_mem_mib, stats.median_ms});
  }
  std::sort(scored.begin(), scored.end(), ranks_before);

  result.best = *scored.front().design;
  result.best_score = scored.front().score;
  const std::size_t k = std::min(options.top_k, scored.size());
  for (std::size_t i = 0; i < k; ++i)
    result.ranked.push_back({*scored[i].design, scored[i].score});
  return result;
}

ExplainReport explain(const OptimizationResult& result, const LookupTable& table,
                      const MooProblem& problem) {
  ExplainReport report;
  report.feasible_count = result.feasible_count;
  report.evaluated_count = result.evaluated_count;

  std::vector<MetricRef> refs;
  auto add_ref = [&](const MetricRef& r) {
    if (std::find(refs.begin(), refs.end(), r) == refs.end()) refs.push_back(r);
  };
  for (const auto& o : problem.objectives) add_ref(o.ref);
  for (const auto& c : problem.constraints) add_ref(c.ref);

  for (const auto& rd : result.ranked) {
    ExplainRow row;
    row.design = rd.design;
    row.score = rd.score;
    row.feasible = is_feasible(rd.design, table, problem).feasible;
    for (const auto& r : refs)
      row.metrics.emplace_back(r.str(), metric_value(rd.design, table, r));
    report.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < problem.constraints.size(); ++i)
    report.violations.emplace_back(problem.constraints[i].str(),
                                   i < result.constraint_violations.size()
                                       ? result.constraint_violations[i]
                                       : 0);
  return report;
}

}  // namespace dployopt
