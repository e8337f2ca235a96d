#include "dployopt/manager.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "dployopt/error.hpp"

namespace dployopt {

void validate_manager_config(const ManagerConfig& c) {
  if (c.window_size < 1)
    fail(ErrorCode::InvalidArgument, "window_size must be >= 1");
  if (c.confirm_windows < 1)
    fail(ErrorCode::InvalidArgument, "confirm_windows must be >= 1");
  if (c.staleness_halflife_windows < 1)
    fail(ErrorCode::InvalidArgument, "staleness_halflife_windows must be >= 1");
  if (!(c.trigger_threshold > 0.0 && c.trigger_threshold < 1.0))
    fail(ErrorCode::InvalidArgument, "trigger_threshold must be in (0,1)");
  if (!(c.switch_margin > 0.0 && c.switch_margin < 1.0))
    fail(ErrorCode::InvalidArgument, "switch_margin must be in (0,1)");
  if (!(c.ewma_alpha > 0.0 && c.ewma_alpha < 1.0))
    fail(ErrorCode::InvalidArgument, "ewma_alpha must be in (0,1)");
}

RuntimeManager::RuntimeManager(ManagerConfig config, const LookupTable& table)
    : config_(config), table_(table) {
  validate_manager_config(config_);
  for (Engine e : {Engine::CPU, Engine::GPU, Engine::NNAPI})
    degradation_[e] = 1.0;
}

std::optional<WindowRecord> RuntimeManager::observe(const Observation& obs,
                                                    const Design& active) {
  if (!obs.inferred) return std::nullopt;  // skipped frames, reload steps
  window_.push_back(obs.latency_ms);
  if (static_cast<int>(window_.size()) < config_.window_size)
    return std::nullopt;

  const double window_median = nearest_rank_percentile(window_, 50);
  window_.clear();
  const double expected = table_.at(key_of(active)).median_ms;
  const double ratio = window_median / expected;
  const Engine engine = active.config.engine;

  const double d_prior = degradation_.at(engine);
  if (std::abs(ratio - d_prior) / d_prior > config_.trigger_threshold)
    ++consecutive_;
  else
    consecutive_ = 0;

  degradation_[engine] =
      std::max(1.0, (1.0 - config_.ewma_alpha) * d_prior + config_.ewma_alpha * ratio);
  const double decay =
      std::pow(0.5, 1.0 / config_.staleness_halflife_windows);
  for (auto& [e, d] : degradation_)
    if (e != engine) d = 1.0 + (d - 1.0) * decay;

  WindowRecord rec;
  rec.window = ++window_index_;
  rec.engine = engine;
  rec.ratio = ratio;
  rec.degradation = degradation_;
  rec.trigger = consecutive_ >= config_.confirm_windows;
  return rec;
}

LookupTable RuntimeManager::adjusted_table() const {
  LookupTable adjusted = table_;
  for (auto& [key, stats] : adjusted.entries) {
    const double d = degradation_.at(key.engine);
    if (d == 1.0) continue;
    stats.min_ms *= d;
    stats.max_ms *= d;
    stats.avg_ms *= d;
    stats.median_ms *= d;
    for (auto& [n, v] : stats.percentiles) v *= d;
    stats.fps /= d;
  }
  return adjusted;
}

std::optional<Design> RuntimeManager::adapt(
    const MooProblem& problem, const std::vector<ModelVariant>& variants,
    const DeviceProfile& device, const std::vector<double>& r_grid,
    const Design& current) {
  consecutive_ = 0;

  const LookupTable adjusted = adjusted_table();
  const OptimizationResult res =
      optimize(variants, device, adjusted, problem, r_grid, {.top_k = 1});
  if (!res.best) return std::nullopt;  // nothing feasible: retain current

  if (design_order(*res.best, current) == 0) return std::nullopt;

  MooProblem scored = problem;
  scored.normalizers = res.normalizers_used;
  if (!is_feasible(current, adjusted, scored).feasible)
    return res.best;  // current design untenable under the new conditions

  const double current_score = scalar_score(current, adjusted, scored);
  const double margin = config_.switch_margin * std::abs(current_score);
  if (res.best_score - current_score > margin) return res.best;
  return std::nullopt;
}

void RuntimeManager::notify_switch() {
  window_.clear();
  consecutive_ = 0;
}

ManagedRun run_managed(const Design& initial, const MooProblem& problem,
                       const std::vector<ModelVariant>& variants,
                       const DeviceProfile& device, const LookupTable& table,
                       const Scenario& scenario, const ManagerConfig& config,
                       const std::vector<double>& r_grid) {
  DeviceSimulator sim(scenario, table, initial);
  RuntimeManager manager(config, table);
  ManagedRun out;
  out.trace.observations.reserve(static_cast<std::size_t>(scenario.steps));

  for (int k = 0; k < scenario.steps; ++k) {
    Observation obs = sim.step();
    auto rec = manager.observe(obs, sim.active());
    if (rec) {
      if (rec->trigger) {
        auto next = manager.adapt(problem, variants, device, r_grid, sim.active());
        if (next) {
          rec->switched_to = design_str(*next);
          out.trace.switches.push_back({obs.step, sim.active(), *next});
          sim.request_switch(*next);
          manager.notify_switch();
        }
      }
      out.log.push_back(*rec);
    }
    out.trace.observations.push_back(std::move(obs));
  }
  return out;
}

void write_manager_log(std::ostream& out, const std::vector<WindowRecord>& log) {
  for (const auto& rec : log) {
    out << "{\"window\":" << rec.window << ",\"engine\":\""
        << to_string(rec.engine) << "\",\"ratio\":" << rec.ratio << ",\"d\":{";
    bool first = true;
    for (const auto& [e, d] : rec.degradation) {
      if (!first) out << ',';
      first = false;
      out << '"' << to_string(e) << "\":" << d;
    }
    out << "},\"trigger\":" << (rec.trigger ? "true" : "false")
        << ",\"switched_to\":";
    if (rec.switched_to)
      out << '"' << *rec.switched_to << '"';
    else
      out << "null";
    out << "}\n";
  }
}

}  // namespace dployopt
