#pragma once

#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dployopt/optimizer.hpp"
#include "dployopt/simulator.hpp"

namespace dployopt {

struct ManagerConfig {
  int window_size = 20;             // observations per monitoring window
  double trigger_threshold = 0.10;  // relative latency deviation that counts
  int confirm_windows = 3;          // consecutive deviating windows to fire
  double switch_margin = 0.05;      // required relative score improvement
  double ewma_alpha = 0.3;
  int staleness_halflife_windows = 10;  // idle engines decay toward 1
};

void validate_manager_config(const ManagerConfig& c);

/// One ManagerLog record, emitted at each window boundary.
struct WindowRecord {
  int window = 0;
  Engine engine = Engine::CPU;
  double ratio = 1.0;  // window median / expected median
  std::map<Engine, double> degradation;  // post-update snapshot
  bool trigger = false;                  // the trigger fired at this boundary
  std::optional<std::string> switched_to;
};

/// Tracks per-engine degradation multipliers d_e >= 1 (observed/expected
/// latency) from windows of observations, and re-searches the design space
/// with degradation-adjusted lookup values when a sustained deviation is
/// confirmed.
class RuntimeManager {
 public:
  RuntimeManager(ManagerConfig config, const LookupTable& table);

  /// Feed one simulator observation. Frame-skipped steps and reload steps are
  /// ignored. Returns a record at each window boundary; record.trigger tells
  /// the caller to invoke adapt().
  std::optional<WindowRecord> observe(const Observation& obs,
                                      const Design& active);

  /// Re-optimize over the degradation-adjusted table. Returns the new design
  /// only when it beats the current design's adjusted score by the switch
  /// margin (always, when the current design is infeasible under the adjusted
  /// table). Returns nothing when no design is feasible (the caller keeps the
  /// current design). Resets the trigger counter either way.
  std::optional<Design> adapt(const MooProblem& problem,
                              const std::vector<ModelVariant>& variants,
                              const DeviceProfile& device,
                              const std::vector<double>& r_grid,
                              const Design& current);

  /// Must be called when a switch is applied: discards the partial window
  /// (its observations came from the previous design).
  void notify_switch();

  const std::map<Engine, double>& degradation() const { return degradation_; }
  int window_index() const { return window_index_; }

  /// Copy of the base table with latency scaled by d_e and fps divided by it.
  LookupTable adjusted_table() const;

 private:
  ManagerConfig config_;
  const LookupTable& table_;
  std::map<Engine, double> degradation_;
  std::vector<double> window_;
  int consecutive_ = 0;
  int window_index_ = 0;
};

struct ManagedRun {
  SimTrace trace;
  std::vector<WindowRecord> log;
};

/// Full closed loop: simulate, monitor, adapt, switch (with the simulator's
/// reload penalty). Deterministic for a fixed scenario seed.
ManagedRun run_managed(const Design& initial, const MooProblem& problem,
                       const std::vector<ModelVariant>& variants,
                       const DeviceProfile& device, const LookupTable& table,
                       const Scenario& scenario, const ManagerConfig& config,
                       const std::vector<double>& r_grid);

/// JSON-lines, one record per window.
void write_manager_log(std::ostream& out, const std::vector<WindowRecord>& log);

}  // namespace dployopt
