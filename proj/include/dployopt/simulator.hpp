#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "dployopt/measurements.hpp"
#include "dployopt/model.hpp"
#include "dployopt/rng.hpp"

namespace dployopt {

/// Piecewise-constant latency multiplier per engine: the factor active at a
/// step is the entry with the largest start_step <= step (default 1).
struct LoadPoint {
  int start_step = 0;
  Engine engine = Engine::CPU;
  double factor = 1.0;  // >= 1; 2 means 2x slower execution
};

/// Hysteretic throttling model: heat accumulates per inference, cools every
/// step, and once heat reaches throttle_threshold the engine's latency is
/// multiplied by throttle_factor until heat falls to release_threshold.
struct ThermalParams {
  double heat_per_inference = 0.0;
  double cooling_per_step = 0.0;
  double throttle_threshold = std::numeric_limits<double>::infinity();
  double release_threshold = 0.0;
  double throttle_factor = 1.0;
};

struct Scenario {
  std::uint64_t seed = 0;
  int steps = 1;
  double jitter = 0.0;  // latency noise fraction, uniform(-jitter, +jitter)
  double switch_penalty = 2.0;  // reload step costs base * penalty
  std::vector<LoadPoint> load_trace;
  std::map<Engine, ThermalParams> thermal;  // missing engines are inert
};

void validate_scenario(const Scenario& s);

struct Observation {
  int step = 0;
  Engine engine = Engine::CPU;
  bool inferred = false;
  double latency_ms = 0.0;  // 0 on frame-skipped steps
  double load_factor = 1.0;
  bool throttled = false;
  double heat = 0.0;  // active engine, after this step's update
  std::optional<Design> switched_to;  // set on the reload step of a switch
};

struct SwitchEvent {
  int step = 0;
  Design from;
  Design to;
};

struct SimTrace {
  std::vector<Observation> observations;
  std::vector<SwitchEvent> switches;

  /// Mean/median/percentile over latency-bearing steps (inference + reload).
  double mean_latency_ms() const;
  double median_latency_ms() const;
  double percentile_latency_ms(int n) const;
};

/// Deterministic discrete-time executor of one design against a lookup table.
/// Step k performs an inference iff floor(k*r) > floor((k-1)*r), which spreads
/// the recognition rate evenly (r=0.5: every second step).
///
/// Observed latency composes multiplicatively: base median x load factor x
/// throttle factor x (1 + noise). The active governor hooks into the thermal
/// model: "performance" halves cooling, "energy_step" halves heat per
/// inference.
class DeviceSimulator {
 public:
  DeviceSimulator(Scenario scenario, const LookupTable& table, Design initial);

  /// Advance one step. A pending switch turns this step into a reload step:
  /// no frame is processed and the observed latency is the new design's base
  /// median times switch_penalty.
  Observation step();

  /// Apply a design switch between steps; the next step becomes the reload.
  void request_switch(const Design& next);

  const Design& active() const { return active_; }
  int current_step() const { return step_; }
  double heat(Engine e) const { return heat_.at(e); }
  bool throttled(Engine e) const { return throttled_.at(e); }
  double load_factor(Engine e, int step) const;

 private:
  const ThermalParams& params(Engine e) const;

  Scenario scenario_;
  const LookupTable& table_;
  Design active_;
  int step_ = 0;
  bool pending_reload_ = false;
  std::map<Engine, double> heat_;
  std::map<Engine, bool> throttled_;
  std::map<Engine, std::vector<LoadPoint>> load_by_engine_;
  Rng rng_;
};

/// Run the scenario with the design fixed (the statically selected baseline).
SimTrace run_scenario(const Design& initial, const LookupTable& table,
                      const Scenario& scenario);

/// Columns: step,engine,inferred,observed_latency_ms,load_factor,throttled,switched_to
void write_trace_csv(std::ostream& out, const SimTrace& trace);

}  // namespace dployopt
