#include "dployopt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dployopt/error.hpp"

namespace dployopt {

namespace {

const ThermalParams kInertThermal{};

bool inference_due(int step, double r) {
  return std::floor(step * r) > std::floor((step - 1) * r);
}

}  // namespace

void validate_scenario(const Scenario& s) {
  if (s.steps < 1) fail(ErrorCode::InvalidArgument, "scenario steps must be >= 1");
  if (s.jitter < 0.0 || s.jitter >= 1.0)
    fail(ErrorCode::InvalidArgument, "scenario jitter must be in [0,1)");
  if (s.switch_penalty < 1.0)
    fail(ErrorCode::InvalidArgument, "switch_penalty must be >= 1");
  std::map<Engine, int> last_start;
  for (const auto& p : s.load_trace) {
    if (p.factor < 1.0)
      fail(ErrorCode::InvalidArgument, "load factors must be >= 1");
    auto it = last_start.find(p.engine);
    if (it != last_start.end() && p.start_step < it->second)
      fail(ErrorCode::InvalidArgument,
           std::string("load trace for ") + to_string(p.engine) +
               " must have nondecreasing start_step");
    last_start[p.engine] = p.start_step;
  }
  for (const auto& [engine, t] : s.thermal) {
    if (t.throttle_factor < 1.0)
      fail(ErrorCode::InvalidArgument, "throttle_factor must be >= 1");
    if (!(t.release_threshold < t.throttle_threshold))
      fail(ErrorCode::InvalidArgument,
           "release_threshold must be below throttle_threshold");
    if (t.heat_per_inference < 0.0 || t.cooling_per_step < 0.0)
      fail(ErrorCode::InvalidArgument, "thermal rates must be >= 0");
  }
}

double SimTrace::mean_latency_ms() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& o : observations)
    if (o.latency_ms > 0.0) {
      sum += o.latency_ms;
      ++n;
    }
  return n ? sum / n : 0.0;
}

double SimTrace::median_latency_ms() const { return percentile_latency_ms(50); }

double SimTrace::percentile_latency_ms(int n) const {
  std::vector<double> lat;
  for (const auto& o : observations)
    if (o.latency_ms > 0.0) lat.push_back(o.latency_ms);
  if (lat.empty()) return 0.0;
  return nearest_rank_percentile(std::move(lat), n);
}

DeviceSimulator::DeviceSimulator(Scenario scenario, const LookupTable& table,
                                 Design initial)
    : scenario_(std::move(scenario)),
      table_(table),
      active_(std::move(initial)),
      rng_(scenario_.seed) {
  validate_scenario(scenario_);
  table_.at(key_of(active_));  // fail fast on an unknown initial design
  for (Engine e : {Engine::CPU, Engine::GPU, Engine::NNAPI}) {
    heat_[e] = 0.0;
    throttled_[e] = false;
  }
  for (const auto& p : scenario_.load_trace) load_by_engine_[p.engine].push_back(p);
}

const ThermalParams& DeviceSimulator::params(Engine e) const {
  auto it = scenario_.thermal.find(e);
  return it == scenario_.thermal.end() ? kInertThermal : it->second;
}

double DeviceSimulator::load_factor(Engine e, int step) const {
  auto it = load_by_engine_.find(e);
  if (it == load_by_engine_.end()) return 1.0;
  double factor = 1.0;
  for (const auto& p : it->second) {
    if (p.start_step <= step) factor = p.factor;
    else break;
  }
  return factor;
}

Observation DeviceSimulator::step() {
  ++step_;
  Observation obs;
  obs.step = step_;
  obs.engine = active_.config.engine;
  obs.load_factor = load_factor(obs.engine, step_);
  obs.throttled = throttled_.at(obs.engine);

  const StatSummary& stats = table_.at(key_of(active_));
  const std::string& governor = active_.config.governor;
  const double heat_scale = governor == "energy_step" ? 0.5 : 1.0;
  const double cool_scale = governor == "performance" ? 0.5 : 1.0;

  if (pending_reload_) {
    pending_reload_ = false;
    obs.latency_ms = stats.median_ms * scenario_.switch_penalty;
    obs.switched_to = active_;
  } else if (inference_due(step_, active_.config.recognition_rate)) {
    obs.inferred = true;
    const double noise =
        scenario_.jitter > 0.0 ? rng_.uniform(-scenario_.jitter, scenario_.jitter)
                               : 0.0;
    const double throttle =
        obs.throttled ? params(obs.engine).throttle_factor : 1.0;
    obs.latency_ms = stats.median_ms * obs.load_factor * throttle * (1.0 + noise);
    heat_[obs.engine] += params(obs.engine).heat_per_inference * heat_scale;
  }

  for (Engine e : {Engine::CPU, Engine::GPU, Engine::NNAPI}) {
    const ThermalParams& t = params(e);
    heat_[e] = std::max(0.0, heat_[e] - t.cooling_per_step * cool_scale);
    if (!throttled_[e] && heat_[e] >= t.throttle_threshold)
      throttled_[e] = true;
    else if (throttled_[e] && heat_[e] <= t.release_threshold)
      throttled_[e] = false;
  }
  obs.heat = heat_.at(obs.engine);
  return obs;
}

void DeviceSimulator::request_switch(const Design& next) {
  table_.at(key_of(next));  // must be a known design
  active_ = next;
  pending_reload_ = true;
}

SimTrace run_scenario(const Design& initial, const LookupTable& table,
                      const Scenario& scenario) {
  DeviceSimulator sim(scenario, table, initial);
  SimTrace trace;
  trace.observations.reserve(static_cast<std::size_t>(scenario.steps));
  for (int k = 0; k < scenario.steps; ++k) trace.observations.push_back(sim.step());
  return trace;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  out << "step,engine,inferred,observed_latency_ms,load_factor,throttled,"
         "switched_to\n";
  char buf[64];
  for (const auto& o : trace.observations) {
    out << o.step << ',' << to_string(o.engine) << ',' << (o.inferred ? 1 : 0)
        << ',';
    std::snprintf(buf, sizeof buf, "%.6f", o.latency_ms);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.6f", o.load_factor);
    out << buf << ',' << (o.throttled ? 1 : 0) << ',';
    if (o.switched_to) out << design_str(*o.switched_to);
    out << '\n';
  }
}

}  // namespace dployopt
