#include "dployopt/moo.hpp"

#include <algorithm>
#include <cmath>

#include "dployopt/error.hpp"

namespace dployopt {

const char* to_string(Metric m) {
  switch (m) {
    case Metric::Latency: return "latency";
    case Metric::Fps: return "fps";
    case Metric::Memory: return "memory";
    case Metric::Accuracy: return "accuracy";
  }
  return "?";
}

Metric metric_from_string(const std::string& s) {
  if (s == "latency") return Metric::Latency;
  if (s == "fps") return Metric::Fps;
  if (s == "memory") return Metric::Memory;
  if (s == "accuracy") return Metric::Accuracy;
  fail(ErrorCode::InvalidArgument, "unknown metric \"" + s + "\"");
}

std::string Statistic::str() const {
  switch (kind) {
    case Kind::Avg: return "avg";
    case Kind::Median: return "median";
    case Kind::Min: return "min";
    case Kind::Max: return "max";
    case Kind::Percentile: return "p" + std::to_string(percentile);
    case Kind::Scalar: return "scalar";
  }
  return "?";
}

Statistic statistic_from_string(const std::string& s) {
  if (s == "avg") return Statistic::avg();
  if (s == "median") return Statistic::median();
  if (s == "min") return Statistic::min();
  if (s == "max") return Statistic::max();
  if (s == "scalar") return Statistic::scalar();
  if (s.size() >= 2 && s[0] == 'p') {
    try {
      std::size_t pos = 0;
      int n = std::stoi(s.substr(1), &pos);
      if (pos == s.size() - 1 && n >= 1 && n <= 99) return Statistic::pct(n);
    } catch (const std::exception&) {
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown statistic \"" + s + "\"");
}

std::string MetricRef::str() const {
  return std::string(to_string(metric)) + "." + statistic.str();
}

std::string ConstraintSpec::str() const {
  std::string dir;
  switch (direction) {
    case ConstraintDirection::AtMost: dir = "<="; break;
    case ConstraintDirection::AtLeast: dir = ">="; break;
    case ConstraintDirection::AtLeastDrop: dir = ">= ref-"; break;
  }
  return ref.str() + " " + dir + " " + std::to_string(bound);
}

void validate_problem(const MooProblem& p) {
  if (p.objectives.empty())
    fail(ErrorCode::InvalidArgument, "problem needs at least one objective");
  for (const auto& o : p.objectives) {
    if (o.weight <= 0.0)
      fail(ErrorCode::InvalidArgument,
           "objective " + o.ref.str() + ": weight must be > 0");
    if (o.ref.statistic.kind == Statistic::Kind::Percentile &&
        (o.ref.statistic.percentile < 1 || o.ref.statistic.percentile > 99))
      fail(ErrorCode::InvalidArgument,
           "objective " + o.ref.str() + ": percentile out of [1,99]");
  }
  for (const auto& c : p.constraints) {
    if (!std::isfinite(c.bound))
      fail(ErrorCode::InvalidArgument,
           "constraint " + c.str() + ": bound must be finite");
    if (c.ref.statistic.kind == Statistic::Kind::Percentile &&
        (c.ref.statistic.percentile < 1 || c.ref.statistic.percentile > 99))
      fail(ErrorCode::InvalidArgument,
           "constraint " + c.str() + ": percentile out of [1,99]");
  }
  for (const auto& [metric, value] : p.normalizers)
    if (!(value > 0.0))
      fail(ErrorCode::InvalidArgument,
           std::string("normalizer for ") + to_string(metric) +
               " must be > 0");
}

namespace {

double latency_statistic(const StatSummary& s, const Statistic& stat) {
  switch (stat.kind) {
    case Statistic::Kind::Avg: return s.avg_ms;
    case Statistic::Kind::Median: return s.median_ms;
    case Statistic::Kind::Min: return s.min_ms;
    case Statistic::Kind::Max: return s.max_ms;
    case Statistic::Kind::Percentile: {
      auto it = s.percentiles.find(stat.percentile);
      if (it == s.percentiles.end())
        fail(ErrorCode::InvalidArgument,
             "p" + std::to_string(stat.percentile) +
                 " was not computed for this lookup table");
      return it->second;
    }
    case Statistic::Kind::Scalar: return s.median_ms;
  }
  return s.median_ms;
}

}  // namespace

double metric_value(const Design& design, const LookupTable& table,
                    const MetricRef& ref) {
  switch (ref.metric) {
    case Metric::Accuracy:
      return design.model.accuracy;
    case Metric::Memory:
      return table.at(key_of(design)).peak_mem_mib;
    case Metric::Fps:
      return table.at(key_of(design)).fps / design.config.recognition_rate;
    case Metric::Latency:
      return latency_statistic(table.at(key_of(design)), ref.statistic);
  }
  fail(ErrorCode::InvalidArgument, "bad metric");
}

FeasibilityResult is_feasible(const Design& design, const LookupTable& table,
                              const MooProblem& problem) {
  FeasibilityResult res;
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& c = problem.constraints[i];
    const double value = metric_value(design, table, c.ref);
    double limit = c.bound;
    bool ok = true;
    switch (c.direction) {
      case ConstraintDirection::AtMost:
        ok = value <= limit;
        break;
      case ConstraintDirection::AtLeast:
        ok = value >= limit;
        break;
      case ConstraintDirection::AtLeastDrop: {
        if (!problem.reference_accuracy)
          fail(ErrorCode::MissingReference,
               "constraint " + c.str() + " needs reference_accuracy");
        limit = *problem.reference_accuracy - c.bound;
        ok = value >= limit;
        break;
      }
    }
    if (!ok) {
      res.feasible = false;
      res.violations.push_back({i, value, limit});
    }
  }
  return res;
}

double scalar_score(const Design& design, const LookupTable& table,
                    const MooProblem& problem) {
  double score = 0.0;
  for (const auto& o : problem.objectives) {
    const double value = metric_value(design, table, o.ref);
    double term = 0.0;
    if (o.mode == ObjectiveMode::Target) {
      const double norm = o.target != 0.0 ? std::abs(o.target) : 1.0;
      term = -std::abs(value - o.target) / norm;
    } else {
      auto it = problem.normalizers.find(o.ref.metric);
      if (it == problem.normalizers.end())
        fail(ErrorCode::MissingNormalizer,
             std::string("no normalizer for metric ") + to_string(o.ref.metric));
      const double norm = it->second;
      term = o.mode == ObjectiveMode::Maximize ? value / norm : -value / norm;
    }
    score += o.weight * term;
  }
  return score;
}

std::map<Metric, double> compute_normalizers(const std::vector<Design>& designs,
                                             const LookupTable& table,
                                             const MooProblem& problem) {
  std::map<Metric, double> out = problem.normalizers;
  for (const auto& o : problem.objectives) {
    if (o.mode == ObjectiveMode::Target) continue;
    if (out.count(o.ref.metric)) continue;
    double best = 0.0;
    for (const auto& d : designs)
      best = std::max(best, metric_value(d, table, o.ref));
    out[o.ref.metric] = best > 0.0 ? best : 1.0;
  }
  return out;
}

MooProblem preset_max_fps(double epsilon, std::optional<Statistic> stat) {
  if (epsilon < 0.0)
    fail(ErrorCode::InvalidArgument, "epsilon must be >= 0");
  MooProblem p;
  p.objectives.push_back(
      {MetricRef{Metric::Fps, stat.value_or(Statistic::avg())},
       ObjectiveMode::Maximize, 0.0, 1.0});
  p.constraints.push_back({MetricRef{Metric::Accuracy, Statistic::scalar()},
                           epsilon, ConstraintDirection::AtLeastDrop});
  return p;
}

MooProblem preset_target_latency(double t_target_ms,
                                 std::optional<Statistic> stat) {
  if (t_target_ms <= 0.0)
    fail(ErrorCode::InvalidArgument, "target latency must be > 0");
  MooProblem p;
  p.objectives.push_back({MetricRef{Metric::Accuracy, Statistic::scalar()},
                          ObjectiveMode::Maximize, 0.0, 1.0});
  p.constraints.push_back({MetricRef{Metric::Latency, stat.value_or(Statistic::pct(90))},
                           t_target_ms, ConstraintDirection::AtMost});
  return p;
}

MooProblem preset_max_acc_max_fps(double w_fps) {
  if (w_fps < 0.0)
    fail(ErrorCode::InvalidArgument, "w_fps must be >= 0");
  MooProblem p;
  p.objectives.push_back({MetricRef{Metric::Accuracy, Statistic::scalar()},
                          ObjectiveMode::Maximize, 0.0, 1.0});
  if (w_fps > 0.0)
    p.objectives.push_back({MetricRef{Metric::Fps, Statistic::avg()},
                            ObjectiveMode::Maximize, 0.0, w_fps});
  return p;
}

}  // namespace dployopt
