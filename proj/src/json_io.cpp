#include "dployopt/json_io.hpp"

#include <fstream>
#include <istream>

#include "dployopt/error.hpp"

namespace dployopt {

namespace {

const json& require(const json& j, const char* field, const char* context) {
  auto it = j.find(field);
  if (it == j.end())
    fail(ErrorCode::MissingField,
         std::string(context) + ": missing field \"" + field + "\"");
  return *it;
}

Task task_from_string(const std::string& s, std::string& detail) {
  if (s == "classification") return Task::Classification;
  if (s == "segmentation") return Task::Segmentation;
  detail = s;
  return Task::Other;
}

std::string task_to_string(const ModelVariant& v) {
  switch (v.task) {
    case Task::Classification: return "classification";
    case Task::Segmentation: return "segmentation";
    case Task::Other: return v.task_detail;
  }
  return "classification";
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::MalformedRow, path + ": " + e.what());
  }
}

DeviceProfile device_from_json(const json& j) {
  const char* ctx = "device profile";
  DeviceProfile d;
  d.device_id = require(j, "device_id", ctx).get<std::string>();
  for (const auto& e : require(j, "engines", ctx))
    d.engines.insert(engine_from_string(e.get<std::string>()));
  d.n_cores = require(j, "n_cores", ctx).get<int>();
  d.memory_capacity_mib = require(j, "memory_capacity_mib", ctx).get<std::int64_t>();
  for (const auto& g : require(j, "governors", ctx))
    d.governors.insert(g.get<std::string>());
  d.battery_mah = require(j, "battery_mah", ctx).get<int>();
  d.os_version = require(j, "os_version", ctx).get<std::string>();
  if (j.contains("camera"))
    for (const auto& [k, v] : j.at("camera").items())
      d.camera[k] = v.get<std::string>();
  validate_device(d);
  return d;
}

DeviceProfile load_device_profile(std::istream& in) {
  try {
    return device_from_json(json::parse(in));
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedRow, std::string("device profile: ") + e.what());
  }
}

DeviceProfile load_device_profile_file(const std::string& path) {
  return device_from_json(load_json_file(path));
}

std::vector<ModelVariant> catalog_from_json(const json& j) {
  if (!j.is_array())
    fail(ErrorCode::InvalidArgument, "variant catalog must be a JSON array");
  std::vector<ModelVariant> out;
  for (const auto& item : j) {
    const char* ctx = "model variant";
    ModelVariant v;
    v.model_id = require(item, "model_id", ctx).get<std::string>();
    v.task = task_from_string(require(item, "task", ctx).get<std::string>(),
                              v.task_detail);
    v.workload_flops = require(item, "workload_flops", ctx).get<std::uint64_t>();
    v.param_count = require(item, "param_count", ctx).get<std::uint64_t>();
    v.model_size_mib = require(item, "model_size_mib", ctx).get<double>();
    const auto& res = require(item, "input_resolution", ctx);
    if (!res.is_array() || res.size() != 3)
      fail(ErrorCode::InvalidArgument,
           "variant \"" + v.model_id + "\": input_resolution must be [h,w,c]");
    v.input_resolution = {res[0].get<int>(), res[1].get<int>(), res[2].get<int>()};
    v.accuracy = require(item, "accuracy", ctx).get<double>();
    v.precision =
        precision_from_string(require(item, "precision", ctx).get<std::string>());
    if (item.contains("parent_id") && !item.at("parent_id").is_null())
      v.parent_id = item.at("parent_id").get<std::string>();
    v.transform =
        transform_from_string(require(item, "transform", ctx).get<std::string>());
    if (item.contains("accuracy_estimated"))
      v.accuracy_estimated = item.at("accuracy_estimated").get<bool>();
    out.push_back(std::move(v));
  }
  validate_catalog(out);
  return out;
}

std::vector<ModelVariant> load_catalog(std::istream& in) {
  try {
    return catalog_from_json(json::parse(in));
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedRow, std::string("variant catalog: ") + e.what());
  }
}

std::vector<ModelVariant> load_catalog_file(const std::string& path) {
  return catalog_from_json(load_json_file(path));
}

json catalog_to_json(const std::vector<ModelVariant>& catalog) {
  json arr = json::array();
  for (const auto& v : catalog) {
    json item;
    item["model_id"] = v.model_id;
    item["task"] = task_to_string(v);
    item["workload_flops"] = v.workload_flops;
    item["param_count"] = v.param_count;
    item["model_size_mib"] = v.model_size_mib;
    item["input_resolution"] = {v.input_resolution.height,
                                v.input_resolution.width,
                                v.input_resolution.channels};
    item["accuracy"] = v.accuracy;
    item["precision"] = to_string(v.precision);
    if (v.parent_id) item["parent_id"] = *v.parent_id;
    item["transform"] = to_string(v.transform);
    if (v.accuracy_estimated) item["accuracy_estimated"] = true;
    arr.push_back(std::move(item));
  }
  return arr;
}

namespace {

MetricRef metric_ref_from_json(const json& j, const char* ctx) {
  MetricRef ref;
  ref.metric = metric_from_string(require(j, "metric", ctx).get<std::string>());
  if (j.contains("statistic"))
    ref.statistic = statistic_from_string(j.at("statistic").get<std::string>());
  else
    ref.statistic = ref.metric == Metric::Latency ? Statistic::avg()
                                                  : Statistic::scalar();
  return ref;
}

json metric_ref_to_json(const MetricRef& ref) {
  return json{{"metric", to_string(ref.metric)},
              {"statistic", ref.statistic.str()}};
}

}  // namespace

MooProblem problem_from_json(const json& j) {
  MooProblem p;
  const char* ctx = "problem";
  for (const auto& o : require(j, "objectives", ctx)) {
    ObjectiveSpec spec;
    spec.ref = metric_ref_from_json(o, "objective");
    const std::string mode = require(o, "mode", "objective").get<std::string>();
    if (mode == "maximize") {
      spec.mode = ObjectiveMode::Maximize;
    } else if (mode == "minimize") {
      spec.mode = ObjectiveMode::Minimize;
    } else if (mode == "target") {
      spec.mode = ObjectiveMode::Target;
      spec.target = require(o, "target", "objective").get<double>();
    } else {
      fail(ErrorCode::InvalidArgument, "unknown objective mode \"" + mode + "\"");
    }
    if (o.contains("weight")) spec.weight = o.at("weight").get<double>();
    p.objectives.push_back(spec);
  }
  if (j.contains("constraints")) {
    for (const auto& c : j.at("constraints")) {
      ConstraintSpec spec;
      spec.ref = metric_ref_from_json(c, "constraint");
      spec.bound = require(c, "bound", "constraint").get<double>();
      const std::string dir = require(c, "direction", "constraint").get<std::string>();
      if (dir == "at_most") {
        spec.direction = ConstraintDirection::AtMost;
      } else if (dir == "at_least") {
        spec.direction = ConstraintDirection::AtLeast;
      } else if (dir == "at_least_drop" || dir == "at_most_drop") {
        // Both spellings circulate; the semantics are value >= reference - bound.
        spec.direction = ConstraintDirection::AtLeastDrop;
      } else {
        fail(ErrorCode::InvalidArgument,
             "unknown constraint direction \"" + dir + "\"");
      }
      p.constraints.push_back(spec);
    }
  }
  if (j.contains("reference_accuracy") && !j.at("reference_accuracy").is_null())
    p.reference_accuracy = j.at("reference_accuracy").get<double>();
  if (j.contains("normalizers"))
    for (const auto& [k, v] : j.at("normalizers").items())
      p.normalizers[metric_from_string(k)] = v.get<double>();
  if (j.contains("normalize_full_space"))
    p.normalize_full_space = j.at("normalize_full_space").get<bool>();
  validate_problem(p);
  return p;
}

MooProblem load_problem_file(const std::string& path) {
  return problem_from_json(load_json_file(path));
}

json problem_to_json(const MooProblem& p) {
  json j;
  j["objectives"] = json::array();
  for (const auto& o : p.objectives) {
    json obj = metric_ref_to_json(o.ref);
    switch (o.mode) {
      case ObjectiveMode::Maximize: obj["mode"] = "maximize"; break;
      case ObjectiveMode::Minimize: obj["mode"] = "minimize"; break;
      case ObjectiveMode::Target:
        obj["mode"] = "target";
        obj["target"] = o.target;
        break;
    }
    obj["weight"] = o.weight;
    j["objectives"].push_back(std::move(obj));
  }
  j["constraints"] = json::array();
  for (const auto& c : p.constraints) {
    json con = metric_ref_to_json(c.ref);
    con["bound"] = c.bound;
    switch (c.direction) {
      case ConstraintDirection::AtMost: con["direction"] = "at_most"; break;
      case ConstraintDirection::AtLeast: con["direction"] = "at_least"; break;
      case ConstraintDirection::AtLeastDrop:
        con["direction"] = "at_least_drop";
        break;
    }
    j["constraints"].push_back(std::move(con));
  }
  if (p.reference_accuracy) j["reference_accuracy"] = *p.reference_accuracy;
  if (!p.normalizers.empty()) {
    json n;
    for (const auto& [metric, value] : p.normalizers) n[to_string(metric)] = value;
    j["normalizers"] = std::move(n);
  }
  if (p.normalize_full_space) j["normalize_full_space"] = true;
  return j;
}

Scenario scenario_from_json(const json& j) {
  const char* ctx = "scenario";
  Scenario s;
  s.seed = require(j, "seed", ctx).get<std::uint64_t>();
  s.steps = require(j, "steps", ctx).get<int>();
  if (j.contains("jitter")) s.jitter = j.at("jitter").get<double>();
  if (j.contains("switch_penalty"))
    s.switch_penalty = j.at("switch_penalty").get<double>();
  if (j.contains("load_trace")) {
    for (const auto& p : j.at("load_trace")) {
      LoadPoint lp;
      lp.start_step = require(p, "start_step", "load_trace").get<int>();
      lp.engine = engine_from_string(require(p, "engine", "load_trace").get<std::string>());
      lp.factor = require(p, "factor", "load_trace").get<double>();
      s.load_trace.push_back(lp);
    }
  }
  if (j.contains("thermal")) {
    for (const auto& [name, t] : j.at("thermal").items()) {
      ThermalParams tp;
      tp.heat_per_inference = require(t, "heat_per_inference", "thermal").get<double>();
      tp.cooling_per_step = require(t, "cooling_per_step", "thermal").get<double>();
      tp.throttle_threshold = require(t, "throttle_threshold", "thermal").get<double>();
      tp.release_threshold = require(t, "release_threshold", "thermal").get<double>();
      tp.throttle_factor = require(t, "throttle_factor", "thermal").get<double>();
      s.thermal[engine_from_string(name)] = tp;
    }
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  return scenario_from_json(load_json_file(path));
}

GenSpec genspec_from_json(const json& j) {
  const char* ctx = "generator spec";
  GenSpec spec;
  spec.device_id = require(j, "device_id", ctx).get<std::string>();
  for (const auto& k : require(j, "keys", ctx)) {
    GenKeySpec g;
    g.key.model_id = require(k, "model_id", ctx).get<std::string>();
    g.key.transform =
        transform_from_string(require(k, "transform", ctx).get<std::string>());
    g.key.engine = engine_from_string(require(k, "engine", ctx).get<std::string>());
    g.key.n_threads = require(k, "n_threads", ctx).get<int>();
    g.key.governor = require(k, "governor", ctx).get<std::string>();
    g.base_latency_ms = require(k, "base_latency_ms", ctx).get<double>();
    if (k.contains("jitter")) g.jitter = k.at("jitter").get<double>();
    if (k.contains("peak_mem_mib")) g.peak_mem_mib = k.at("peak_mem_mib").get<double>();
    if (k.contains("fps") && !k.at("fps").is_null())
      g.fps = k.at("fps").get<double>();
    spec.keys.push_back(std::move(g));
  }
  return spec;
}

GenSpec load_genspec_file(const std::string& path) {
  return genspec_from_json(load_json_file(path));
}

namespace {

json ranked_row_to_json(const RankedDesign& rd, bool feasible) {
  const Design& d = rd.design;
  json row;
  row["model_id"] = d.model.model_id;
  row["transform"] = to_string(d.model.transform);
  row["engine"] = to_string(d.config.engine);
  row["n_threads"] = d.config.n_threads;
  row["governor"] = d.config.governor;
  row["r"] = d.config.recognition_rate;
  row["score"] = rd.score;
  row["feasible"] = feasible;
  return row;
}

}  // namespace

json result_to_json(const OptimizationResult& result, const LookupTable& table) {
  json j;
  j["evaluated_count"] = result.evaluated_count;
  j["feasible_count"] = result.feasible_count;
  j["skipped_count"] = result.skipped_count;
  j["ranked"] = json::array();
  for (const auto& rd : result.ranked)
    j["ranked"].push_back(ranked_row_to_json(rd, true));
  if (result.best) {
    j["best"] = ranked_row_to_json({*result.best, result.best_score}, true);
  } else {
    j["best"] = nullptr;
    j["constraint_violations"] = result.constraint_violations;
  }
  json norm;
  for (const auto& [metric, value] : result.normalizers_used)
    norm[to_string(metric)] = value;
  j["normalizers"] = std::move(norm);
  j["provenance"] = {{"device_id", table.device_id},
                     {"warmup_dropped", table.warmup_dropped},
                     {"sample_count", table.sample_count}};
  return j;
}

json report_to_json(const ExplainReport& report) {
  json j;
  j["evaluated_count"] = report.evaluated_count;
  j["feasible_count"] = report.feasible_count;
  j["rows"] = json::array();
  for (const auto& row : report.rows) {
    json r = ranked_row_to_json({row.design, row.score}, row.feasible);
    json metrics;
    for (const auto& [name, value] : row.metrics) metrics[name] = value;
    r["metrics"] = std::move(metrics);
    j["rows"].push_back(std::move(r));
  }
  j["violations"] = json::array();
  for (const auto& [constraint, count] : report.violations)
    j["violations"].push_back({{"constraint", constraint}, {"count", count}});
  return j;
}

ExplainReport report_from_json(const json& j) {
  ExplainReport report;
  report.evaluated_count = j.at("evaluated_count").get<std::size_t>();
  report.feasible_count = j.at("feasible_count").get<std::size_t>();
  for (const auto& r : j.at("rows")) {
    ExplainRow row;
    row.design.model.model_id = r.at("model_id").get<std::string>();
    row.design.model.transform =
        transform_from_string(r.at("transform").get<std::string>());
    row.design.config.engine = engine_from_string(r.at("engine").get<std::string>());
    row.design.config.n_threads = r.at("n_threads").get<int>();
    row.design.config.governor = r.at("governor").get<std::string>();
    row.design.config.recognition_rate = r.at("r").get<double>();
    row.score = r.at("score").get<double>();
    row.feasible = r.at("feasible").get<bool>();
    for (const auto& [name, value] : r.at("metrics").items())
      row.metrics.emplace_back(name, value.get<double>());
    report.rows.push_back(std::move(row));
  }
  for (const auto& v : j.at("violations"))
    report.violations.emplace_back(v.at("constraint").get<std::string>(),
                                   v.at("count").get<std::size_t>());
  return report;
}

}  // namespace dployopt
