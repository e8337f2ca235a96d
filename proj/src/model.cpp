#include "dployopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dployopt/error.hpp"

namespace dployopt {

const char* to_string(Engine e) {
  switch (e) {
    case Engine::CPU: return "CPU";
    case Engine::GPU: return "GPU";
    case Engine::NNAPI: return "NNAPI";
  }
  return "?";
}

const char* to_string(Transform t) {
  switch (t) {
    case Transform::Identity: return "identity";
    case Transform::Fp16: return "fp16";
    case Transform::Int8: return "int8";
  }
  return "?";
}

const char* to_string(Precision p) {
  switch (p) {
    case Precision::Fp32: return "fp32";
    case Precision::Fp16: return "fp16";
    case Precision::Int8: return "int8";
  }
  return "?";
}

Engine engine_from_string(const std::string& s) {
  if (s == "CPU") return Engine::CPU;
  if (s == "GPU") return Engine::GPU;
  if (s == "NNAPI") return Engine::NNAPI;
  fail(ErrorCode::UnknownEngine, "unknown engine \"" + s + "\"");
}

Transform transform_from_string(const std::string& s) {
  if (s == "identity" || s == "fp32") return Transform::Identity;
  if (s == "fp16") return Transform::Fp16;
  if (s == "int8") return Transform::Int8;
  fail(ErrorCode::InvalidArgument, "unknown transform \"" + s + "\"");
}

Precision precision_from_string(const std::string& s) {
  if (s == "fp32" || s == "FP32") return Precision::Fp32;
  if (s == "fp16" || s == "FP16") return Precision::Fp16;
  if (s == "int8" || s == "INT8") return Precision::Int8;
  fail(ErrorCode::InvalidArgument, "unknown precision \"" + s + "\"");
}

int bytes_per_param(Precision p) {
  switch (p) {
    case Precision::Fp32: return 4;
    case Precision::Fp16: return 2;
    case Precision::Int8: return 1;
  }
  return 4;
}

std::string DesignKey::str() const {
  std::ostringstream os;
  os << model_id << '@' << to_string(transform) << '/' << to_string(engine)
     << "/t" << n_threads << '/' << governor;
  return os.str();
}

DesignKey key_of(const Design& d) {
  return DesignKey{d.model.model_id, d.model.transform, d.config.engine,
                   d.config.n_threads, d.config.governor};
}

std::string design_str(const Design& d) {
  std::ostringstream os;
  os << key_of(d).str() << "/r" << d.config.recognition_rate;
  return os.str();
}

std::strong_ordering design_order(const Design& a, const Design& b) {
  if (auto c = key_of(a) <=> key_of(b); c != 0) return c;
  double ra = a.config.recognition_rate;
  double rb = b.config.recognition_rate;
  if (ra < rb) return std::strong_ordering::less;
  if (ra > rb) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

void validate_variant(const ModelVariant& v,
                      const std::vector<ModelVariant>* catalog) {
  const std::string who = "variant \"" + v.model_id + "\"";
  if (v.model_id.empty())
    fail(ErrorCode::InvalidArgument, "variant with empty model_id");
  if (v.accuracy < 0.0 || v.accuracy > 1.0)
    fail(ErrorCode::InvalidArgument, who + ": accuracy must be in [0,1]");
  if (v.workload_flops == 0)
    fail(ErrorCode::InvalidArgument, who + ": workload_flops must be > 0");
  if (v.param_count == 0)
    fail(ErrorCode::InvalidArgument, who + ": param_count must be > 0");
  if (v.model_size_mib <= 0.0)
    fail(ErrorCode::InvalidArgument, who + ": model_size_mib must be > 0");
  if (v.input_resolution.height <= 0 || v.input_resolution.width <= 0 ||
      v.input_resolution.channels <= 0)
    fail(ErrorCode::InvalidArgument, who + ": input_resolution must be positive");
  if (v.transform != Transform::Identity && !v.parent_id)
    fail(ErrorCode::InvalidArgument,
         who + ": transformed variant must reference a parent_id");
  if (catalog && v.parent_id) {
    bool found = std::any_of(catalog->begin(), catalog->end(),
                             [&](const ModelVariant& o) {
                               return o.model_id == *v.parent_id;
                             });
    if (!found)
      fail(ErrorCode::InvalidArgument,
           who + ": parent_id \"" + *v.parent_id + "\" not in catalog");
  }
}

void validate_catalog(const std::vector<ModelVariant>& catalog) {
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    validate_variant(catalog[i], &catalog);
    for (std::size_t j = i + 1; j < catalog.size(); ++j) {
      if (catalog[i].model_id == catalog[j].model_id &&
          catalog[i].transform == catalog[j].transform)
        fail(ErrorCode::InvalidArgument,
             "duplicate variant (" + catalog[i].model_id + ", " +
                 to_string(catalog[i].transform) + ") in catalog");
    }
  }
}

void validate_device(const DeviceProfile& d) {
  if (d.engines.empty())
    fail(ErrorCode::InvalidArgument,
         "device \"" + d.device_id + "\": engines must be non-empty");
  if (!d.engines.count(Engine::CPU))
    fail(ErrorCode::InvalidArgument,
         "device \"" + d.device_id + "\": engines must include CPU");
  if (d.n_cores < 1)
    fail(ErrorCode::NonPositiveCores,
         "device \"" + d.device_id + "\": n_cores must be >= 1");
  if (d.memory_capacity_mib <= 0)
    fail(ErrorCode::InvalidArgument,
         "device \"" + d.device_id + "\": memory_capacity_mib must be > 0");
  if (d.governors.empty())
    fail(ErrorCode::InvalidArgument,
         "device \"" + d.device_id + "\": governors must be non-empty");
}

bool config_valid_for(const SystemConfig& c, const DeviceProfile& d) {
  if (!d.engines.count(c.engine)) return false;
  if (c.n_threads < 1 || c.n_threads > d.n_cores) return false;
  if (c.engine != Engine::CPU && c.n_threads != 1) return false;
  if (!d.governors.count(c.governor)) return false;
  if (!(c.recognition_rate > 0.0 && c.recognition_rate <= 1.0)) return false;
  return true;
}

}  // namespace dployopt
