#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dployopt {

enum class Engine { CPU, GPU, NNAPI };
enum class Transform { Identity, Fp16, Int8 };
enum class Precision { Fp32, Fp16, Int8 };
enum class Task { Classification, Segmentation, Other };

const char* to_string(Engine e);
const char* to_string(Transform t);
const char* to_string(Precision p);
Engine engine_from_string(const std::string& s);
Transform transform_from_string(const std::string& s);
Precision precision_from_string(const std::string& s);

/// Bytes used to store one trained parameter at the given precision.
int bytes_per_param(Precision p);

struct InputResolution {
  int height = 0;
  int width = 0;
  int channels = 0;

  auto operator<=>(const InputResolution&) const = default;
};

/// Scalar descriptor of one deployable model variant. A variant is identified
/// by (model_id, transform); variants derived by a non-identity transform
/// carry the id of the model they were derived from in `parent_id`.
struct ModelVariant {
  std::string model_id;
  Task task = Task::Classification;
  std::string task_detail;  // original label when task == Task::Other
  std::uint64_t workload_flops = 0;
  std::uint64_t param_count = 0;
  double model_size_mib = 0.0;
  InputResolution input_resolution;
  double accuracy = 0.0;  // fraction in [0,1]: top-1 or mIoU
  Precision precision = Precision::Fp32;
  std::optional<std::string> parent_id;
  Transform transform = Transform::Identity;
  bool accuracy_estimated = false;
};

/// Resources of the target device, as far as deployment selection cares.
struct DeviceProfile {
  std::string device_id;
  std::set<Engine> engines;
  int n_cores = 0;
  std::int64_t memory_capacity_mib = 0;
  std::set<std::string> governors;
  int battery_mah = 0;  // stored, not optimised
  std::string os_version;
  std::map<std::string, std::string> camera;  // opaque metadata
};

/// The tunable system-level knobs of a deployment.
struct SystemConfig {
  Engine engine = Engine::CPU;
  int n_threads = 1;  // > 1 only meaningful on CPU
  std::string governor;
  double recognition_rate = 1.0;  // fraction of frames inferred on, in (0,1]
};

struct Design {
  ModelVariant model;
  SystemConfig config;
};

/// Key under which measurements are aggregated. Excludes the recognition
/// rate: r is an invocation-frequency knob applied analytically, not a
/// property of an execution.
struct DesignKey {
  std::string model_id;
  Transform transform = Transform::Identity;
  Engine engine = Engine::CPU;
  int n_threads = 1;
  std::string governor;

  auto operator<=>(const DesignKey&) const = default;
  std::string str() const;
};

DesignKey key_of(const Design& d);
std::string design_str(const Design& d);

/// Total order over full designs (key plus recognition rate), used for
/// deterministic enumeration order and as the last tie-break in ranking.
std::strong_ordering design_order(const Design& a, const Design& b);

struct BufferBudget {
  double input_buffer_mib = 0.0;
  double model_buffer_mib = 0.0;
  double intermediate_buffer_mib = 0.0;
  double total_mib = 0.0;
};

/// Validate a variant's own invariants (and parent resolution when a catalog
/// is given). Throws Error on violation.
void validate_variant(const ModelVariant& v,
                      const std::vector<ModelVariant>* catalog = nullptr);
void validate_catalog(const std::vector<ModelVariant>& catalog);
void validate_device(const DeviceProfile& d);

/// True when the config is admissible on the device (engine available,
/// threads within cores and 1 off-CPU, governor known, r in (0,1]).
bool config_valid_for(const SystemConfig& c, const DeviceProfile& d);

}  // namespace dployopt
