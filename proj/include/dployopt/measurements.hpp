#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dployopt/model.hpp"

namespace dployopt {

/// One timed execution of a design key on a device.
struct MeasurementRun {
  DesignKey key;
  int run_index = 0;
  double latency_ms = 0.0;
  double peak_mem_mib = 0.0;
  std::optional<double> fps;
};

struct LoadedMeasurements {
  std::vector<MeasurementRun> runs;  // file order, warm-up rows removed
  std::size_t warmup_dropped = 0;
  std::vector<DesignKey> fully_dropped;  // keys whose every run was a warm-up
};

/// Aggregated statistics for one design key.
struct StatSummary {
  double min_ms = 0.0;
  double max_ms = 0.0;
  double avg_ms = 0.0;
  double median_ms = 0.0;                // nearest-rank p50
  std::map<int, double> percentiles;     // n in [1,99] -> nearest-rank value
  double fps = 0.0;
  double peak_mem_mib = 0.0;
  std::size_t sample_count = 0;
};

/// Per-design statistics the optimizer searches. Immutable once built.
struct LookupTable {
  std::map<DesignKey, StatSummary> entries;
  std::string device_id;
  std::size_t warmup_dropped = 0;
  std::size_t sample_count = 0;  // total retained runs across keys

  /// Throws MissingEntry when the key is unknown.
  const StatSummary& at(const DesignKey& key) const;
  bool contains(const DesignKey& key) const { return entries.count(key) > 0; }

  /// Every key must resolve to a catalog variant and an admissible config.
  void validate_against(const std::vector<ModelVariant>& catalog,
                        const DeviceProfile& device) const;
};

/// Nearest-rank percentile of a sample vector: the ceil(n/100 * N)-th
/// smallest element, 1-based. `n` must be in [1,99].
double nearest_rank_percentile(std::vector<double> samples, int n);

/// Parse the measurement CSV (exact header
/// `model_id,transform,engine,n_threads,governor,run_index,latency_ms,peak_mem_mib,fps`)
/// and drop the first `warmup` runs of each key by run_index.
LoadedMeasurements load_measurements(std::istream& in, int warmup);
LoadedMeasurements load_measurements_file(const std::string& path, int warmup);

/// Aggregate runs into per-key summaries. fps falls back to 1000/median
/// latency when no run carries a measured value; peak memory is the max
/// across runs.
LookupTable build_lookup(const std::vector<MeasurementRun>& runs,
                         const std::vector<int>& requested_percentiles);

void write_measurements_csv(std::ostream& out,
                            const std::vector<MeasurementRun>& runs);

/// Synthetic measurement generation, for tests and bundled data.
struct GenKeySpec {
  DesignKey key;
  double base_latency_ms = 0.0;
  double jitter = 0.0;  // fraction: latency = base * (1 + U(-jitter, jitter))
  double peak_mem_mib = 0.0;
  std::optional<double> fps;
};

struct GenSpec {
  std::string device_id;
  std::vector<GenKeySpec> keys;
};

/// Deterministic for a given seed: same seed, same runs (and, through
/// write_measurements_csv, byte-identical files).
std::vector<MeasurementRun> gen_measurements(const GenSpec& spec,
                                             std::uint64_t seed, int runs);

}  // namespace dployopt
