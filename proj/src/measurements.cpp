#include "dployopt/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "dployopt/error.hpp"
#include "dployopt/rng.hpp"

namespace dployopt {

namespace {

constexpr const char* kCsvHeader =
    "model_id,transform,engine,n_threads,governor,run_index,latency_ms,"
    "peak_mem_mib,fps";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, int line_no, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::MalformedRow, "line " + std::to_string(line_no) +
                                      ": bad " + what + " \"" + s + "\"");
  }
}

int parse_int(const std::string& s, int line_no, const char* what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::MalformedRow, "line " + std::to_string(line_no) +
                                      ": bad " + what + " \"" + s + "\"");
  }
}

}  // namespace

const StatSummary& LookupTable::at(const DesignKey& key) const {
  auto it = entries.find(key);
  if (it == entries.end())
    fail(ErrorCode::MissingEntry, "no lookup entry for " + key.str());
  return it->second;
}

void LookupTable::validate_against(const std::vector<ModelVariant>& catalog,
                                   const DeviceProfile& device) const {
  for (const auto& [key, stats] : entries) {
    bool known = std::any_of(catalog.begin(), catalog.end(),
                             [&](const ModelVariant& v) {
                               return v.model_id == key.model_id &&
                                      v.transform == key.transform;
                             });
    if (!known)
      fail(ErrorCode::MissingEntry,
           "lookup key " + key.str() + " does not match any catalog variant");
    SystemConfig cfg{key.engine, key.n_threads, key.governor, 1.0};
    if (!config_valid_for(cfg, device))
      fail(ErrorCode::InvalidArgument,
           "lookup key " + key.str() + " is not admissible on device \"" +
               device.device_id + "\"");
    if (stats.sample_count < 1)
      fail(ErrorCode::InvalidArgument,
           "lookup entry " + key.str() + " has no samples");
  }
}

double nearest_rank_percentile(std::vector<double> samples, int n) {
  if (samples.empty())
    fail(ErrorCode::EmptyRuns, "percentile of empty sample set");
  if (n < 1 || n > 99)
    fail(ErrorCode::InvalidArgument,
         "percentile must be in [1,99], got " + std::to_string(n));
  std::sort(samples.begin(), samples.end());
  const std::size_t count = samples.size();
  std::size_t rank = (static_cast<std::size_t>(n) * count + 99) / 100;  // ceil
  if (rank < 1) rank = 1;
  return samples[rank - 1];
}

LoadedMeasurements load_measurements(std::istream& in, int warmup) {
  if (warmup < 0)
    fail(ErrorCode::InvalidArgument, "warmup must be >= 0");

  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::MalformedRow, "line 1: empty measurement file");
  {
    std::string header = line;
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != kCsvHeader)
      fail(ErrorCode::MalformedRow,
           "line 1: expected header \"" + std::string(kCsvHeader) + "\"");
  }

  std::vector<MeasurementRun> all;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != 9)
      fail(ErrorCode::MalformedRow,
           "line " + std::to_string(line_no) + ": expected 9 fields, got " +
               std::to_string(f.size()));
    MeasurementRun run;
    run.key.model_id = f[0];
    try {
      run.key.transform = transform_from_string(f[1]);
      run.key.engine = engine_from_string(f[2]);
    } catch (const Error& e) {
      fail(ErrorCode::MalformedRow,
           "line " + std::to_string(line_no) + ": " + e.what());
    }
    run.key.n_threads = parse_int(f[3], line_no, "n_threads");
    run.key.governor = f[4];
    run.run_index = parse_int(f[5], line_no, "run_index");
    run.latency_ms = parse_double(f[6], line_no, "latency_ms");
    run.peak_mem_mib = parse_double(f[7], line_no, "peak_mem_mib");
    if (!f[8].empty()) run.fps = parse_double(f[8], line_no, "fps");

    if (run.latency_ms <= 0.0)
      fail(ErrorCode::NegativeLatency,
           "line " + std::to_string(line_no) + ": latency_ms must be > 0");
    if (run.peak_mem_mib < 0.0)
      fail(ErrorCode::MalformedRow,
           "line " + std::to_string(line_no) + ": peak_mem_mib must be >= 0");
    if (run.fps && *run.fps <= 0.0)
      fail(ErrorCode::MalformedRow,
           "line " + std::to_string(line_no) + ": fps must be > 0 when present");
    if (run.key.n_threads < 1)
      fail(ErrorCode::MalformedRow,
           "line " + std::to_string(line_no) + ": n_threads must be >= 1");
    all.push_back(std::move(run));
  }

  // The warm-up rows of a key are the `warmup` smallest run_index values.
  std::map<DesignKey, std::vector<int>> indices;
  for (const auto& r : all) indices[r.key].push_back(r.run_index);
  std::map<DesignKey, int> cutoff;  // drop run_index <= cutoff (exclusive form below)
  for (auto& [key, idx] : indices) {
    std::sort(idx.begin(), idx.end());
    if (static_cast<int>(idx.size()) <= warmup)
      cutoff[key] = idx.empty() ? -1 : idx.back();  // drop everything
    else if (warmup == 0)
      cutoff[key] = std::numeric_limits<int>::min();
    else
      cutoff[key] = idx[warmup - 1];
  }

  LoadedMeasurements out;
  std::map<DesignKey, std::size_t> kept_per_key;
  for (auto& r : all) {
    if (warmup > 0 && r.run_index <= cutoff[r.key]) {
      ++out.warmup_dropped;
    } else {
      ++kept_per_key[r.key];
      out.runs.push_back(std::move(r));
    }
  }
  for (const auto& [key, idx] : indices)
    if (kept_per_key[key] == 0) out.fully_dropped.push_back(key);
  return out;
}

LoadedMeasurements load_measurements_file(const std::string& path, int warmup) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open \"" + path + "\"");
  return load_measurements(in, warmup);
}

LookupTable build_lookup(const std::vector<MeasurementRun>& runs,
                         const std::vector<int>& requested_percentiles) {
  if (runs.empty()) fail(ErrorCode::EmptyRuns, "no measurement runs");
  for (int n : requested_percentiles)
    if (n < 1 || n > 99)
      fail(ErrorCode::InvalidArgument,
           "requested percentile must be in [1,99], got " + std::to_string(n));

  std::map<DesignKey, std::vector<const MeasurementRun*>> groups;
  for (const auto& r : runs) groups[r.key].push_back(&r);

  LookupTable table;
  for (auto& [key, group] : groups) {
    std::vector<double> lat;
    std::vector<double> fps_values;
    double peak = 0.0;
    lat.reserve(group.size());
    for (const auto* r : group) {
      lat.push_back(r->latency_ms);
      peak = std::max(peak, r->peak_mem_mib);
      if (r->fps) fps_values.push_back(*r->fps);
    }
    StatSummary s;
    s.sample_count = lat.size();
    s.min_ms = *std::min_element(lat.begin(), lat.end());
    s.max_ms = *std::max_element(lat.begin(), lat.end());
    s.avg_ms = std::accumulate(lat.begin(), lat.end(), 0.0) / lat.size();
    s.median_ms = nearest_rank_percentile(lat, 50);
    for (int n : requested_percentiles)
      s.percentiles[n] = nearest_rank_percentile(lat, n);
    s.fps = fps_values.empty() ? 1000.0 / s.median_ms
                               : nearest_rank_percentile(fps_values, 50);
    s.peak_mem_mib = peak;
    table.entries.emplace(key, std::move(s));
    table.sample_count += group.size();
  }
  return table;
}

void write_measurements_csv(std::ostream& out,
                            const std::vector<MeasurementRun>& runs) {
  out << kCsvHeader << '\n';
  char buf[64];
  for (const auto& r : runs) {
    out << r.key.model_id << ',' << to_string(r.key.transform) << ','
        << to_string(r.key.engine) << ',' << r.key.n_threads << ','
        << r.key.governor << ',' << r.run_index << ',';
    std::snprintf(buf, sizeof buf, "%.6f", r.latency_ms);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.3f", r.peak_mem_mib);
    out << buf << ',';
    if (r.fps) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.fps);
      out << buf;
    }
    out << '\n';
  }
}

std::vector<MeasurementRun> gen_measurements(const GenSpec& spec,
                                             std::uint64_t seed, int runs) {
  if (runs < 1) fail(ErrorCode::InvalidArgument, "runs must be >= 1");
  for (const auto& k : spec.keys) {
    if (k.base_latency_ms <= 0.0)
      fail(ErrorCode::InvalidArgument,
           "generator key " + k.key.str() + ": base_latency_ms must be > 0");
    if (k.jitter < 0.0 || k.jitter >= 1.0)
      fail(ErrorCode::InvalidArgument,
           "generator key " + k.key.str() + ": jitter must be in [0,1)");
    if (k.peak_mem_mib < 0.0)
      fail(ErrorCode::InvalidArgument,
           "generator key " + k.key.str() + ": peak_mem_mib must be >= 0");
  }

  Rng rng(seed);
  std::vector<MeasurementRun> out;
  out.reserve(spec.keys.size() * static_cast<std::size_t>(runs));
  for (const auto& k : spec.keys) {
    for (int i = 0; i < runs; ++i) {
      MeasurementRun r;
      r.key = k.key;
      r.run_index = i;
      double noise = k.jitter > 0.0 ? rng.uniform(-k.jitter, k.jitter) : 0.0;
      r.latency_ms = k.base_latency_ms * (1.0 + noise);
      r.peak_mem_mib = k.peak_mem_mib;
      r.fps = k.fps;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace dployopt
