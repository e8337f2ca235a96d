#include "dployopt/design_space.hpp"

#include <algorithm>

#include "dployopt/error.hpp"

namespace dployopt {

namespace {

void check_r_grid(const std::vector<double>& r_grid) {
  if (r_grid.empty())
    fail(ErrorCode::InvalidArgument, "r_grid must be non-empty");
  for (double r : r_grid)
    if (!(r > 0.0 && r <= 1.0))
      fail(ErrorCode::InvalidArgument,
           "r_grid values must lie in (0,1], got " + std::to_string(r));
}

}  // namespace

std::vector<Design> enumerate_designs(const std::vector<ModelVariant>& variants,
                                      const DeviceProfile& device,
                                      const std::vector<double>& r_grid) {
  if (variants.empty())
    fail(ErrorCode::EmptySpace, "no model variants to enumerate");
  check_r_grid(r_grid);
  validate_device(device);

  std::vector<double> rs = r_grid;
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());

  std::vector<const ModelVariant*> vs;
  vs.reserve(variants.size());
  for (const auto& v : variants) vs.push_back(&v);
  std::sort(vs.begin(), vs.end(), [](const ModelVariant* a, const ModelVariant* b) {
    return std::tie(a->model_id, a->transform) < std::tie(b->model_id, b->transform);
  });

  std::vector<Design> out;
  for (const ModelVariant* v : vs) {
    for (Engine e : {Engine::CPU, Engine::GPU, Engine::NNAPI}) {
      if (!device.engines.count(e)) continue;
      const int max_threads = e == Engine::CPU ? device.n_cores : 1;
      for (int t = 1; t <= max_threads; ++t) {
        for (const auto& g : device.governors) {  // std::set: ascending
          for (double r : rs) {
            out.push_back(Design{*v, SystemConfig{e, t, g, r}});
          }
        }
      }
    }
  }
  return out;
}

std::size_t design_space_size(const std::vector<ModelVariant>& variants,
                              const DeviceProfile& device,
                              const std::vector<double>& r_grid) {
  std::size_t per_variant = 0;
  if (device.engines.count(Engine::CPU)) per_variant += device.n_cores;
  if (device.engines.count(Engine::GPU)) per_variant += 1;
  if (device.engines.count(Engine::NNAPI)) per_variant += 1;
  std::vector<double> rs = r_grid;
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  return variants.size() * device.governors.size() * rs.size() * per_variant;
}

BufferBudget estimate_buffers(const ModelVariant& m, double intermediate_factor) {
  if (intermediate_factor < 0.0)
    fail(ErrorCode::InvalidArgument, "intermediate_factor must be >= 0");
  constexpr double kMib = 1024.0 * 1024.0;
  const auto& res = m.input_resolution;
  BufferBudget b;
  b.input_buffer_mib =
      static_cast<double>(res.height) * res.width * res.channels * 4.0 / kMib;
  b.model_buffer_mib =
      static_cast<double>(m.param_count) * bytes_per_param(m.precision) / kMib;
  b.intermediate_buffer_mib = intermediate_factor * b.model_buffer_mib;
  b.total_mib = b.input_buffer_mib + b.model_buffer_mib + b.intermediate_buffer_mib;
  return b;
}

}  // namespace dployopt
