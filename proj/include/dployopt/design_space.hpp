#pragma once

#include <vector>

#include "dployopt/model.hpp"

namespace dployopt {

/// Enumerate every admissible design for the given variants on the given
/// device: variant x governor x r, with the CPU engine expanded over
/// 1..n_cores threads and GPU/NNAPI appearing once each (when available).
/// Output is sorted ascending by (model_id, transform, engine, threads,
/// governor, r) and contains no duplicates.
///
/// Throws EmptySpace for an empty variant list and InvalidArgument for a bad
/// r_grid (empty, or values outside (0,1]).
std::vector<Design> enumerate_designs(const std::vector<ModelVariant>& variants,
                                      const DeviceProfile& device,
                                      const std::vector<double>& r_grid);

/// Closed-form size of the space enumerate_designs produces.
std::size_t design_space_size(const std::vector<ModelVariant>& variants,
                              const DeviceProfile& device,
                              const std::vector<double>& r_grid);

/// Static memory plan for holding a variant: input frames are kept at 4
/// bytes/element (decoded full precision), the model buffer is
/// param_count x bytes(precision), and intermediates are sized as a fraction
/// of the model buffer. All figures in MiB.
BufferBudget estimate_buffers(const ModelVariant& m,
                              double intermediate_factor = 0.25);

}  // namespace dployopt
