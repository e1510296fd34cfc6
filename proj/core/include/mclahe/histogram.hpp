#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mclahe/nd_image.hpp"

namespace mclahe {

/// Histogram range policy: one range shared by all kernels (the min/max of
/// the whole dataset) or each kernel's own min/max.
enum class RangeMode { Global, Adaptive };

/// Parameters of the enhancement itself. clip_limit is a fraction of the
/// kernel pixel count in (0, 1]; 1 disables clipping.
struct EnhanceParams {
  double clip_limit = 1.0;
  std::size_t n_bins = 256;
  RangeMode range_mode = RangeMode::Global;
};

struct IntensityRange {
  double lo = 0.0;
  double hi = 1.0;

  bool degenerate() const noexcept { return !(lo < hi); }
};

/// Per-kernel intensity transform: the normalized CDF of the clipped
/// histogram over `range`. A degenerate mapping (collapsed range, or all
/// mass in bin zero with no redistribution) maps every value to 0.5.
struct KernelMapping {
  IntensityRange range;
  std::vector<double> values;
  bool degenerate = false;
};

/// Kernel mappings in row-major grid order.
struct MappingGrid {
  Shape grid_shape;
  std::size_t n_bins = 0;
  std::vector<KernelMapping> mappings;

  const KernelMapping& at(std::size_t flat) const noexcept { return mappings[flat]; }
};

/// Uniform binning over [lo, hi]: floor((v - lo) / (hi - lo) * n_bins),
/// clamped into [0, n_bins - 1]. Out-of-range values take the end bins.
/// The range must not be degenerate.
std::size_t bin_index(double value, const IntensityRange& range, std::size_t n_bins);

/// Bin counts (as reals) of a non-empty block; the counts sum to the block
/// pixel count.
std::vector<double> compute_histogram(std::span<const double> block,
                                      const IntensityRange& range, std::size_t n_bins);

/// Caps every bin at T = clip_limit * sum(counts) and spreads the removed
/// excess uniformly over all bins in a single pass. Total mass is preserved.
std::vector<double> clip_histogram(std::span<const double> counts, double clip_limit);

struct NormalizedCdf {
  std::vector<double> values;
  bool degenerate = false;
};

/// Prefix-sums the counts and rescales so the first entry maps to 0 and the
/// last to 1. When the whole mass sits in bin zero the rescale denominator
/// vanishes and the constant 0.5 mapping is returned instead.
NormalizedCdf normalized_cdf(std::span<const double> clipped_counts);

/// Builds one KernelMapping per kernel block. Global mode bins every kernel
/// over `global_range`; Adaptive mode bins each kernel over its own min/max.
/// Kernels with a collapsed range get the degenerate mapping.
MappingGrid build_mappings(const KernelGrid& grid, const EnhanceParams& params,
                           const IntensityRange& global_range, unsigned threads = 1);

/// Nearest-bin lookup of the mapping's normalized CDF; values outside the
/// mapping range clamp to the end bins. Degenerate mappings return 0.5.
double apply_mapping(double value, const KernelMapping& mapping);

}  // namespace mclahe
