#include "mclahe/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "mclahe/parallel.hpp"

namespace mclahe {

namespace {

void validate_params(const EnhanceParams& params) {
  if (!(params.clip_limit > 0.0) || !(params.clip_limit <= 1.0))
    throw ValidationError("clip_limit must be in (0, 1]");
  if (params.n_bins < 2) throw ValidationError("n_bins must be at least 2");
}

KernelMapping degenerate_mapping(const IntensityRange& range, std::size_t n_bins) {
  return KernelMapping{range, std::vector<double>(n_bins, 0.5), true};
}

}  // namespace

std::size_t bin_index(double value, const IntensityRange& range, std::size_t n_bins) {
  if (range.degenerate())
    throw ValidationError("bin_index requires a non-degenerate range");
  const double scaled =
      std::floor((value - range.lo) / (range.hi - range.lo) * static_cast<double>(n_bins));
  if (!(scaled > 0.0)) return 0;
  if (scaled >= static_cast<double>(n_bins)) return n_bins - 1;
  return static_cast<std::size_t>(scaled);
}

std::vector<double> compute_histogram(std::span<const double> block,
                                      const IntensityRange& range, std::size_t n_bins) {
  if (block.empty()) throw ValidationError("histogram of an empty block");
  std::vector<double> counts(n_bins, 0.0);
  for (double v : block) counts[bin_index(v, range, n_bins)] += 1.0;
  return counts;
}

std::vector<double> clip_histogram(std::span<const double> counts, double clip_limit) {
  double total = 0.0;
  for (double c : counts) total += c;

  const double threshold = clip_limit * total;
  double excess = 0.0;
  for (double c : counts) excess += std::max(c - threshold, 0.0);

  const double share = excess / static_cast<double>(counts.size());
  std::vector<double> clipped(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b)
    clipped[b] = std::min(counts[b], threshold) + share;
  return clipped;
}

NormalizedCdf normalized_cdf(std::span<const double> clipped_counts) {
  std::vector<double> values(clipped_counts.size());
  double running = 0.0;
  for (std::size_t b = 0; b < clipped_counts.size(); ++b) {
    running += clipped_counts[b];
    values[b] = running;
  }
  const double lo = values.front();
  const double span = values.back() - lo;
  if (!(span > 0.0))
    return {std::vector<double>(clipped_counts.size(), 0.5), true};
  for (double& v : values) v = (v - lo) / span;
  return {std::move(values), false};
}

MappingGrid build_mappings(const KernelGrid& grid, const EnhanceParams& params,
                           const IntensityRange& global_range, unsigned threads) {
  validate_params(params);
  if (params.range_mode == RangeMode::Global && global_range.hi < global_range.lo)
    throw ValidationError("global range must satisfy lo <= hi");

  MappingGrid out;
  out.grid_shape = grid.grid_shape;
  out.n_bins = params.n_bins;
  out.mappings.resize(grid.block_count());

  parallel_for(grid.block_count(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const std::span<const double> block = grid.block(k);
      IntensityRange range = global_range;
      if (params.range_mode == RangeMode::Adaptive) {
        double lo = block.front(), hi = block.front();
        for (double v : block) {
          if (v < lo) lo = v;
          if (v > hi) hi = v;
        }
        range = {lo, hi};
      }
      if (range.degenerate()) {
        out.mappings[k] = degenerate_mapping(range, params.n_bins);
        continue;
      }
      const std::vector<double> counts = compute_histogram(block, range, params.n_bins);
      const std::vector<double> clipped = clip_histogram(counts, params.clip_limit);
      NormalizedCdf cdf = normalized_cdf(clipped);
      out.mappings[k] = KernelMapping{range, std::move(cdf.values), cdf.degenerate};
    }
  });
  return out;
}

double apply_mapping(double value, const KernelMapping& mapping) {
  if (mapping.degenerate) return 0.5;
  return mapping.values[bin_index(value, mapping.range, mapping.values.size())];
}

}  // namespace mclahe
