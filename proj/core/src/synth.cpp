#include "mclahe/synth.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace mclahe {

namespace {

double uniform01(std::mt19937_64& rng) {
  // 53 random mantissa bits; avoids distribution objects whose sequences
  // vary between standard library implementations.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Blob {
  std::vector<double> center;
  std::vector<double> inv_two_sigma_sq;
  double amplitude;
};

// Flat baseline before onset, sigmoid rise, exponential relaxation.
double activation(double t, double frames) {
  const double onset = 0.25 * frames;
  const double rise = 1.0 / (1.0 + std::exp(-(t - onset) / 0.8));
  const double decay = t > onset ? std::exp(-(t - onset) / (0.4 * frames)) : 1.0;
  const double baseline = 0.15;
  return baseline + (1.0 - baseline) * rise * decay;
}

}  // namespace

void synth_faint_region(const Shape& shape, Shape& offset, Shape& extents) {
  offset.assign(shape.size(), 0);
  extents = shape;
  offset[0] = shape[0] / 2;
  extents[0] = shape[0] - shape[0] / 2;
}

NdImage make_synthetic(const SynthSpec& spec) {
  const std::size_t rank = spec.shape.size();
  if (rank == 0 || rank > kMaxRank)
    throw ValidationError("synthetic shape rank must be in [1, " +
                          std::to_string(kMaxRank) + "]");
  for (std::size_t extent : spec.shape)
    if (extent == 0) throw ValidationError("synthetic shape extents must be positive");
  if (spec.shape[0] < 2)
    throw ValidationError("dimension 0 must have extent >= 2 to hold two regions");
  if (!(spec.faint_scale > 0.0))
    throw ValidationError("faint_scale must be positive");

  NdImage out = NdImage::zeros(spec.shape);
  const std::size_t split = spec.shape[0] / 2;
  const bool has_time = rank >= 2;
  const std::size_t frames = has_time ? spec.shape[rank - 1] : 1;

  // region 0: bright half [0, split) along dim 0; region 1: faint half.
  for (int region = 0; region < 2; ++region) {
    std::mt19937_64 rng(spec.seed * 0x9e3779b97f4a7c15ull + 0x243f6a8885a308d3ull +
                        static_cast<std::uint64_t>(region));

    const std::size_t lo0 = region == 0 ? 0 : split;
    const std::size_t hi0 = region == 0 ? split : spec.shape[0];

    std::vector<Blob> blobs(spec.blobs_per_region);
    for (Blob& blob : blobs) {
      blob.center.resize(rank);
      blob.inv_two_sigma_sq.resize(rank);
      for (std::size_t j = 0; j < rank; ++j) {
        const double lo = j == 0 ? static_cast<double>(lo0) : 0.0;
        const double hi = j == 0 ? static_cast<double>(hi0)
                                 : static_cast<double>(spec.shape[j]);
        blob.center[j] = lo + (0.15 + 0.7 * uniform01(rng)) * (hi - lo);
        const double sigma = (0.08 + 0.12 * uniform01(rng)) * (hi - lo);
        blob.inv_two_sigma_sq[j] = 1.0 / (2.0 * sigma * sigma);
      }
      blob.amplitude = 0.5 + 0.5 * uniform01(rng);
    }

    std::vector<std::size_t> coord(rank, 0);
    coord[0] = lo0;
    double region_max = 0.0;
    std::vector<std::size_t> flat_indices;
    const auto strides = row_major_strides(spec.shape);

    // First pass fills the region; second pass rescales it so its maximum
    // is exact (1 for the bright half, 1/faint_scale for the faint half).
    do {
      std::size_t flat = flatten(coord, strides);
      double v = 0.05 + 0.02 * uniform01(rng);
      const double act =
          has_time ? activation(static_cast<double>(coord[rank - 1]),
                                static_cast<double>(frames))
                   : 1.0;
      for (const Blob& blob : blobs) {
        double exponent = 0.0;
        for (std::size_t j = 0; j < rank; ++j) {
          const double d = static_cast<double>(coord[j]) - blob.center[j];
          exponent += d * d * blob.inv_two_sigma_sq[j];
        }
        v += blob.amplitude * act * std::exp(-exponent);
      }
      out[flat] = v;
      if (v > region_max) region_max = v;
      flat_indices.push_back(flat);

      // Advance within the region: dimension 0 runs over [lo0, hi0).
      std::size_t i = rank;
      bool carried = true;
      while (carried && i-- > 0) {
        ++coord[i];
        const std::size_t upper = i == 0 ? hi0 : spec.shape[i];
        if (coord[i] < upper) {
          carried = false;
        } else {
          coord[i] = i == 0 ? lo0 : 0;
        }
      }
      if (carried) break;
    } while (true);

    // Divide by the region maximum first so the peak voxel lands exactly on
    // 1.0, then scale; the region maximum is then exactly the target value.
    const double target = region == 0 ? 1.0 : 1.0 / spec.faint_scale;
    for (std::size_t flat : flat_indices) out[flat] = (out[flat] / region_max) * target;
  }
  return out;
}

}  // namespace mclahe
