#pragma once

#include <cstddef>
#include <cstdint>

#include "mclahe/nd_image.hpp"

namespace mclahe {

/// Synthetic test volume: Gaussian blobs over a weak noisy background, split
/// into a bright and a faint region along dimension 0. With rank >= 2 the
/// blob amplitudes follow a smooth activation profile along the last
/// dimension (flat baseline, fast rise, slow decay). Each region is rescaled
/// so the bright maximum is exactly 1 and the faint maximum exactly
/// 1 / faint_scale. Output is fully determined by the spec fields.
struct SynthSpec {
  Shape shape{32, 32, 16, 8};
  std::uint64_t seed = 0;
  double faint_scale = 100.0;
  std::size_t blobs_per_region = 4;
};

NdImage make_synthetic(const SynthSpec& spec);

/// Offset/extents of the faint region (the upper half of dimension 0).
void synth_faint_region(const Shape& shape, Shape& offset, Shape& extents);

}  // namespace mclahe
