#pragma once

#include <cstddef>

#include "mclahe/histogram.hpp"
#include "mclahe/nd_image.hpp"

namespace mclahe {

/// One end-to-end enhancement request. threads == 0 uses all hardware
/// threads; results are bit-identical for every worker count.
struct McLaheRequest {
  NdImage image;
  KernelSpec kernel;
  EnhanceParams params;
  unsigned threads = 0;
};

/// Wall time spent in each phase of the last run, in seconds.
struct PhaseTimings {
  double pad_s = 0.0;
  double histograms_s = 0.0;
  double interpolation_s = 0.0;
};

/// Contrast-limited adaptive histogram equalization over all dimensions:
/// mirror-pad, partition into kernels, build one clipped-histogram CDF per
/// kernel, then blend the 2^D nearest kernel mappings per pixel. The output
/// has the input's shape and values in [0, 1].
NdImage mclahe(const McLaheRequest& request, PhaseTimings* timings = nullptr);

/// Applies mclahe independently to every slice along `frame_axis` and
/// restacks; the kernel spans the remaining rank-1 dimensions. With
/// renormalize_slices each slice is rescaled to [0, 1] before enhancement;
/// by default slices are processed exactly as stored, so any normalization
/// applied to the whole volume beforehand is kept.
NdImage mclahe_framewise(const NdImage& image, std::size_t frame_axis,
                         const KernelSpec& kernel, const EnhanceParams& params,
                         unsigned threads = 0, bool renormalize_slices = false,
                         PhaseTimings* timings = nullptr);

/// Affine map of [min, max] onto [0, 1]; a constant image maps to 0.5.
NdImage normalize_to_unit(const NdImage& image);

}  // namespace mclahe
