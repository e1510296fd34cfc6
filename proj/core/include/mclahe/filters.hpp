#pragma once

#include <cstddef>
#include <vector>

#include "mclahe/nd_image.hpp"

namespace mclahe {

/// Separable Gaussian smoothing; sigma is in pixels per dimension and 0
/// skips that dimension. The per-axis kernel radius is ceil(truncate*sigma).
struct GaussianSpec {
  std::vector<double> sigmas;
  double truncate = 4.0;
};

/// Sliding-window median; window extents are in pixels per dimension.
/// Even extents anchor toward the origin: offsets -floor((w-1)/2)..floor(w/2).
struct MedianSpec {
  std::vector<std::size_t> window;
};

/// Dimension-by-dimension convolution with a sampled Gaussian normalized to
/// sum 1; boundaries are extended by edge-including mirror reflection.
/// Output shape equals input shape.
NdImage gaussian_filter(const NdImage& image, const GaussianSpec& spec,
                        unsigned threads = 1);

/// Median over the window around each pixel, boundaries extended by
/// edge-including mirror reflection. An even-count window takes the mean of
/// the two central order statistics.
NdImage median_filter(const NdImage& image, const MedianSpec& spec,
                      unsigned threads = 1);

}  // namespace mclahe
