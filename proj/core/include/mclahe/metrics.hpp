#pragma once

#include <cstddef>

#include "mclahe/nd_image.hpp"

namespace mclahe {

/// Contrast metrics for one dataset (std/entropy) or a dataset pair
/// (mse/psnr). psnr_db is +infinity when the operands are identical.
struct MetricsReport {
  double mse = 0.0;
  double psnr_db = 0.0;
  double std = 0.0;
  double entropy_bits = 0.0;
  std::size_t n_bins_used = 0;
};

/// Mean squared difference over all pixels; shapes must match.
double mse(const NdImage& a, const NdImage& b);

/// 10 * log10(peak^2 / mse(a, b)); +infinity when mse is zero.
double psnr(const NdImage& a, const NdImage& b, double peak = 1.0);

/// Population standard deviation of all pixel values (RMS contrast).
double rms_contrast(const NdImage& a);

/// Entropy in bits of the intensity histogram over [min, max] with n_bins
/// uniform bins; a constant image has entropy 0.
double shannon_entropy(const NdImage& a, std::size_t n_bins = 256);

/// std/entropy of `a` plus mse/psnr of (a, b).
MetricsReport compute_metrics(const NdImage& a, const NdImage& b,
                              std::size_t n_bins = 256, double peak = 1.0);

}  // namespace mclahe
