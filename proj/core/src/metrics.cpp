#include "mclahe/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "mclahe/histogram.hpp"

namespace mclahe {

double mse(const NdImage& a, const NdImage& b) {
  if (a.shape() != b.shape()) throw ValidationError("mse operands differ in shape");
  const std::span<const double> va = a.values();
  const std::span<const double> vb = b.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - vb[i];
    acc += d * d;
  }
  return acc / static_cast<double>(va.size());
}

double psnr(const NdImage& a, const NdImage& b, double peak) {
  if (!(peak > 0.0)) throw ValidationError("psnr peak must be positive");
  const double err = mse(a, b);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / err);
}

double rms_contrast(const NdImage& a) {
  const std::span<const double> v = a.values();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) {
    const double d = x - mean;
    var += d * d;
  }
  return std::sqrt(var / static_cast<double>(v.size()));
}

double shannon_entropy(const NdImage& a, std::size_t n_bins) {
  if (n_bins < 2) throw ValidationError("entropy needs at least 2 bins");
  double lo, hi;
  a.min_max(lo, hi);
  if (!(hi > lo)) return 0.0;

  const IntensityRange range{lo, hi};
  std::vector<double> counts(n_bins, 0.0);
  for (double v : a.values()) counts[bin_index(v, range, n_bins)] += 1.0;

  const double total = static_cast<double>(a.size());
  double entropy = 0.0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / total;
    entropy -= p * std::log2(p);
  }
  return entropy;
}

MetricsReport compute_metrics(const NdImage& a, const NdImage& b, std::size_t n_bins,
                              double peak) {
  MetricsReport report;
  report.mse = mse(a, b);
  report.psnr_db = psnr(a, b, peak);
  report.std = rms_contrast(a);
  report.entropy_bits = shannon_entropy(a, n_bins);
  report.n_bins_used = n_bins;
  return report;
}

}  // namespace mclahe
