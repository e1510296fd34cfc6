#include "mclahe/interpolation.hpp"

#include <algorithm>

namespace mclahe {

NeighborSet neighbor_kernels(std::span<const std::size_t> pixel, const KernelSpec& kernel,
                             std::span<const std::size_t> grid_shape) {
  const std::size_t rank = pixel.size();
  if (rank == 0 || rank > kMaxRank)
    throw ValidationError("pixel rank must be in [1, " + std::to_string(kMaxRank) + "]");
  if (kernel.sizes.size() != rank || grid_shape.size() != rank)
    throw ValidationError("kernel/grid rank does not match pixel rank");

  NeighborSet ns;
  ns.rank = rank;
  for (std::size_t j = 0; j < rank; ++j) {
    const std::size_t b = kernel.sizes[j];
    const std::size_t g = grid_shape[j];
    if (b == 0) throw ValidationError("kernel size must be positive");
    if (g < 2) throw ValidationError("grid needs at least two kernels per dimension");
    if (pixel[j] >= g * b) throw ValidationError("pixel outside the padded image");

    // lower = floor((x - (b-1)/2) / b), in integers: floor((2x - b + 1) / 2b).
    const long long num = 2 * static_cast<long long>(pixel[j]) -
                          static_cast<long long>(b) + 1;
    const long long den = 2 * static_cast<long long>(b);
    long long lower = num >= 0 ? num / den : -((-num + den - 1) / den);
    lower = std::clamp<long long>(lower, 0, static_cast<long long>(g) - 2);

    const double center = static_cast<double>(lower) * static_cast<double>(b) +
                          (static_cast<double>(b) - 1.0) * 0.5;
    const double d_lo = static_cast<double>(pixel[j]) - center;
    if (d_lo < 0.0 || d_lo > static_cast<double>(b))
      throw ValidationError("pixel outside the valid interpolation region");

    ns.lower[j] = static_cast<std::size_t>(lower);
    ns.dist_lo[j] = d_lo;
    ns.dist_hi[j] = static_cast<double>(b) - d_lo;
  }
  return ns;
}

void interp_coefficients(const NeighborSet& ns, const KernelSpec& kernel,
                         std::span<double> coefficients) {
  const std::size_t rank = ns.rank;
  if (kernel.sizes.size() != rank)
    throw ValidationError("kernel rank does not match neighbor set");
  const std::size_t corners = corner_count(rank);
  if (coefficients.size() != corners)
    throw ValidationError("coefficient span must hold 2^rank entries");

  // Numerators per (dimension, side). b - d_lo == dist_hi and b - d_hi ==
  // dist_lo, so both sides are half-integers and their products are exact.
  double denom = 1.0;
  for (std::size_t j = 0; j < rank; ++j) denom *= static_cast<double>(kernel.sizes[j]);

  for (std::size_t c = 0; c < corners; ++c) {
    double numer = 1.0;
    for (std::size_t j = 0; j < rank; ++j) {
      const bool upper = (c >> (rank - 1 - j)) & 1u;
      numer *= upper ? ns.dist_lo[j] : ns.dist_hi[j];
    }
    coefficients[c] = numer / denom;
  }
}

double transform_pixel(double value, std::span<const KernelMapping* const> mappings,
                       std::span<const double> coefficients) {
  const std::size_t n = coefficients.size();
  if (mappings.size() != n)
    throw ValidationError("mapping/coefficient counts differ");
  if (n == 0 || n > kMaxCorners)
    throw ValidationError("corner count must be in [1, 2^" + std::to_string(kMaxRank) + "]");

  std::array<double, kMaxCorners> terms;
  for (std::size_t i = 0; i < n; ++i)
    terms[i] = coefficients[i] * apply_mapping(value, *mappings[i]);

  // Ascending-order accumulation: the sum depends only on the multiset of
  // terms, not on the corner enumeration order.
  std::sort(terms.begin(), terms.begin() + n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += terms[i];
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace mclahe
