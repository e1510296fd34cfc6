#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "mclahe/histogram.hpp"
#include "mclahe/nd_image.hpp"

namespace mclahe {

/// The 2^D nearest-neighbor kernels of one pixel, described per dimension by
/// the lower kernel's grid index and the distances from the pixel to the
/// lower/upper kernel centers. dist_lo[j] + dist_hi[j] == kernel size b_j.
struct NeighborSet {
  std::size_t rank = 0;
  std::array<std::size_t, kMaxRank> lower{};
  std::array<double, kMaxRank> dist_lo{};
  std::array<double, kMaxRank> dist_hi{};
};

inline std::size_t corner_count(std::size_t rank) { return std::size_t{1} << rank; }

/// Locates the two flanking kernels per dimension for a pixel in padded
/// coordinates. The kernel center of grid cell g is g*b + (b-1)/2; the lower
/// neighbor is clamped so both flanking cells stay inside the grid. Throws
/// if the pixel lies outside the span of the kernel centers.
NeighborSet neighbor_kernels(std::span<const std::size_t> pixel, const KernelSpec& kernel,
                             std::span<const std::size_t> grid_shape);

/// Lagrange multilinear weights for all 2^D corners, one per corner index
/// whose bit for dimension j (dimension 0 most significant) selects the
/// lower (0) or upper (1) neighbor: c_i = prod_j (b_j - d_{j,i_j}) / b_j.
/// Distances are half-integers, so the numerator products are exact and the
/// weights do not depend on the dimension order. Weights lie in [0, 1] and
/// sum to 1 within 1e-12.
void interp_coefficients(const NeighborSet& ns, const KernelSpec& kernel,
                         std::span<double> coefficients);

/// Blends the 2^D neighbor mappings of one pixel: sum_i c_i * m_i(value),
/// clamped into [0, 1]. The corner terms are accumulated in ascending value
/// order, which makes the result independent of the corner enumeration order
/// and hence invariant under axis permutation.
double transform_pixel(double value, std::span<const KernelMapping* const> mappings,
                       std::span<const double> coefficients);

}  // namespace mclahe
