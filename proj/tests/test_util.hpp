#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mclahe/nd_image.hpp"

namespace testutil {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline mclahe::NdImage random_image(mclahe::Shape shape, std::uint64_t seed,
                                    double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::vector<double> data(mclahe::shape_product(shape));
  for (double& v : data) v = lo + (hi - lo) * uniform01(rng);
  return mclahe::NdImage(std::move(shape), std::move(data));
}

/// Random integers in [lo, hi] stored as doubles; shifting such an image by
/// an integer constant is exact in f8.
inline mclahe::NdImage random_int_image(mclahe::Shape shape, std::uint64_t seed,
                                        int lo = 0, int hi = 255) {
  std::mt19937_64 rng(seed);
  std::vector<double> data(mclahe::shape_product(shape));
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  for (double& v : data)
    v = static_cast<double>(lo + static_cast<int>(rng() % span));
  return mclahe::NdImage(std::move(shape), std::move(data));
}

/// out axis i takes input axis perm[i].
inline mclahe::NdImage transpose(const mclahe::NdImage& in,
                                 const std::vector<std::size_t>& perm) {
  const std::size_t rank = in.rank();
  mclahe::Shape out_shape(rank);
  for (std::size_t i = 0; i < rank; ++i) out_shape[i] = in.shape()[perm[i]];

  mclahe::NdImage out = mclahe::NdImage::zeros(out_shape);
  const auto in_strides = mclahe::row_major_strides(in.shape());
  std::vector<std::size_t> coord(rank, 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    mclahe::unflatten(flat, out_shape, coord);
    std::size_t src = 0;
    for (std::size_t i = 0; i < rank; ++i) src += coord[i] * in_strides[perm[i]];
    out[flat] = in[src];
  }
  return out;
}

inline std::vector<std::size_t> permute_sizes(const std::vector<std::size_t>& sizes,
                                              const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> out(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) out[i] = sizes[perm[i]];
  return out;
}

inline bool bit_equal(const mclahe::NdImage& a, const mclahe::NdImage& b) {
  if (a.shape() != b.shape()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace testutil
