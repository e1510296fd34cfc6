#include "mclahe/filters.hpp"

#include <algorithm>
#include <cmath>

#include "mclahe/parallel.hpp"

namespace mclahe {

namespace {

std::vector<double> gaussian_taps(double sigma, double truncate) {
  const long long radius = static_cast<long long>(std::ceil(truncate * sigma));
  std::vector<double> taps(2 * radius + 1);
  double total = 0.0;
  for (long long k = -radius; k <= radius; ++k) {
    const double t = static_cast<double>(k) / sigma;
    taps[k + radius] = std::exp(-0.5 * t * t);
    total += taps[k + radius];
  }
  for (double& w : taps) w /= total;
  return taps;
}

// One separable pass along `axis`. Lines are independent work items; each
// worker gathers a line into a scratch buffer and writes the convolved line
// back, so outputs do not depend on scheduling.
NdImage convolve_axis(const NdImage& image, std::size_t axis,
                      std::span<const double> taps, unsigned threads) {
  const auto& shape = image.shape();
  const auto strides = row_major_strides(shape);
  const std::size_t extent = shape[axis];
  const std::size_t stride = strides[axis];
  const std::size_t lines = image.size() / extent;
  const long long radius = (static_cast<long long>(taps.size()) - 1) / 2;

  NdImage out = NdImage::zeros(shape);
  const std::span<const double> src = image.values();
  const std::span<double> dst = out.values();

  // Shape with `axis` removed, used to enumerate line origins.
  Shape line_shape;
  std::vector<std::size_t> line_strides;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i == axis) continue;
    line_shape.push_back(shape[i]);
    line_strides.push_back(strides[i]);
  }

  parallel_for(lines, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> line(extent);
    std::vector<std::size_t> coord(line_shape.size(), 0);
    for (std::size_t li = begin; li < end; ++li) {
      unflatten(li, line_shape, coord);
      const std::size_t origin = flatten(coord, line_strides);
      for (std::size_t x = 0; x < extent; ++x) line[x] = src[origin + x * stride];
      for (std::size_t x = 0; x < extent; ++x) {
        double acc = 0.0;
        for (long long k = -radius; k <= radius; ++k) {
          const std::size_t sx = mirror_index(static_cast<long long>(x) + k, extent);
          acc += taps[k + radius] * line[sx];
        }
        dst[origin + x * stride] = acc;
      }
    }
  });
  return out;
}

}  // namespace

NdImage gaussian_filter(const NdImage& image, const GaussianSpec& spec, unsigned threads) {
  if (spec.sigmas.size() != image.rank())
    throw ValidationError("sigma count does not match image rank");
  if (!(spec.truncate > 0.0)) throw ValidationError("truncate must be positive");
  for (double s : spec.sigmas)
    if (!(s >= 0.0)) throw ValidationError("sigma must be non-negative");
  if (!image.all_finite()) throw ValidationError("image contains non-finite values");

  NdImage result = image;
  for (std::size_t axis = 0; axis < image.rank(); ++axis) {
    if (spec.sigmas[axis] == 0.0) continue;
    const std::vector<double> taps = gaussian_taps(spec.sigmas[axis], spec.truncate);
    result = convolve_axis(result, axis, taps, threads);
  }
  return result;
}

NdImage median_filter(const NdImage& image, const MedianSpec& spec, unsigned threads) {
  const std::size_t rank = image.rank();
  if (spec.window.size() != rank)
    throw ValidationError("window rank does not match image rank");
  for (std::size_t w : spec.window)
    if (w == 0) throw ValidationError("window extents must be positive");
  if (!image.all_finite()) throw ValidationError("image contains non-finite values");

  const auto& shape = image.shape();
  const auto strides = row_major_strides(shape);
  const std::size_t window_len = shape_product(spec.window);

  // Window offsets per dimension: -floor((w-1)/2) .. +floor(w/2).
  std::vector<std::vector<long long>> offsets(rank);
  for (std::size_t j = 0; j < rank; ++j) {
    const long long w = static_cast<long long>(spec.window[j]);
    for (long long k = -((w - 1) / 2); k <= w / 2; ++k) offsets[j].push_back(k);
  }

  NdImage out = NdImage::zeros(shape);
  const std::span<const double> src = image.values();
  const std::span<double> dst = out.values();

  parallel_for(image.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> window(window_len);
    std::vector<std::size_t> coord(rank, 0);
    std::vector<std::size_t> wcoord(rank, 0);
    Shape wshape(spec.window.begin(), spec.window.end());
    for (std::size_t flat = begin; flat < end; ++flat) {
      unflatten(flat, shape, coord);
      std::size_t n = 0;
      std::fill(wcoord.begin(), wcoord.end(), 0);
      do {
        std::size_t sflat = 0;
        for (std::size_t j = 0; j < rank; ++j) {
          const long long idx = static_cast<long long>(coord[j]) + offsets[j][wcoord[j]];
          sflat += mirror_index(idx, shape[j]) * strides[j];
        }
        window[n++] = src[sflat];
      } while (next_coord(wcoord, wshape));

      const std::size_t mid = window_len / 2;
      std::nth_element(window.begin(), window.begin() + mid, window.begin() + window_len);
      if (window_len % 2 == 1) {
        dst[flat] = window[mid];
      } else {
        const double upper = window[mid];
        const double lower = *std::max_element(window.begin(), window.begin() + mid);
        dst[flat] = 0.5 * (lower + upper);
      }
    }
  });
  return out;
}

}  // namespace mclahe
