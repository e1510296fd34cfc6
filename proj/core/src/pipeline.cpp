#include "mclahe/pipeline.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <utility>

#include "mclahe/interpolation.hpp"
#include "mclahe/parallel.hpp"

namespace mclahe {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void validate_request(const McLaheRequest& request) {
  const NdImage& image = request.image;
  if (request.kernel.sizes.size() != image.rank())
    throw ValidationError("kernel rank " + std::to_string(request.kernel.sizes.size()) +
                          " does not match image rank " + std::to_string(image.rank()));
  for (std::size_t i = 0; i < image.rank(); ++i) {
    const std::size_t b = request.kernel.sizes[i];
    if (b == 0 || b > image.shape()[i])
      throw ValidationError("kernel size must be in [1, extent] along dimension " +
                            std::to_string(i));
  }
  if (!(request.params.clip_limit > 0.0) || !(request.params.clip_limit <= 1.0))
    throw ValidationError("clip_limit must be in (0, 1]");
  if (request.params.n_bins < 2) throw ValidationError("n_bins must be at least 2");
  if (!image.all_finite()) throw ValidationError("image contains non-finite values");
}

// Copies `slice` (rank-1) into `volume` at index `frame` along `axis`.
void paste_frame(NdImage& volume, const NdImage& slice, std::size_t axis,
                 std::size_t frame) {
  const auto strides = row_major_strides(volume.shape());
  const std::size_t rank = volume.rank();
  Shape slice_shape = slice.shape();
  std::vector<std::size_t> coord(slice_shape.size(), 0);
  const std::span<const double> src = slice.values();
  const std::span<double> dst = volume.values();
  std::size_t flat = 0;
  do {
    std::size_t target = frame * strides[axis];
    std::size_t j = 0;
    for (std::size_t i = 0; i < rank; ++i) {
      if (i == axis) continue;
      target += coord[j++] * strides[i];
    }
    dst[target] = src[flat++];
  } while (next_coord(coord, slice_shape));
}

NdImage extract_frame(const NdImage& volume, std::size_t axis, std::size_t frame) {
  Shape offset(volume.rank(), 0);
  Shape extents = volume.shape();
  offset[axis] = frame;
  extents[axis] = 1;
  NdImage block = crop(volume, offset, extents);
  // Dropping the singleton axis keeps the row-major buffer unchanged.
  Shape squeezed;
  for (std::size_t i = 0; i < volume.rank(); ++i)
    if (i != axis) squeezed.push_back(volume.shape()[i]);
  std::vector<double> data(block.values().begin(), block.values().end());
  return NdImage(std::move(squeezed), std::move(data));
}

}  // namespace

NdImage mclahe(const McLaheRequest& request, PhaseTimings* timings) {
  validate_request(request);
  const NdImage& image = request.image;
  const std::size_t rank = image.rank();
  const unsigned threads = resolve_threads(request.threads);

  auto t0 = std::chrono::steady_clock::now();
  const PadPlan plan = compute_pad_plan(image.shape(), request.kernel);
  const NdImage padded = symmetric_pad(image, plan);
  if (timings) timings->pad_s += seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  IntensityRange global_range;
  image.min_max(global_range.lo, global_range.hi);
  MappingGrid maps;
  {
    const KernelGrid grid = kernelize(padded, request.kernel);
    maps = build_mappings(grid, request.params, global_range, threads);
  }
  if (timings) timings->histograms_s += seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto grid_strides = row_major_strides(maps.grid_shape);
  const std::size_t corners = corner_count(rank);
  NdImage out = NdImage::zeros(image.shape());
  const std::span<const double> src = image.values();
  const std::span<double> dst = out.values();

  parallel_for(out.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::array<std::size_t, kMaxRank> pixel{};
    std::array<double, kMaxCorners> coeffs;
    std::array<const KernelMapping*, kMaxCorners> neighbor_maps;
    std::vector<std::size_t> coord(rank, 0);
    unflatten(begin, image.shape(), coord);

    for (std::size_t flat = begin; flat < end; ++flat) {
      for (std::size_t j = 0; j < rank; ++j) pixel[j] = coord[j] + plan.before[j];

      const NeighborSet ns =
          neighbor_kernels({pixel.data(), rank}, request.kernel, maps.grid_shape);
      interp_coefficients(ns, request.kernel, {coeffs.data(), corners});
      for (std::size_t c = 0; c < corners; ++c) {
        std::size_t grid_flat = 0;
        for (std::size_t j = 0; j < rank; ++j) {
          const std::size_t bit = (c >> (rank - 1 - j)) & 1u;
          grid_flat += (ns.lower[j] + bit) * grid_strides[j];
        }
        neighbor_maps[c] = &maps.at(grid_flat);
      }
      dst[flat] = transform_pixel(src[flat], {neighbor_maps.data(), corners},
                                  {coeffs.data(), corners});
      next_coord(coord, image.shape());
    }
  });
  if (timings) timings->interpolation_s += seconds_since(t0);
  return out;
}

NdImage mclahe_framewise(const NdImage& image, std::size_t frame_axis,
                         const KernelSpec& kernel, const EnhanceParams& params,
                         unsigned threads, bool renormalize_slices,
                         PhaseTimings* timings) {
  if (image.rank() < 2)
    throw ValidationError("framewise mode needs rank >= 2");
  if (frame_axis >= image.rank())
    throw ValidationError("frame axis " + std::to_string(frame_axis) +
                          " out of range for rank " + std::to_string(image.rank()));
  if (kernel.sizes.size() != image.rank() - 1)
    throw ValidationError("framewise kernel rank must be image rank - 1");

  NdImage out = NdImage::zeros(image.shape());
  const std::size_t frames = image.shape()[frame_axis];
  for (std::size_t t = 0; t < frames; ++t) {
    NdImage slice = extract_frame(image, frame_axis, t);
    if (renormalize_slices) slice = normalize_to_unit(slice);
    const NdImage enhanced =
        mclahe({std::move(slice), kernel, params, threads}, timings);
    paste_frame(out, enhanced, frame_axis, t);
  }
  return out;
}

NdImage normalize_to_unit(const NdImage& image) {
  if (!image.all_finite()) throw ValidationError("image contains non-finite values");
  double lo, hi;
  image.min_max(lo, hi);
  if (!(hi > lo)) return NdImage::constant(image.shape(), 0.5);
  const double span = hi - lo;
  std::vector<double> data(image.size());
  const std::span<const double> src = image.values();
  for (std::size_t i = 0; i < image.size(); ++i) data[i] = (src[i] - lo) / span;
  return NdImage(image.shape(), std::move(data));
}

}  // namespace mclahe
