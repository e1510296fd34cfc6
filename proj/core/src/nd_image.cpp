#include "mclahe/nd_image.hpp"

#include <cmath>
#include <cstring>
#include <limits>

namespace mclahe {

std::size_t shape_product(std::span<const std::size_t> shape) {
  std::size_t product = 1;
  for (std::size_t extent : shape) {
    if (extent == 0) throw ValidationError("shape extents must be positive");
    if (extent > std::numeric_limits<std::size_t>::max() / product)
      throw ValidationError("shape product overflows size_t");
    product *= extent;
  }
  return product;
}

std::vector<std::size_t> row_major_strides(std::span<const std::size_t> shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;)
    strides[i - 1] = strides[i] * shape[i];
  return strides;
}

std::size_t mirror_index(long long index, std::size_t extent) {
  const long long n = static_cast<long long>(extent);
  const long long period = 2 * n;
  long long m = index % period;
  if (m < 0) m += period;
  if (m >= n) m = period - 1 - m;
  return static_cast<std::size_t>(m);
}

void unflatten(std::size_t flat, std::span<const std::size_t> shape,
               std::span<std::size_t> coord) {
  for (std::size_t i = shape.size(); i-- > 0;) {
    coord[i] = flat % shape[i];
    flat /= shape[i];
  }
}

bool next_coord(std::span<std::size_t> coord, std::span<const std::size_t> shape) {
  for (std::size_t i = coord.size(); i-- > 0;) {
    if (++coord[i] < shape[i]) return true;
    coord[i] = 0;
  }
  return false;
}

NdImage::NdImage(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.empty() || shape_.size() > kMaxRank)
    throw ValidationError("rank must be in [1, " + std::to_string(kMaxRank) + "]");
  if (shape_product(shape_) != data_.size())
    throw ValidationError("data length does not match shape product");
}

NdImage NdImage::zeros(Shape shape) {
  const std::size_t n = shape_product(shape);
  return NdImage(std::move(shape), std::vector<double>(n, 0.0));
}

NdImage NdImage::constant(Shape shape, double value) {
  const std::size_t n = shape_product(shape);
  return NdImage(std::move(shape), std::vector<double>(n, value));
}

bool NdImage::all_finite() const noexcept {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void NdImage::min_max(double& lo, double& hi) const noexcept {
  lo = data_.front();
  hi = data_.front();
  for (double v : data_) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
}

PadPlan compute_pad_plan(std::span<const std::size_t> shape, const KernelSpec& kernel) {
  if (kernel.sizes.size() != shape.size())
    throw ValidationError("kernel rank does not match image rank");
  PadPlan plan;
  plan.before.resize(shape.size());
  plan.after.resize(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const std::size_t s = shape[i];
    const std::size_t b = kernel.sizes[i];
    if (b == 0 || b > s)
      throw ValidationError("kernel size must be in [1, extent] along dimension " +
                            std::to_string(i));
    const std::size_t total = 2 * b - 1 - ((s - 1) % b);
    plan.before[i] = total / 2;
    plan.after[i] = (total + 1) / 2;
  }
  return plan;
}

NdImage symmetric_pad(const NdImage& image, const PadPlan& plan) {
  const std::size_t rank = image.rank();
  if (plan.before.size() != rank || plan.after.size() != rank)
    throw ValidationError("pad plan rank does not match image rank");

  Shape out_shape(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    const std::size_t s = image.shape()[i];
    if (plan.before[i] > s || plan.after[i] > s)
      throw ValidationError("pad length exceeds extent along dimension " +
                            std::to_string(i));
    out_shape[i] = s + plan.total(i);
  }

  // Per-dimension source index tables; the inner copy then just gathers.
  std::vector<std::vector<std::size_t>> lut(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    lut[i].resize(out_shape[i]);
    for (std::size_t o = 0; o < out_shape[i]; ++o)
      lut[i][o] = mirror_index(static_cast<long long>(o) -
                                   static_cast<long long>(plan.before[i]),
                               image.shape()[i]);
  }

  NdImage out = NdImage::zeros(out_shape);
  const auto in_strides = row_major_strides(image.shape());
  const std::size_t last = rank - 1;
  const std::span<const double> src = image.values();
  const std::span<double> dst = out.values();

  std::vector<std::size_t> coord(rank, 0);
  std::size_t flat = 0;
  do {
    std::size_t base = 0;
    for (std::size_t i = 0; i < last; ++i) base += lut[i][coord[i]] * in_strides[i];
    for (std::size_t o = 0; o < out_shape[last]; ++o)
      dst[flat++] = src[base + lut[last][o]];
    coord[last] = out_shape[last] - 1;  // consume the inner dimension
  } while (next_coord(coord, out_shape));
  return out;
}

KernelGrid kernelize(const NdImage& padded, const KernelSpec& kernel) {
  const std::size_t rank = padded.rank();
  if (kernel.sizes.size() != rank)
    throw ValidationError("kernel rank does not match image rank");

  KernelGrid grid;
  grid.kernel = kernel;
  grid.grid_shape.resize(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    const std::size_t s = padded.shape()[i];
    const std::size_t b = kernel.sizes[i];
    if (b == 0 || s % b != 0)
      throw ValidationError("padded extent not divisible by kernel size along dimension " +
                            std::to_string(i));
    grid.grid_shape[i] = s / b;
  }
  grid.block_len = shape_product(kernel.sizes);
  grid.blocks.resize(padded.size());

  const auto strides = row_major_strides(padded.shape());
  const std::size_t last = rank - 1;
  const std::size_t run = kernel.sizes[last];
  const std::span<const double> src = padded.values();

  std::vector<std::size_t> gcoord(rank, 0);
  std::size_t out = 0;
  do {
    std::size_t origin = 0;
    for (std::size_t i = 0; i < rank; ++i)
      origin += gcoord[i] * kernel.sizes[i] * strides[i];
    // Copy the block row by row; rows are contiguous along the last axis.
    std::vector<std::size_t> bcoord(rank, 0);
    do {
      std::size_t base = origin;
      for (std::size_t i = 0; i < last; ++i) base += bcoord[i] * strides[i];
      std::memcpy(grid.blocks.data() + out, src.data() + base, run * sizeof(double));
      out += run;
      bcoord[last] = run - 1;
    } while (next_coord(bcoord, kernel.sizes));
  } while (next_coord(gcoord, grid.grid_shape));
  return grid;
}

NdImage crop(const NdImage& image, std::span<const std::size_t> offset,
             std::span<const std::size_t> out_shape) {
  const std::size_t rank = image.rank();
  if (offset.size() != rank || out_shape.size() != rank)
    throw ValidationError("crop rank does not match image rank");
  for (std::size_t i = 0; i < rank; ++i) {
    if (out_shape[i] == 0 || offset[i] + out_shape[i] > image.shape()[i])
      throw ValidationError("crop region out of bounds along dimension " +
                            std::to_string(i));
  }

  Shape shape(out_shape.begin(), out_shape.end());
  NdImage out = NdImage::zeros(shape);
  const auto strides = row_major_strides(image.shape());
  const std::size_t last = rank - 1;
  const std::size_t run = out_shape[last];
  const std::span<const double> src = image.values();
  const std::span<double> dst = out.values();

  std::vector<std::size_t> coord(rank, 0);
  std::size_t flat = 0;
  do {
    std::size_t base = 0;
    for (std::size_t i = 0; i < rank; ++i) base += (offset[i] + coord[i]) * strides[i];
    std::memcpy(dst.data() + flat, src.data() + base, run * sizeof(double));
    flat += run;
    coord[last] = run - 1;
  } while (next_coord(coord, shape));
  return out;
}

}  // namespace mclahe
