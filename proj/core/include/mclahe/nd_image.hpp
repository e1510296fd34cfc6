#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mclahe {

/// Hard cap on array rank. Pixel transforms enumerate the 2^D nearest
/// kernels, so the cap bounds that set at 256 corners and lets per-pixel
/// state live in fixed-size stack arrays.
inline constexpr std::size_t kMaxRank = 8;
inline constexpr std::size_t kMaxCorners = std::size_t{1} << kMaxRank;

/// Thrown when an operation's preconditions do not hold (rank mismatch,
/// oversized kernel, out-of-bounds region, invalid parameters).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Shape = std::vector<std::size_t>;

/// Product of all extents; throws ValidationError on overflow.
std::size_t shape_product(std::span<const std::size_t> shape);

/// Row-major strides; the last dimension has stride 1.
std::vector<std::size_t> row_major_strides(std::span<const std::size_t> shape);

/// Edge-including symmetric reflection of an arbitrary (possibly negative)
/// index into [0, extent):  ... 1 0 | 0 1 ... n-1 | n-1 n-2 ...
/// Folds repeatedly, so the index may be any number of periods out of range.
std::size_t mirror_index(long long index, std::size_t extent);

inline std::size_t flatten(std::span<const std::size_t> coord,
                           std::span<const std::size_t> strides) {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < coord.size(); ++i) flat += coord[i] * strides[i];
  return flat;
}

void unflatten(std::size_t flat, std::span<const std::size_t> shape,
               std::span<std::size_t> coord);

/// Advances `coord` one step in row-major order; returns false after the
/// last coordinate wraps back to all zeros.
bool next_coord(std::span<std::size_t> coord, std::span<const std::size_t> shape);

/// Dense N-dimensional array of real intensities in a flat row-major buffer.
/// Library operations never mutate their inputs; every transform returns a
/// new image, so values are safe to share across concurrent workers.
class NdImage {
 public:
  NdImage(Shape shape, std::vector<double> data);

  static NdImage zeros(Shape shape);
  static NdImage constant(Shape shape, double value);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const double> values() const noexcept { return {data_.data(), data_.size()}; }
  std::span<double> values() noexcept { return {data_.data(), data_.size()}; }

  double operator[](std::size_t flat) const noexcept { return data_[flat]; }
  double& operator[](std::size_t flat) noexcept { return data_[flat]; }

  bool all_finite() const noexcept;
  void min_max(double& lo, double& hi) const noexcept;

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// Per-dimension kernel (contextual region) sizes; must satisfy
/// 1 <= sizes[i] <= shape[i] for the image they partition.
struct KernelSpec {
  std::vector<std::size_t> sizes;
};

/// Padding lengths attached before/after each dimension.
struct PadPlan {
  std::vector<std::size_t> before;
  std::vector<std::size_t> after;

  std::size_t total(std::size_t dim) const { return before[dim] + after[dim]; }
};

/// Kernel blocks of a padded image in block-major storage: block k occupies
/// [k * block_len, (k+1) * block_len), pixels row-major within the block,
/// blocks enumerated row-major over the kernel grid.
struct KernelGrid {
  Shape grid_shape;
  KernelSpec kernel;
  std::size_t block_len = 0;
  std::vector<double> blocks;

  std::size_t block_count() const noexcept {
    return block_len == 0 ? 0 : blocks.size() / block_len;
  }
  std::span<const double> block(std::size_t flat) const noexcept {
    return {blocks.data() + flat * block_len, block_len};
  }
};

/// Padding that makes every dimension divisible by the kernel size and
/// leaves every original pixel with a complete neighbor-kernel set:
/// total_i = 2*b_i - 1 - ((s_i - 1) mod b_i), split before = total/2,
/// after = (total+1)/2.
PadPlan compute_pad_plan(std::span<const std::size_t> shape, const KernelSpec& kernel);

/// Extends the image by edge-including mirror reflection. Requires
/// before/after <= extent along each dimension (a single fold).
NdImage symmetric_pad(const NdImage& image, const PadPlan& plan);

/// Splits a padded image into disjoint kernel blocks; every padded extent
/// must be divisible by the kernel size.
KernelGrid kernelize(const NdImage& padded, const KernelSpec& kernel);

/// Copies the axis-aligned sub-block at `offset` with extents `out_shape`.
NdImage crop(const NdImage& image, std::span<const std::size_t> offset,
             std::span<const std::size_t> out_shape);

}  // namespace mclahe
