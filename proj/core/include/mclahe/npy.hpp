#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>

#include "mclahe/nd_image.hpp"

namespace mclahe {

/// Element types supported in NPY and raw files, all little-endian.
enum class Dtype { f4, f8, u1, u2, i2, i4 };

std::size_t dtype_item_size(Dtype dtype);
std::string dtype_descr(Dtype dtype);          // NPY descr string, e.g. "<f4"
Dtype dtype_from_name(const std::string& name);  // "f4", "f8", "u1", ...

/// What went wrong with an array file.
enum class NpyErrc {
  io_failure,
  bad_magic,
  unsupported_version,
  bad_header,
  unsupported_dtype,
  fortran_order,
  truncated_payload,
  size_mismatch,
  value_out_of_range,
};

class NpyError : public std::runtime_error {
 public:
  NpyError(NpyErrc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  NpyErrc code() const noexcept { return code_; }

 private:
  NpyErrc code_;
};

struct ArrayFileMeta {
  Dtype dtype = Dtype::f8;
  bool fortran_order = false;
  Shape shape;
};

/// Reads an NPY v1.0/v2.0 file. Fortran-ordered files are rejected with
/// NpyErrc::fortran_order rather than silently transposed.
std::pair<NdImage, ArrayFileMeta> read_npy(const std::filesystem::path& path);

/// Writes an NPY v1.0 file: header padded with spaces to a 64-byte multiple
/// and newline-terminated, little-endian row-major payload. Integer dtypes
/// round to nearest and reject out-of-range values.
void write_npy(const std::filesystem::path& path, const NdImage& image, Dtype dtype);

/// Reads a headerless binary file whose size must equal
/// item_size * product(meta.shape).
NdImage read_raw(const std::filesystem::path& path, const ArrayFileMeta& meta);

}  // namespace mclahe
