#include "mclahe/npy.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace mclahe {

namespace {

constexpr char kMagic[6] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kHeaderAlign = 64;

std::uint16_t load_le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t load_le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t load_le64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void store_le16(std::uint16_t v, unsigned char* p) {
  p[0] = static_cast<unsigned char>(v & 0xff);
  p[1] = static_cast<unsigned char>(v >> 8);
}

void store_le32(std::uint32_t v, unsigned char* p) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

void store_le64(std::uint64_t v, unsigned char* p) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

double decode_value(Dtype dtype, const unsigned char* p) {
  switch (dtype) {
    case Dtype::f4:
      return static_cast<double>(std::bit_cast<float>(load_le32(p)));
    case Dtype::f8:
      return std::bit_cast<double>(load_le64(p));
    case Dtype::u1:
      return static_cast<double>(p[0]);
    case Dtype::u2:
      return static_cast<double>(load_le16(p));
    case Dtype::i2:
      return static_cast<double>(static_cast<std::int16_t>(load_le16(p)));
    case Dtype::i4:
      return static_cast<double>(static_cast<std::int32_t>(load_le32(p)));
  }
  throw NpyError(NpyErrc::unsupported_dtype, "unknown dtype");
}

void encode_value(Dtype dtype, double v, unsigned char* p) {
  const auto check_range = [&](double lo, double hi, long long rounded) {
    if (!(static_cast<double>(rounded) >= lo && static_cast<double>(rounded) <= hi))
      throw NpyError(NpyErrc::value_out_of_range,
                     "value " + std::to_string(v) + " out of range for integer dtype");
  };
  switch (dtype) {
    case Dtype::f4:
      store_le32(std::bit_cast<std::uint32_t>(static_cast<float>(v)), p);
      return;
    case Dtype::f8:
      store_le64(std::bit_cast<std::uint64_t>(v), p);
      return;
    case Dtype::u1: {
      const long long r = std::llround(v);
      check_range(0, 255, r);
      p[0] = static_cast<unsigned char>(r);
      return;
    }
    case Dtype::u2: {
      const long long r = std::llround(v);
      check_range(0, 65535, r);
      store_le16(static_cast<std::uint16_t>(r), p);
      return;
    }
    case Dtype::i2: {
      const long long r = std::llround(v);
      check_range(-32768, 32767, r);
      store_le16(static_cast<std::uint16_t>(static_cast<std::int16_t>(r)), p);
      return;
    }
    case Dtype::i4: {
      const long long r = std::llround(v);
      check_range(-2147483648.0, 2147483647.0, r);
      store_le32(static_cast<std::uint32_t>(static_cast<std::int32_t>(r)), p);
      return;
    }
  }
  throw NpyError(NpyErrc::unsupported_dtype, "unknown dtype");
}

// Extracts the value following "'key':" in the header dictionary.
std::string dict_value(const std::string& header, const std::string& key) {
  const std::string quoted = "'" + key + "'";
  std::size_t pos = header.find(quoted);
  if (pos == std::string::npos)
    throw NpyError(NpyErrc::bad_header, "header missing key " + key);
  pos = header.find(':', pos + quoted.size());
  if (pos == std::string::npos)
    throw NpyError(NpyErrc::bad_header, "malformed header near " + key);
  ++pos;
  while (pos < header.size() && header[pos] == ' ') ++pos;
  return header.substr(pos);
}

Dtype parse_descr(const std::string& descr) {
  if (descr == "<f4") return Dtype::f4;
  if (descr == "<f8") return Dtype::f8;
  if (descr == "|u1" || descr == "<u1") return Dtype::u1;
  if (descr == "<u2") return Dtype::u2;
  if (descr == "<i2") return Dtype::i2;
  if (descr == "<i4") return Dtype::i4;
  throw NpyError(NpyErrc::unsupported_dtype, "unsupported dtype descr " + descr);
}

Shape parse_shape(const std::string& tail) {
  const std::size_t open = tail.find('(');
  const std::size_t close = tail.find(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw NpyError(NpyErrc::bad_header, "malformed shape tuple");
  Shape shape;
  std::string inner = tail.substr(open + 1, close - open - 1);
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t i = 0;
    while (i < item.size() && item[i] == ' ') ++i;
    if (i == item.size()) continue;
    unsigned long long extent = 0;
    for (; i < item.size() && item[i] >= '0' && item[i] <= '9'; ++i)
      extent = extent * 10 + static_cast<unsigned long long>(item[i] - '0');
    if (extent == 0)
      throw NpyError(NpyErrc::bad_header, "shape extents must be positive");
    shape.push_back(static_cast<std::size_t>(extent));
  }
  if (shape.empty())
    throw NpyError(NpyErrc::bad_header, "zero-dimensional arrays are not supported");
  return shape;
}

NdImage decode_payload(const std::vector<unsigned char>& payload, Dtype dtype,
                       const Shape& shape) {
  const std::size_t item = dtype_item_size(dtype);
  const std::size_t count = shape_product(shape);
  std::vector<double> data(count);
  for (std::size_t i = 0; i < count; ++i)
    data[i] = decode_value(dtype, payload.data() + i * item);
  return NdImage(shape, std::move(data));
}

}  // namespace

std::size_t dtype_item_size(Dtype dtype) {
  switch (dtype) {
    case Dtype::u1:
      return 1;
    case Dtype::u2:
    case Dtype::i2:
      return 2;
    case Dtype::f4:
    case Dtype::i4:
      return 4;
    case Dtype::f8:
      return 8;
  }
  throw NpyError(NpyErrc::unsupported_dtype, "unknown dtype");
}

std::string dtype_descr(Dtype dtype) {
  switch (dtype) {
    case Dtype::f4:
      return "<f4";
    case Dtype::f8:
      return "<f8";
    case Dtype::u1:
      return "|u1";
    case Dtype::u2:
      return "<u2";
    case Dtype::i2:
      return "<i2";
    case Dtype::i4:
      return "<i4";
  }
  throw NpyError(NpyErrc::unsupported_dtype, "unknown dtype");
}

Dtype dtype_from_name(const std::string& name) {
  if (name == "f4") return Dtype::f4;
  if (name == "f8") return Dtype::f8;
  if (name == "u1") return Dtype::u1;
  if (name == "u2") return Dtype::u2;
  if (name == "i2") return Dtype::i2;
  if (name == "i4") return Dtype::i4;
  throw NpyError(NpyErrc::unsupported_dtype, "unsupported dtype name " + name);
}

std::pair<NdImage, ArrayFileMeta> read_npy(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw NpyError(NpyErrc::io_failure, "cannot open " + path.string());

  unsigned char preamble[8];
  file.read(reinterpret_cast<char*>(preamble), sizeof(preamble));
  if (file.gcount() != sizeof(preamble) ||
      std::memcmp(preamble, kMagic, sizeof(kMagic)) != 0)
    throw NpyError(NpyErrc::bad_magic, path.string() + " is not an NPY file");

  const unsigned major = preamble[6];
  const unsigned minor = preamble[7];
  std::size_t header_len = 0;
  if (major == 1 && minor == 0) {
    unsigned char len[2];
    file.read(reinterpret_cast<char*>(len), 2);
    if (file.gcount() != 2)
      throw NpyError(NpyErrc::bad_header, "truncated header length");
    header_len = load_le16(len);
  } else if (major == 2 && minor == 0) {
    unsigned char len[4];
    file.read(reinterpret_cast<char*>(len), 4);
    if (file.gcount() != 4)
      throw NpyError(NpyErrc::bad_header, "truncated header length");
    header_len = load_le32(len);
  } else {
    throw NpyError(NpyErrc::unsupported_version,
                   "unsupported NPY version " + std::to_string(major) + "." +
                       std::to_string(minor));
  }

  std::string header(header_len, '\0');
  file.read(header.data(), static_cast<std::streamsize>(header_len));
  if (file.gcount() != static_cast<std::streamsize>(header_len))
    throw NpyError(NpyErrc::bad_header, "truncated header");

  ArrayFileMeta meta;
  {
    const std::string descr_tail = dict_value(header, "descr");
    if (descr_tail.empty() || descr_tail[0] != '\'')
      throw NpyError(NpyErrc::bad_header, "malformed descr");
    const std::size_t end = descr_tail.find('\'', 1);
    if (end == std::string::npos)
      throw NpyError(NpyErrc::bad_header, "malformed descr");
    meta.dtype = parse_descr(descr_tail.substr(1, end - 1));
  }
  {
    const std::string order_tail = dict_value(header, "fortran_order");
    if (order_tail.rfind("True", 0) == 0) {
      throw NpyError(NpyErrc::fortran_order,
                     path.string() + " is Fortran-ordered; only C order is supported");
    }
    if (order_tail.rfind("False", 0) != 0)
      throw NpyError(NpyErrc::bad_header, "malformed fortran_order");
    meta.fortran_order = false;
  }
  meta.shape = parse_shape(dict_value(header, "shape"));

  const std::size_t expected =
      dtype_item_size(meta.dtype) * shape_product(meta.shape);
  std::vector<unsigned char> payload(expected);
  file.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(expected));
  if (file.gcount() != static_cast<std::streamsize>(expected))
    throw NpyError(NpyErrc::truncated_payload,
                   "payload has " + std::to_string(file.gcount()) + " bytes, expected " +
                       std::to_string(expected));
  file.peek();
  if (!file.eof())
    throw NpyError(NpyErrc::truncated_payload,
                   "payload larger than itemsize * product(shape)");

  return {decode_payload(payload, meta.dtype, meta.shape), std::move(meta)};
}

void write_npy(const std::filesystem::path& path, const NdImage& image, Dtype dtype) {
  std::string dict = "{'descr': '" + dtype_descr(dtype) + "', 'fortran_order': False, 'shape': (";
  for (std::size_t i = 0; i < image.rank(); ++i) {
    dict += std::to_string(image.shape()[i]);
    if (image.rank() == 1 || i + 1 < image.rank()) dict += ",";
    if (i + 1 < image.rank()) dict += " ";
  }
  dict += "), }";

  // magic(6) + version(2) + header_len(2) + dict + padding + '\n', padded to
  // a multiple of 64 bytes.
  const std::size_t prefix = sizeof(kMagic) + 2 + 2;
  std::size_t total = prefix + dict.size() + 1;
  const std::size_t padded_total = ((total + kHeaderAlign - 1) / kHeaderAlign) * kHeaderAlign;
  const std::size_t header_len = padded_total - prefix;
  if (header_len > std::numeric_limits<std::uint16_t>::max())
    throw NpyError(NpyErrc::bad_header, "header too large for NPY v1.0");

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw NpyError(NpyErrc::io_failure, "cannot open " + path.string() + " for writing");

  file.write(kMagic, sizeof(kMagic));
  file.put('\x01');
  file.put('\x00');
  unsigned char len[2];
  store_le16(static_cast<std::uint16_t>(header_len), len);
  file.write(reinterpret_cast<char*>(len), 2);
  file << dict;
  for (std::size_t i = prefix + dict.size(); i + 1 < padded_total; ++i) file.put(' ');
  file.put('\n');

  const std::size_t item = dtype_item_size(dtype);
  std::vector<unsigned char> buffer(item * image.size());
  const std::span<const double> values = image.values();
  for (std::size_t i = 0; i < image.size(); ++i)
    encode_value(dtype, values[i], buffer.data() + i * item);
  file.write(reinterpret_cast<char*>(buffer.data()),
             static_cast<std::streamsize>(buffer.size()));
  if (!file)
    throw NpyError(NpyErrc::io_failure, "write to " + path.string() + " failed");
}

NdImage read_raw(const std::filesystem::path& path, const ArrayFileMeta& meta) {
  if (meta.fortran_order)
    throw NpyError(NpyErrc::fortran_order, "raw input must be C-ordered");
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw NpyError(NpyErrc::io_failure, "cannot open " + path.string());

  const std::size_t expected = dtype_item_size(meta.dtype) * shape_product(meta.shape);
  file.seekg(0, std::ios::end);
  const auto actual = static_cast<std::size_t>(file.tellg());
  if (actual != expected)
    throw NpyError(NpyErrc::size_mismatch,
                   path.string() + " has " + std::to_string(actual) +
                       " bytes, expected " + std::to_string(expected));
  file.seekg(0, std::ios::beg);

  std::vector<unsigned char> payload(expected);
  file.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(expected));
  if (file.gcount() != static_cast<std::streamsize>(expected))
    throw NpyError(NpyErrc::io_failure, "short read from " + path.string());
  return decode_payload(payload, meta.dtype, meta.shape);
}

}  // namespace mclahe
