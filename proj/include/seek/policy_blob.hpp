#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/crc.hpp>

#include "seek/mlp.hpp"

namespace seek {

// Byte layout, little-endian:
//   0  magic "SEEK"
//   4  u16 version (1)
//   6  u16 layer_count (3)
//   8  per layer u16 in_dim, u16 out_dim
//   20 u8 activation (0 relu, 1 tanh), then 3 zero bytes
//   24 f32 parameters, per layer weights row-major then biases
//   .. u32 CRC-32 of every preceding byte
namespace blob {
inline constexpr std::array<std::uint8_t, 4> kMagic{'S', 'E', 'E', 'K'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 24;
inline constexpr std::size_t kParamBytes = kParamCount * 4;
inline constexpr std::size_t kCrcOffset = kHeaderSize + kParamBytes;
inline constexpr std::size_t kFileSize = kCrcOffset + 4;
static_assert(kFileSize == 2520);
}  // namespace blob

enum class BlobStatus : std::uint8_t {
  Ok = 0,
  BadMagic = 1,
  BadVersion = 2,
  BadDims = 3,
  BadChecksum = 4,
};

constexpr std::string_view blob_status_name(BlobStatus s) {
  switch (s) {
    case BlobStatus::Ok: return "ok";
    case BlobStatus::BadMagic: return "bad magic";
    case BlobStatus::BadVersion: return "bad version";
    case BlobStatus::BadDims: return "bad dimensions";
    case BlobStatus::BadChecksum: return "bad checksum";
  }
  return "?";
}

inline std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

namespace detail {
inline std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}
inline std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) | (static_cast<std::uint32_t>(b[off + 3]) << 24);
}
inline void write_u16(std::span<std::uint8_t> b, std::size_t off, std::uint16_t v) {
  b[off] = static_cast<std::uint8_t>(v & 0xFF);
  b[off + 1] = static_cast<std::uint8_t>(v >> 8);
}
inline void write_u32(std::span<std::uint8_t> b, std::size_t off, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) b[off + k] = static_cast<std::uint8_t>((v >> (8 * k)) & 0xFF);
}
}  // namespace detail

/// Serializes parameters and activation into a version-1 blob.
inline std::array<std::uint8_t, blob::kFileSize> encode_blob(std::span<const float> params,
                                                             Activation act) {
  if (params.size() != kParamCount) throw std::invalid_argument("encode_blob: wrong parameter count");
  std::array<std::uint8_t, blob::kFileSize> out{};
  std::copy(blob::kMagic.begin(), blob::kMagic.end(), out.begin());
  detail::write_u16(out, 4, blob::kVersion);
  detail::write_u16(out, 6, static_cast<std::uint16_t>(kLayerCount));
  for (std::size_t l = 0; l < kLayerCount; ++l) {
    detail::write_u16(out, 8 + 4 * l, static_cast<std::uint16_t>(kLayerDims[l]));
    detail::write_u16(out, 10 + 4 * l, static_cast<std::uint16_t>(kLayerDims[l + 1]));
  }
  out[20] = static_cast<std::uint8_t>(act);
  for (std::size_t i = 0; i < kParamCount; ++i)
    detail::write_u32(out, blob::kHeaderSize + 4 * i, std::bit_cast<std::uint32_t>(params[i]));
  detail::write_u32(out, blob::kCrcOffset,
                    crc32(std::span<const std::uint8_t>(out.data(), blob::kCrcOffset)));
  return out;
}

inline std::array<std::uint8_t, blob::kFileSize> encode_blob(const Mlp<float>& net) {
  return encode_blob(net.params(), net.activation());
}

/// Validates a blob and decodes it into caller storage. Performs no
/// allocation. Check order: magic, version, layer layout, size and CRC.
/// A well-checksummed blob with an unknown activation tag reports
/// BadVersion, since version 1 defines only tags 0 and 1.
inline BlobStatus decode_blob(std::span<const std::uint8_t> bytes, std::span<float, kParamCount> params,
                              Activation& act) {
  if (bytes.size() < 4 || !std::equal(blob::kMagic.begin(), blob::kMagic.end(), bytes.begin()))
    return BlobStatus::BadMagic;
  if (bytes.size() < 6 || detail::read_u16(bytes, 4) != blob::kVersion) return BlobStatus::BadVersion;
  if (bytes.size() < 8) return BlobStatus::BadChecksum;
  if (detail::read_u16(bytes, 6) != kLayerCount) return BlobStatus::BadDims;
  if (bytes.size() < blob::kHeaderSize) return BlobStatus::BadChecksum;
  for (std::size_t l = 0; l < kLayerCount; ++l) {
    if (detail::read_u16(bytes, 8 + 4 * l) != kLayerDims[l] ||
        detail::read_u16(bytes, 10 + 4 * l) != kLayerDims[l + 1])
      return BlobStatus::BadDims;
  }
  if (bytes.size() != blob::kFileSize) return BlobStatus::BadChecksum;
  if (crc32(bytes.first(blob::kCrcOffset)) != detail::read_u32(bytes, blob::kCrcOffset))
    return BlobStatus::BadChecksum;
  const std::uint8_t tag = bytes[20];
  if (tag > 1) return BlobStatus::BadVersion;
  act = static_cast<Activation>(tag);
  for (std::size_t i = 0; i < kParamCount; ++i)
    params[i] = std::bit_cast<float>(detail::read_u32(bytes, blob::kHeaderSize + 4 * i));
  return BlobStatus::Ok;
}

class BlobError : public std::runtime_error {
 public:
  explicit BlobError(BlobStatus status, const std::string& where)
      : std::runtime_error(where + ": " + std::string(blob_status_name(status))), status_(status) {}
  BlobStatus status() const { return status_; }

 private:
  BlobStatus status_;
};

inline void save_policy(const Mlp<float>& net, const std::filesystem::path& path) {
  const auto bytes = encode_blob(net);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline Mlp<float> load_policy(std::span<const std::uint8_t> bytes, const std::string& where = "blob") {
  Mlp<float> net;
  Activation act{};
  const BlobStatus s = decode_blob(bytes, net.params().first<kParamCount>(), act);
  if (s != BlobStatus::Ok) throw BlobError(s, where);
  net.set_activation(act);
  return net;
}

inline Mlp<float> load_policy(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return load_policy(bytes, path.string());
}

}  // namespace seek
