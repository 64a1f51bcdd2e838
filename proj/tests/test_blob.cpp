#include <cstdint>
#include <cstring>
#include <filesystem>
#include <vector>

#include <gtest/gtest.h>

#include "seek/policy_blob.hpp"

using namespace seek;

namespace {

std::vector<std::uint8_t> blob_of(const Mlp<float>& net) {
  const auto b = encode_blob(net);
  return {b.begin(), b.end()};
}

void reseal(std::vector<std::uint8_t>& b) {
  detail::write_u32(b, blob::kCrcOffset, crc32(std::span(b).first(blob::kCrcOffset)));
}

TEST(Blob, Size) { EXPECT_EQ(blob::kFileSize, 2520u); }

TEST(Blob, FileRoundTrip) {
  const auto net = Mlp<float>::random(77);
  const auto path = std::filesystem::temp_directory_path() / "seek_blob_roundtrip.bin";
  save_policy(net, path);
  EXPECT_EQ(std::filesystem::file_size(path), blob::kFileSize);
  const auto back = load_policy(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.params().size(), net.params().size());
  EXPECT_EQ(std::memcmp(back.params().data(), net.params().data(), kParamCount * sizeof(float)), 0);
  EXPECT_EQ(back.activation(), net.activation());
}

TEST(Blob, KeepsActivation) {
  const auto net = Mlp<float>::random(1, Activation::Tanh);
  EXPECT_EQ(load_policy(blob_of(net)).activation(), Activation::Tanh);
}

BlobStatus status_of(const std::vector<std::uint8_t>& b) {
  std::array<float, kParamCount> p{};
  Activation act{};
  return decode_blob(b, p, act);
}

TEST(Blob, TruncatedIsChecksumError) {
  auto b = blob_of(Mlp<float>::random(2));
  b.resize(b.size() - 100);
  EXPECT_EQ(status_of(b), BlobStatus::BadChecksum);
  try {
    load_policy(b);
    FAIL();
  } catch (const BlobError& e) {
    EXPECT_EQ(e.status(), BlobStatus::BadChecksum);
  }
}

TEST(Blob, WrongHiddenWidthIsDimsError) {
  auto b = blob_of(Mlp<float>::random(2));
  detail::write_u16(b, 10, 21);
  reseal(b);
  EXPECT_EQ(status_of(b), BlobStatus::BadDims);
}

TEST(Blob, FourLayersRejected) {
  auto b = blob_of(Mlp<float>::random(2));
  detail::write_u16(b, 6, 4);
  const auto s = status_of(b);
  EXPECT_TRUE(s == BlobStatus::BadDims || s == BlobStatus::BadVersion);
}

TEST(Blob, FlippedParameterByteIsChecksumError) {
  auto b = blob_of(Mlp<float>::random(2));
  b[blob::kHeaderSize + 333] ^= 0x10;
  EXPECT_EQ(status_of(b), BlobStatus::BadChecksum);
}

TEST(Blob, MagicAndVersion) {
  auto b = blob_of(Mlp<float>::random(2));
  auto bad = b;
  bad[0] = 'X';
  EXPECT_EQ(status_of(bad), BlobStatus::BadMagic);
  bad = b;
  detail::write_u16(bad, 4, 9);
  EXPECT_EQ(status_of(bad), BlobStatus::BadVersion);
  EXPECT_EQ(status_of({}), BlobStatus::BadMagic);
}

TEST(Blob, MissingFile) {
  EXPECT_THROW(load_policy(std::filesystem::path("/nonexistent/policy.bin")), std::runtime_error);
}

}  // namespace
