#include "dmfd/serialize.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>

#include "dmfd/error.hpp"

namespace dmfd {
namespace {

RbmParams sample_rbm(std::uint64_t seed) {
  Prng rng(seed);
  RbmParams p = init_params(5, 3, 2, Activation::Softsign, Activation::Relu, rng);
  for (double& v : p.hidden_bias.values()) v = rng.uniform01() - 0.5;
  for (double& v : p.visible_bias.values()) v = rng.uniform01() - 0.5;
  p.visible_act = ActivationMap({Activation::Relu, Activation::Identity, Activation::Sigmoid,
                                 Activation::Relu, Activation::Softsign});
  return p;
}

TEST(Serialize, RbmRoundTrip) {
  const RbmParams p = sample_rbm(1);
  const auto bytes = encode_rbm(p);
  ASSERT_GE(bytes.size(), 4u);
  EXPECT_EQ(std::memcmp(bytes.data(), "DMFD", 4), 0);
  EXPECT_EQ(decode_rbm(bytes), p);
  EXPECT_EQ(encode_rbm(decode_rbm(bytes)), bytes);
}

TEST(Serialize, HeaderLayout) {
  const auto bytes = encode_rbm(sample_rbm(1));
  auto u32 = [&](std::size_t at) {
    return static_cast<std::uint32_t>(bytes[at] | bytes[at + 1] << 8 | bytes[at + 2] << 16 |
                                      bytes[at + 3] << 24);
  };
  EXPECT_EQ(u32(4), kFormatVersion);
  EXPECT_EQ(u32(8), 5u);
  EXPECT_EQ(u32(12), 3u);
  EXPECT_EQ(u32(16), 2u);
  EXPECT_EQ(bytes[20], 2);  // relu
  EXPECT_EQ(bytes.size(), 20u + 5 + 3 + 8u * (15 + 6 + 10));
}

TEST(Serialize, FfnAndStackRoundTrip) {
  Prng rng(2);
  const FfnLayer layer = init_layer(4, 3, 1, Activation::Sigmoid, rng);
  EXPECT_EQ(decode_ffn(encode_ffn(layer)), layer);

  const RbmStack stack({init_params(6, 4, 1, Activation::Softsign, Activation::Relu, rng),
                        init_params(4, 2, 1, Activation::Softsign, Activation::Identity, rng)});
  EXPECT_EQ(decode_stack(encode_stack(stack)), stack);

  const auto dir = std::filesystem::temp_directory_path() / "dmfd_serialize_test";
  std::filesystem::create_directories(dir);
  save_stack(stack, dir / "s.dmfs");
  EXPECT_EQ(load_stack(dir / "s.dmfs"), stack);
  save_rbm(stack.layer(0), dir / "l.dmfd");
  EXPECT_EQ(load_rbm(dir / "l.dmfd"), stack.layer(0));
  save_ffn(layer, dir / "f.dmff");
  EXPECT_EQ(load_ffn(dir / "f.dmff"), layer);
  std::filesystem::remove_all(dir);
}

TEST(Serialize, RejectsDamagedInput) {
  const auto good = encode_rbm(sample_rbm(3));
  for (std::size_t cut : {0u, 3u, 10u, 22u, 100u}) {
    const std::vector<std::uint8_t> truncated(good.begin(), good.begin() + cut);
    EXPECT_THROW(decode_rbm(truncated), IoError) << "cut at " << cut;
  }
  auto extra = good;
  extra.push_back(0);
  EXPECT_THROW(decode_rbm(extra), IoError);

  auto magic = good;
  magic[0] = 'X';
  EXPECT_THROW(decode_rbm(magic), IoError);

  auto version = good;
  version[4] = 9;
  EXPECT_THROW(decode_rbm(version), IoError);

  auto code = good;
  code[20] = 7;
  EXPECT_THROW(decode_rbm(code), IoError);

  auto huge = good;
  huge[11] = 0x7f;
  EXPECT_THROW(decode_rbm(huge), IoError);

  auto nan = good;
  const std::size_t first_weight = 20 + 5 + 3;
  for (std::size_t i = 0; i < 8; ++i) nan[first_weight + i] = 0xff;
  EXPECT_THROW(decode_rbm(nan), IoError);

  EXPECT_THROW(decode_stack(good), IoError);
  EXPECT_THROW(load_rbm("/nonexistent/model.dmfd"), IoError);
}

}  // namespace
}  // namespace dmfd
