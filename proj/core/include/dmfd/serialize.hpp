#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dmfd/ffn.hpp"
#include "dmfd/rbm.hpp"
#include "dmfd/stack.hpp"

namespace dmfd {

/// Binary layouts, all integers u32 little-endian, reals f64 little-endian,
/// matrices row-major:
///
///   RBM layer   "DMFD" version m n d  act_v[m] act_h[n] (u8 codes)  W B_h B_v
///   FFN layer   "DMFF" version m n d  act[n] (u8 codes)  W B
///   RBM stack   "DMFS" version count  then `count` RBM layer records
///
/// Activation codes: 0 identity, 1 sigmoid, 2 relu, 3 softsign.
inline constexpr std::uint32_t kFormatVersion = 1;

std::vector<std::uint8_t> encode_rbm(const RbmParams& params);
RbmParams decode_rbm(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_ffn(const FfnLayer& layer);
FfnLayer decode_ffn(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_stack(const RbmStack& stack);
RbmStack decode_stack(std::span<const std::uint8_t> bytes);

void save_rbm(const RbmParams& params, const std::filesystem::path& path);
RbmParams load_rbm(const std::filesystem::path& path);
void save_ffn(const FfnLayer& layer, const std::filesystem::path& path);
FfnLayer load_ffn(const std::filesystem::path& path);
void save_stack(const RbmStack& stack, const std::filesystem::path& path);
RbmStack load_stack(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace dmfd
