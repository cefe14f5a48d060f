#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace pdsq {

/// Philox-4x32-10 counter-based generator (Salmon et al., SC'11). A (key, counter)
/// pair maps to four independent 32-bit words, so any substream can be addressed
/// directly without stepping through its predecessors.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  static Block generate(std::uint64_t key, Block counter) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kMul0} * counter[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * counter[2];
      counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ k0, static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ k1, static_cast<std::uint32_t>(p0)};
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return counter;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/// SplitMix64 finalizer; used to derive independent keys from a user seed.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Key for the `purpose`-th family of substreams under `seed`.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t purpose) {
  return mix64(mix64(seed) ^ mix64(purpose + 0x5851F42D4C957F2Dull));
}

/// Sequential reader over substream `index` of a Philox key. Draw j of the
/// substream lives in counter block (index, j / 2), so the layout is fixed by
/// (key, index) alone.
class RandomStream {
 public:
  RandomStream(std::uint64_t key, std::uint64_t index) : key_(key), index_(index) {}

  std::uint64_t next_u64() {
    if (slot_ == 2) refill();
    const std::uint64_t hi = block_[2 * slot_];
    const std::uint64_t lo = block_[2 * slot_ + 1];
    ++slot_;
    return (hi << 32) | lo;
  }

  /// Uniform on (0, 1]; never zero, so log() is safe.
  double next_uniform() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  /// Standard normal by the Box-Muller cosine branch (two uniforms per variate).
  double next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, bound) by 128-bit multiply-high.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  void refill() {
    block_ = Philox4x32::generate(key_, {static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32),
                                         static_cast<std::uint32_t>(block_counter_),
                                         static_cast<std::uint32_t>(block_counter_ >> 32)});
    ++block_counter_;
    slot_ = 0;
  }

  std::uint64_t key_;
  std::uint64_t index_;
  std::uint64_t block_counter_ = 0;
  Philox4x32::Block block_{};
  int slot_ = 2;
};

}  // namespace pdsq
