// Counter-based random number generation.
//
// Every random quantity in the project is a pure function of
// (seed, purpose, stream index, draw counter), so runs are reproducible
// bit-for-bit regardless of evaluation order or thread count. The block
// cipher and the draw helpers are defined inline: the simulator's inner
// loop must see through them to vectorize.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace rotor {

// One block of the Philox-4x32 bijection with 10 rounds, as published;
// the unit tests pin the reference test vectors.
inline std::array<std::uint32_t, 4> philox4x32(
    std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kBump0 = 0x9E3779B9u;
  constexpr std::uint32_t kBump1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 =
        static_cast<std::uint64_t>(kMul0) * counter[0];
    const std::uint64_t p1 =
        static_cast<std::uint64_t>(kMul1) * counter[2];
    counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
    key[0] += kBump0;
    key[1] += kBump1;
  }
  return counter;
}

// splitmix64 output mix, used as the stream-derivation hash.
std::uint64_t mix64(std::uint64_t z);

// 64-bit stream key derived from a user seed, a purpose tag, and a
// stream index (replica id, path id, ...). Distinct purposes decouple
// the random streams of unrelated consumers under one seed.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t purpose,
                            std::uint64_t index);

inline constexpr std::uint64_t kPurposeSdeNoise = 1;
inline constexpr std::uint64_t kPurposeInitialSample = 2;
inline constexpr std::uint64_t kPurposeBootstrap = 3;

// Stateless view of one Philox stream: each (hi, lo) counter pair
// yields an independent variate.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t stream_key)
      : key_{static_cast<std::uint32_t>(stream_key),
             static_cast<std::uint32_t>(stream_key >> 32)} {}

  // Uniform in (0, 1], from 53 bits; never 0, so logarithms are safe.
  double uniform(std::uint64_t hi, std::uint64_t lo) const {
    const auto out = block(hi, lo);
    return to_unit((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
  }

  // Standard normal via the Box-Muller cosine branch. One variate per
  // counter pair; the sine partner is discarded for a fixed
  // one-counter-one-draw accounting.
  double normal(std::uint64_t hi, std::uint64_t lo) const {
    const auto out = block(hi, lo);
    const double u1 =
        to_unit((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
    const double u2 =
        to_unit((static_cast<std::uint64_t>(out[2]) << 32) | out[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t hi, std::uint64_t lo) const {
    return philox4x32(
        {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
         static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)},
        key_);
  }

  static double to_unit(std::uint64_t v) {
    return static_cast<double>((v >> 11) + 1) * 0x1p-53;
  }

  std::array<std::uint32_t, 2> key_;
};

// Sequential adapter over a CounterRng for plain sampling loops.
class SequentialRng {
 public:
  explicit SequentialRng(std::uint64_t stream_key) : rng_(stream_key) {}

  double uniform() { return rng_.uniform(0, next_++); }
  double normal() { return rng_.normal(0, next_++); }

 private:
  CounterRng rng_;
  std::uint64_t next_ = 0;
};

}  // namespace rotor
