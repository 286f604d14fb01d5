#include "rotor/rng.hpp"

namespace rotor {

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t purpose,
                            std::uint64_t index) {
  const std::uint64_t z = mix64(seed ^ (0x9E3779B97F4A7C15ull * (purpose + 1)));
  return mix64(z ^ (0xBF58476D1CE4E5B9ull * (index + 1)));
}

}  // namespace rotor
