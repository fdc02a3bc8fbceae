#pragma once
/*
 * Deterministic, splittable random number generation.
 *
 * Every sample stream in the library is identified by a 64-bit key derived
 * from a master seed and a list of integer labels (arm index, run index, ...).
 * The mixing rule is published here so results can be reproduced exactly:
 *
 *   key(master)           = master
 *   key(parent, label)    = mix64(parent XOR (label + 0x9E3779B97F4A7C15))
 *
 * where mix64 is the SplitMix64 finalizer (Steele, Lea & Flood, "Fast
 * splittable pseudorandom number generators", OOPSLA 2014; constants as in
 * Vigna's splitmix64.c). A stream with key k emits the SplitMix64 sequence
 *
 *   s_0 = k,  s_{i+1} = s_i + 0x9E3779B97F4A7C15,  out_i = mix64(s_{i+1}).
 *
 * Consequences relied on elsewhere:
 *  - identical (master, labels) give identical draws on every platform and
 *    for every thread count;
 *  - prefix stability: the first k draws of a stream do not depend on how
 *    many draws are taken afterwards;
 *  - streams with different label paths are statistically independent for
 *    practical purposes (full-avalanche finalizer between levels).
 *
 * next_unit() maps a 64-bit output to the open interval (0,1) via
 * (x >> 11 + 0.5) * 2^-53, so inverse-CDF sampling never sees u = 0 or u = 1.
 */
#include <cstdint>
#include <string_view>

namespace riskbandit {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer: bijective, full avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// FNV-1a, used to fold string labels (experiment config names) into seeds.
inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Sequential generator over a fixed key; see the mixing rule above.
class Stream {
 public:
  explicit constexpr Stream(std::uint64_t key) : state_(key) {}

  constexpr std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform draw in the open interval (0,1); exactly 53 mantissa bits.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

 private:
  std::uint64_t state_;
};

// A seed is a key plus the rule for deriving child keys from labels.
struct Seed {
  std::uint64_t key = 0;

  static constexpr Seed master(std::uint64_t m) { return Seed{m}; }

  [[nodiscard]] constexpr Seed with(std::uint64_t label) const {
    return Seed{mix64(key ^ (label + kGolden))};
  }
  [[nodiscard]] constexpr Seed with(std::string_view label) const {
    return with(fnv1a64(label));
  }

  [[nodiscard]] constexpr Stream stream() const { return Stream(key); }

  friend constexpr bool operator==(Seed a, Seed b) { return a.key == b.key; }
};

}  // namespace riskbandit
