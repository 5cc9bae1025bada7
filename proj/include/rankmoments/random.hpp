#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A stream is
// identified by a 64-bit key and the three upper counter words, so any trial
// block can be regenerated independently of how work is scheduled.

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace rankmoments {

class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  /// Stream (seed; s1, s2, s3): key = seed, counter = {i, s1, s2, s3} for i = 0, 1, ...
  explicit Philox4x32(std::uint64_t seed, std::uint32_t s1 = 0, std::uint32_t s2 = 0, std::uint32_t s3 = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Ten rounds of the bijection on one counter block.
  static counter_type block(counter_type counter, key_type key);

 private:
  key_type key_;
  counter_type counter_;
  counter_type buffer_{};
  unsigned used_ = 4;
};

/// Parses a decimal or 0x-prefixed unsigned 64-bit seed; throws SeedError.
std::uint64_t parse_seed(std::string_view text);

}  // namespace rankmoments
