#pragma once

#include <cstdint>
#include <initializer_list>

namespace sira {

// Deterministic 64-bit stream (SplitMix64). Independent streams are obtained
// by hashing a root seed together with a list of integer keys, e.g.
// (seed, purpose, round, agent), so results never depend on which thread
// happens to draw first.
class Stream {
 public:
  explicit Stream(std::uint64_t state) : state_(state) {}

  static Stream keyed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Uniform integer on [0, n), unbiased. Requires n > 0.
  std::uint64_t below(std::uint64_t n);

  bool coin() { return (next_u64() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);

// Key namespaces for Stream::keyed so that different consumers of one seed
// never share a stream.
namespace stream_purpose {
inline constexpr std::uint64_t valuation = 1;
inline constexpr std::uint64_t pairing = 2;
inline constexpr std::uint64_t matching = 3;
inline constexpr std::uint64_t equilibrium_opponent = 4;
inline constexpr std::uint64_t deviation = 5;
inline constexpr std::uint64_t product_samples = 6;
inline constexpr std::uint64_t sweep_point = 7;
}  // namespace stream_purpose

}  // namespace sira
