#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sdelab {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Immutable key of a counter-based random stream. Draw `i` of a stream is a
/// pure function of (seed, stream_id, i), so any partition of work over
/// threads reproduces the same numbers.
class RngStream {
 public:
  constexpr RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Child stream keyed by `child`; distinct children of one parent and the
  /// parent itself are disjoint streams.
  RngStream split(std::uint64_t child) const noexcept;

  /// 128 random bits for counter value `block`.
  std::array<std::uint64_t, 2> block(std::uint64_t block) const noexcept;

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

/// Sequential reader over an RngStream. Satisfies UniformRandomBitGenerator.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  explicit CounterEngine(RngStream stream) noexcept : stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  /// Standard normal (Box-Muller).
  double normal() noexcept;
  /// Standard exponential.
  double exponential() noexcept;

  const RngStream& stream() const noexcept { return stream_; }
  std::uint64_t words_consumed() const noexcept { return 2 * block_ - (have_second_word_ ? 1 : 0); }

 private:
  RngStream stream_;
  std::uint64_t block_ = 0;
  std::uint64_t second_word_ = 0;
  bool have_second_word_ = false;
  double spare_normal_ = 0.0;
  bool have_spare_normal_ = false;
};

}  // namespace sdelab
