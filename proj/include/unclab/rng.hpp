#ifndef UNCLAB_RNG_HPP
#define UNCLAB_RNG_HPP

/**
 * Counter-based random source for reproducible, parallel Monte Carlo.
 *
 * The generator is Philox-2x64-10 (Salmon et al., "Parallel random numbers:
 * as easy as 1, 2, 3", SC'11): a 10-round bijective mixing of a 128-bit
 * counter under a 64-bit key. We use
 *
 *   key     = base_seed
 *   counter = (block_index, stream_index)
 *
 * so that a stream is fully identified by (base_seed, stream_index) and
 * distinct stream indices walk disjoint counter lanes. Streams therefore
 * never need sequential seeding: worker k draws from stream k directly,
 * and the sample sequence is identical regardless of thread schedule.
 *
 * split() derives a child stream through one Philox block under a
 * domain-separated key, so child sequences never overlap the parent's
 * output blocks.
 *
 * Header-only; no dependencies beyond <cstdint> and <cmath>.
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "unclab/errors.hpp"

namespace unclab {

namespace detail {

inline constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ull;
inline constexpr std::uint64_t kPhiloxW = 0x9E3779B97F4A7C15ull;  // Weyl increment
inline constexpr std::uint64_t kSplitKeyTag = 0x5851F42D4C957F2Dull;

struct U128 {
  std::uint64_t lo;
  std::uint64_t hi;
};

inline U128 mul_wide(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  return {static_cast<std::uint64_t>(prod), static_cast<std::uint64_t>(prod >> 64)};
}

/// One Philox-2x64-10 block: counter (c0, c1) under key -> two 64-bit words.
inline U128 philox2x64(std::uint64_t c0, std::uint64_t c1, std::uint64_t key) {
  for (int round = 0; round < 10; ++round) {
    const U128 prod = mul_wide(kPhiloxM, c0);
    c0 = prod.hi ^ key ^ c1;
    c1 = prod.lo;
    key += kPhiloxW;
  }
  return {c0, c1};
}

}  // namespace detail

/**
 * A deterministic, splittable stream of random draws.
 *
 * Same (base_seed, stream_index) yields the same sequence on every run and
 * under any thread schedule. A stream must not be shared mutably between
 * workers; split() first and hand each worker its own child.
 */
class RngStream {
 public:
  explicit RngStream(std::uint64_t base_seed, std::uint64_t stream_index = 0)
      : base_seed_(base_seed), stream_index_(stream_index) {}

  std::uint64_t base_seed() const { return base_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  /// Child stream `child` of this stream. O(1); children of distinct
  /// (stream, child) pairs are distinct, and none share the parent's lane.
  RngStream split(std::uint64_t child) const {
    const detail::U128 w =
        detail::philox2x64(child, stream_index_, base_seed_ ^ detail::kSplitKeyTag);
    return RngStream(w.lo, w.hi);
  }

  std::uint64_t next_u64() {
    if (have_buffered_) {
      have_buffered_ = false;
      return buffered_;
    }
    const detail::U128 block = detail::philox2x64(block_index_++, stream_index_, base_seed_);
    buffered_ = block.hi;
    have_buffered_ = true;
    return block.lo;
  }

  /// Uniform draw in [0, 1), 53 random bits.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal draw via the Box-Muller transform
  /// (two uniforms -> two normals; the second is cached).
  double next_normal() {
    if (have_cached_normal_) {
      have_cached_normal_ = false;
      return cached_normal_;
    }
    const double u1 = 1.0 - next_uniform();  // (0, 1]: keeps log() finite
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_normal_ = radius * std::sin(angle);
    have_cached_normal_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t base_seed_;
  std::uint64_t stream_index_;
  std::uint64_t block_index_ = 0;
  std::uint64_t buffered_ = 0;
  bool have_buffered_ = false;
  double cached_normal_ = 0.0;
  bool have_cached_normal_ = false;
};

/// n i.i.d. N(0,1) draws. Pure in the stream argument: passing the same
/// stream twice reproduces the same vector.
inline std::vector<double> sample_std_normal(RngStream stream, std::size_t n) {
  if (n < 1) throw validation_error("sample_std_normal: n must be >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = stream.next_normal();
  return out;
}

}  // namespace unclab

#endif  // UNCLAB_RNG_HPP
