#pragma once

#include <cstdint>

namespace rvlab {

/// Counter-based random stream.
///
/// Output k of stream (seed, stream_id) is a bijective 64-bit mix of
/// key(seed, stream_id) + k * golden_gamma, so any stream can be
/// reconstructed from its two identifiers and streams never need to be
/// coordinated across threads. Normals come from Box-Muller on pairs of
/// uniforms; the second variate of each pair is cached.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  double normal() noexcept;

  /// Child stream for work item `index`. For a base stream with stream_id 0
  /// this is exactly RngStream(seed, index).
  RngStream substream(std::uint64_t index) const;

  friend bool operator==(const RngStream& a, const RngStream& b) noexcept {
    return a.seed_ == b.seed_ && a.stream_id_ == b.stream_id_ &&
           a.counter_ == b.counter_ && a.has_cached_ == b.has_cached_;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace rvlab
