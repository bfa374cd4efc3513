#pragma once

#include <array>
#include <cstdint>

namespace harnack {

/// Philox4x32-10 block: maps (counter, key) to four 32-bit words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer, used to derive independent sub-seeds from a base
/// seed and a tag.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

/// A reproducible random stream keyed by (seed, stream_id). Draw i of a
/// stream is a pure function of (seed, stream_id, i), so replicates can run
/// on any worker in any order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller on two uniforms).
  double normal();
  /// Poisson(mean) by CDF inversion; large means are split into chunks.
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t next_u64();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace harnack
