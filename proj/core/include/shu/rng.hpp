#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace shu::rng {

// Philox4x32-10: a counter-based keyed block function. Each (counter, key)
// pair maps to four statistically independent 32-bit words, so streams are
// reproducible and parallelizable without shared state.
inline std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr,
                                          std::array<uint32_t, 2> key) {
  constexpr uint32_t kMul0 = 0xD2511F53u, kMul1 = 0xCD9E8D57u;
  constexpr uint32_t kWeyl0 = 0x9E3779B9u, kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const uint64_t p0 = static_cast<uint64_t>(kMul0) * ctr[0];
    const uint64_t p1 = static_cast<uint64_t>(kMul1) * ctr[2];
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

/// One logical random stream: the master seed is the Philox key, the stream
/// id occupies the upper half of the 128-bit counter, and blocks are drawn
/// by incrementing the lower half. Distinct (seed, stream id) pairs yield
/// independent streams regardless of how much either stream is consumed.
class Stream {
 public:
  Stream(uint64_t seed, uint64_t stream_id)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
        hi_{static_cast<uint32_t>(stream_id), static_cast<uint32_t>(stream_id >> 32)},
        counter_(0),
        index_(4) {}

  uint32_t next_u32() {
    if (index_ == 4) {
      buffer_ = philox4x32({static_cast<uint32_t>(counter_),
                            static_cast<uint32_t>(counter_ >> 32), hi_[0], hi_[1]},
                           key_);
      ++counter_;
      index_ = 0;
    }
    return buffer_[index_++];
  }

  uint64_t next_u64() {
    const uint64_t lo = next_u32();
    const uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform on the open interval (0,1): 53-bit grid centers.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  /// Exponential with mean 1.
  double exponential() { return -std::log(next_unit()); }

  /// Standard normal (Box-Muller; consumes exactly two uniforms).
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(next_unit()));
    const double theta = 6.283185307179586476925286766559 * next_unit();
    return r * std::cos(theta);
  }

  /// Unbiased uniform draw from {0, ..., n-1}.
  uint64_t below(uint64_t n) {
    const uint64_t limit = n * ((~uint64_t{0}) / n);
    uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 2> hi_;
  uint64_t counter_;
  std::array<uint32_t, 4> buffer_{};
  int index_;
};

/// Module tags keep streams from unrelated experiments disjoint.
enum class Tag : uint64_t {
  urn = 1,
  exact = 2,
  renewal = 3,
  embed = 4,
  perc = 5,
  lamperti = 6,
  quadrant = 7,
  cli = 8,
  verify = 9,
  test = 10,
};

/// Stream ids place the module tag in the top 16 bits and the replica index
/// in the low 48, so a replica's stream never depends on the replica count.
inline uint64_t derive_stream_id(Tag tag, uint64_t replica_index) {
  return (static_cast<uint64_t>(tag) << 48) | (replica_index & 0xFFFFFFFFFFFFull);
}

inline Stream make_stream(uint64_t master_seed, Tag tag, uint64_t replica_index) {
  return Stream(master_seed, derive_stream_id(tag, replica_index));
}

/// Stateless per-vertex draw: a pure function of (seed, x, y, winding).
/// Used by the percolation edge store so concurrent queries need no locks.
inline double vertex_unit(uint64_t seed, int64_t x, int64_t y, int64_t winding) {
  const auto block = philox4x32({static_cast<uint32_t>(x), static_cast<uint32_t>(y),
                                 static_cast<uint32_t>(winding), 0x50455243u},
                                {static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)});
  const uint64_t bits = (static_cast<uint64_t>(block[1]) << 32) | block[0];
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

}  // namespace shu::rng
