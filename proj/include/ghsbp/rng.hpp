// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <bit>
#include <cstdint>

namespace ghsbp {

// splitmix64 finalizer: a bijective 64-bit mixing function.  Used both to
// expand user seeds into generator state and to derive substream selectors.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Advances a splitmix64 state and returns the next output word.
inline std::uint64_t splitmix64_next(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic 64-bit PRNG: PCG64 (XSL-RR 128/64 variant).
//
// Reproducibility contract:
//   * identical (seed, stream) => bit-identical output sequence, and
//   * substream(k) derives a generator with a distinct odd LCG increment, so
//     parallel lanes get non-overlapping state sequences by construction.
//     The derivation rule is fixed: substream k of (seed, stream) is
//     (seed, mix64(stream ^ (0x9e3779b97f4a7c15 * (k + 1)))).
//
// A stream must be used by exactly one execution context at a time.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {
    std::uint64_t zs = seed;
    const std::uint64_t hi = splitmix64_next(zs);
    const std::uint64_t lo = splitmix64_next(zs);
    std::uint64_t zc = stream ^ 0xda3e39cb94b95bdbULL;
    const std::uint64_t chi = splitmix64_next(zc);
    const std::uint64_t clo = splitmix64_next(zc);
    const u128 initstate = (static_cast<u128>(hi) << 64) | lo;
    const u128 initseq = (static_cast<u128>(chi) << 64) | clo;
    state_ = 0;
    inc_ = (initseq << 1) | 1u;
    advance();
    state_ += initstate;
    advance();
  }

  std::uint64_t next_u64() {
    advance();
    const auto xored = static_cast<std::uint64_t>(state_ >> 64) ^
                       static_cast<std::uint64_t>(state_);
    const auto rot = static_cast<int>(state_ >> 122);
    return std::rotr(xored, rot);
  }

  // Uniform draw strictly inside (0, 1): ((x >> 11) + 0.5) * 2^-53.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Independent substream k (see class comment for the derivation rule).
  RngStream substream(std::uint64_t k) const {
    return RngStream(seed_, mix64(stream_ ^ (0x9e3779b97f4a7c15ULL * (k + 1))));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  using u128 = unsigned __int128;
  static constexpr u128 kMult =
      (static_cast<u128>(2549297995355413924ULL) << 64) | 4865540595714422341ULL;

  void advance() { state_ = state_ * kMult + inc_; }

  u128 state_{};
  u128 inc_{};
  std::uint64_t seed_{};
  std::uint64_t stream_{};
};

}  // namespace ghsbp
