// Counter-based random number generation (Philox-4x32-10).
//
// Every draw is a pure function of a 64-bit key and a 128-bit counter, so a
// value is addressed by logical coordinates (e.g. step, pair, slot) instead of
// by call order.  This gives bitwise-identical streams under any parallel
// schedule and lets ensemble realization r use its own stream (seed, r).

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

namespace landau {

// One 10-round Philox-4x32 block: bijective mixing of a 128-bit counter under
// a 64-bit key (Salmon et al. multipliers and Weyl constants).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u, kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u, kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
    ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
           std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

// 64-bit finalizer used to derive stream keys from (seed, stream id).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Map two 32-bit words to one double uniform on (0,1): 52 significant bits
// centered in their cells, so the endpoints are unreachable even after
// rounding (the naive 53-bit ladder rounds its top cell to exactly 1).
inline double u01_from_words(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t u = (std::uint64_t(hi) << 32) | lo;
  return (double(u >> 12) + 0.5) * 0x1.0p-52;
}

// A keyed stream of addressable draws.  normal_pair/uniform consume exactly
// one Philox block at counter (hi, lo); vector fills consume consecutive lo
// values starting at lo_base << 8 (so up to 256 blocks per logical address).
class RngStream {
 public:
  RngStream() : key_{0, 0} {}
  RngStream(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t k = splitmix64(seed ^ splitmix64(stream ^ 0x5851F42D4C957F2Dull));
    key_ = {std::uint32_t(k), std::uint32_t(k >> 32)};
  }

  // Two independent standard normals at counter (hi, lo) via Box-Muller.
  void normal_pair(std::uint64_t hi, std::uint64_t lo, double& n0, double& n1) const {
    const auto w = block(hi, lo);
    const double u1 = u01_from_words(w[0], w[1]);
    const double u2 = u01_from_words(w[2], w[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    n0 = r * std::cos(a);
    n1 = r * std::sin(a);
  }

  // Fill out[0..m) with standard normals addressed by (hi, lo_base); blocks
  // are consumed at lo = (lo_base << 8) + j.  The tail of an odd fill still
  // evaluates the full pair: dropping the unused sine leg is not free, since
  // the libm sincos and standalone cos disagree by an ulp on rare arguments,
  // which would break prefix stability across fill lengths.
  void fill_normals(std::uint64_t hi, std::uint64_t lo_base, std::span<double> out) const {
    const std::uint64_t base = lo_base << 8;
    std::size_t i = 0, j = 0;
    while (i < out.size()) {
      double a, b;
      normal_pair(hi, base + j, a, b);
      out[i++] = a;
      if (i < out.size()) out[i++] = b;
      ++j;
    }
  }

  double uniform(std::uint64_t hi, std::uint64_t lo) const {
    const auto w = block(hi, lo);
    return u01_from_words(w[0], w[1]);
  }

  std::uint64_t raw64(std::uint64_t hi, std::uint64_t lo) const {
    const auto w = block(hi, lo);
    return (std::uint64_t(w[0]) << 32) | w[1];
  }

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t hi, std::uint64_t lo) const {
    return philox4x32({std::uint32_t(lo), std::uint32_t(lo >> 32), std::uint32_t(hi),
                       std::uint32_t(hi >> 32)},
                      key_);
  }

  std::array<std::uint32_t, 2> key_;
};

// Stateful convenience wrapper for inherently sequential consumers (initial
// data sampling, jump-process event chains).  Deterministic given (seed,
// stream); draws advance a private counter.
class SequentialRng {
 public:
  SequentialRng(std::uint64_t seed, std::uint64_t stream) : s_(seed, stream) {}

  double uniform() { return s_.uniform(0, ctr_++); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double a, b;
    s_.normal_pair(1, ctr_++, a, b);
    spare_ = b;
    have_spare_ = true;
    return a;
  }

  // Exponential waiting time with the given rate.
  double exponential(double rate) { return -std::log(uniform()) / rate; }

  // Uniform integer in [0, n) by rejection on the top 64-bit range.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    for (;;) {
      const std::uint64_t u = s_.raw64(2, ctr_++);
      if (u < limit) return u % n;
    }
  }

 private:
  RngStream s_;
  std::uint64_t ctr_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Fixed stream tags so unrelated consumers of the same user seed decorrelate.
namespace stream {
constexpr std::uint64_t kInitialData = 0x11;
constexpr std::uint64_t kPairNoise = 0x22;
constexpr std::uint64_t kKacEvents = 0x33;
constexpr std::uint64_t kMetrics = 0x44;
constexpr std::uint64_t kBootstrap = 0x55;
constexpr std::uint64_t kReference = 0x66;
}  // namespace stream

// Sub-stream for realization r of an ensemble rooted at `base`.
inline std::uint64_t substream(std::uint64_t base, std::uint64_t r) {
  return splitmix64(base ^ (0x9E3779B97F4A7C15ull + r));
}

}  // namespace landau
