#pragma once

#include <array>
#include <cstdint>

namespace gibbs1d {

/// Philox 4x32-10 counter-based generator. A stream is identified by
/// (seed, stream_id); draws depend only on that pair and the draw counter, so
/// per-run streams are reproducible independently of scheduling order.
class PhiloxRng {
 public:
  PhiloxRng(uint64_t seed, uint64_t stream_id) {
    key_[0] = static_cast<uint32_t>(seed);
    key_[1] = static_cast<uint32_t>(seed >> 32);
    counter_[2] = static_cast<uint32_t>(stream_id);
    counter_[3] = static_cast<uint32_t>(stream_id >> 32);
  }

  uint32_t next_u32() {
    if (buffered_ == 0) refill();
    return buffer_[--buffered_];
  }

  uint64_t next_u64() {
    uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Sample an index from a nonnegative weight vector summing to ~1.
  /// Residual mass from rounding goes to the last positive entry.
  template <typename Vec>
  int sample_index(const Vec& probs) {
    double u = next_double();
    double acc = 0.0;
    int last_positive = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] > 0.0) last_positive = i;
      acc += probs[i];
      if (u < acc) return i;
    }
    return last_positive;
  }

 private:
  static constexpr uint32_t kW32A = 0x9E3779B9u;
  static constexpr uint32_t kW32B = 0xBB67AE85u;
  static constexpr uint32_t kM4x32A = 0xD2511F53u;
  static constexpr uint32_t kM4x32B = 0xCD9E8D57u;

  static void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
  }

  void refill() {
    std::array<uint32_t, 4> ctr = counter_;
    std::array<uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      uint32_t hi0, lo0, hi1, lo1;
      mulhilo(kM4x32A, ctr[0], hi0, lo0);
      mulhilo(kM4x32B, ctr[2], hi1, lo1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kW32A;
      key[1] += kW32B;
    }
    buffer_ = ctr;
    buffered_ = 4;
    if (++counter_[0] == 0) ++counter_[1];  // 64-bit block counter in words 0..1
  }

  std::array<uint32_t, 2> key_{0, 0};
  std::array<uint32_t, 4> counter_{0, 0, 0, 0};
  std::array<uint32_t, 4> buffer_{0, 0, 0, 0};
  int buffered_ = 0;
};

}  // namespace gibbs1d
