#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace def {

// Seeded random source used throughout the pipeline. mt19937_64 output is
// bit-specified by the standard and the scaling below is explicit, so streams
// are reproducible across platforms and compilers (the std distributions are
// not, which is why we avoid them).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1); rejects the (measure ~2^-53) exact zero so that strict
  // inequality encodings stay strict.
  double open_unit() {
    double u;
    do {
      u = unit();
    } while (u == 0.0);
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  bool bernoulli(double p) { return unit() < p; }

  // Uniform index in [0, n). Modulo bias is ~2^-64 per draw; irrelevant here.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(gen_() % static_cast<std::uint64_t>(n));
  }

 private:
  std::mt19937_64 gen_;
};

// FNV-1a accumulator for deriving per-(run, group) seeds that do not depend
// on container iteration order.
class SeedHash {
 public:
  SeedHash& mix(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (i * 8)) & 0xffu;
      h_ *= 1099511628211ULL;
    }
    return *this;
  }

  SeedHash& mix(std::string_view s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 1099511628211ULL;
    }
    return *this;
  }

  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 1469598103934665603ULL;
};

}  // namespace def
