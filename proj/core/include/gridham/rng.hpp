#pragma once

#include <cstdint>

namespace gridham {

// splitmix64: deterministic across platforms, cheap to seed and split.
// Identifier "splitmix64" is recorded in sampler run metadata.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) by rejection; avoids modulo bias and stays portable.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  // Derive an independent stream, for per-worker chains.
  Rng split(std::uint64_t stream) const {
    Rng r(state_ ^ (0x632be59bd9b4e019ULL * (stream + 1)));
    r.next();
    return r;
  }

  static constexpr const char* algorithm() { return "splitmix64"; }

 private:
  std::uint64_t state_;
};

}  // namespace gridham
