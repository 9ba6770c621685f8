#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cfqdep {

// Seeded RNG with fully specified derived draws. std::mt19937_64 raw output
// is pinned by the standard; the bounded and unit draws below avoid
// std::uniform_int_distribution / std::shuffle, whose algorithms are
// implementation-defined, so identical seeds give identical streams on
// every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  // Unbiased draw in [0, n) via rejection.
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cfqdep
