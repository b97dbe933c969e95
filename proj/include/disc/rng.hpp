#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace disc {

struct Seed {
  std::uint64_t value = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Per-trial seed: splitmix64(base ^ splitmix64(index)).
inline Seed derive(Seed base, std::uint64_t index) {
  return Seed{splitmix64(base.value ^ splitmix64(index))};
}

// Portable bounded draws on top of mt19937_64 (no std distributions, so
// streams do not depend on the standard library implementation).
class Rng {
 public:
  explicit Rng(Seed s) : eng_(splitmix64(s.value)) {}

  std::uint64_t next() { return eng_(); }

  // Uniform in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = eng_();
    while (x >= limit);
    return x % bound;
  }

  bool bernoulli(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  // Fisher-Yates on the first k positions only.
  template <class T>
  void partial_shuffle(std::vector<T>& v, std::size_t k) {
    for (std::size_t i = 0; i < k && i + 1 < v.size(); ++i)
      std::swap(v[i], v[i + below(v.size() - i)]);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace disc
