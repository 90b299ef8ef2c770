#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace consensus {

/// Seeded RNG with hand-rolled integer mappings. std::mt19937_64 output is
/// pinned by the standard, while the std distributions are not, so scenario
/// generation stays bit-identical across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on [lo, hi], inclusive, via rejection sampling.
  int uniform_int(int lo, int hi) {
    if (lo >= hi) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return lo + static_cast<int>(v % span);
  }

  /// True with probability permille/1000.
  bool chance_permille(int permille) { return uniform_int(0, 999) < permille; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      std::swap(v[static_cast<std::size_t>(i)],
                v[static_cast<std::size_t>(uniform_int(0, i))]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace consensus
