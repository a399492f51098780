#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace agenda {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives an independent stream seed from (seed, stream). Used wherever work is
/// split per item so that results do not depend on evaluation order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL) noexcept;

/// Maps 64 random bits onto [0, 1).
double unit_interval(std::uint64_t bits) noexcept;

/// Seeded generator with platform-independent derived draws. std::mt19937_64 output
/// is fixed by the standard; the distributions in <random> are not, so draws are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  double uniform01() { return unit_interval(next()); }

  bool coin() { return (next() >> 63) != 0; }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k);

}  // namespace agenda
