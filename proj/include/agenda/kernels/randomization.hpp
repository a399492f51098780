#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "agenda/eval/counts.hpp"

namespace agenda::kernels {

/// Two systems' predictions on shared gold, reduced to what a swap can change.
/// Swapping example e moves swap_delta[e] from B's totals into A's (and the
/// negation into B's). Examples where both systems agree have no effect and are
/// dropped at construction.
class PairedOutcomes {
 public:
  PairedOutcomes(std::size_t n_labels, std::span<const std::vector<std::size_t>> gold,
                 std::span<const std::vector<std::size_t>> predicted_a,
                 std::span<const std::vector<std::size_t>> predicted_b);

  std::size_t n_labels() const noexcept { return n_labels_; }
  std::size_t n_examples() const noexcept { return n_examples_; }
  std::size_t n_differing() const noexcept { return n_differing_; }

  /// |wF1(A) - wF1(B)| after swapping the differing examples selected by `swap`
  /// (one flag per differing example, in example order).
  double delta(std::span<const char> swap) const;

  double observed_delta() const;

 private:
  std::size_t n_labels_;
  std::size_t n_examples_;
  std::size_t n_differing_ = 0;
  std::vector<eval::ClassCounts> base_a_;
  std::vector<eval::ClassCounts> base_b_;
  // n_differing x n_labels x {tp, fp, fn}, signed change to A when swapped.
  std::vector<std::array<long long, 3>> swap_delta_;
};

/// Number of iterations whose permuted delta >= observed - 1e-12. Iteration i
/// draws its coins from Rng(mix_seed(seed, i)). Serial reference.
std::size_t randomization_exceedances_serial(const PairedOutcomes& outcomes, std::size_t iterations, std::uint64_t seed);

/// OpenMP over iterations; identical count to the serial reference.
std::size_t randomization_exceedances(const PairedOutcomes& outcomes, std::size_t iterations, std::uint64_t seed);

}  // namespace agenda::kernels
