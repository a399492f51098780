#include "agenda/kernels/randomization.hpp"

#include <cmath>

#include "agenda/core/error.hpp"
#include "agenda/core/rng.hpp"

namespace agenda::kernels {

namespace {

constexpr double kTieTolerance = 1e-12;

double weighted_f1_signed(std::span<const eval::ClassCounts> base, std::span<const std::array<long long, 3>> shift) {
  std::vector<eval::ClassCounts> counts(base.size());
  for (std::size_t c = 0; c < base.size(); ++c) {
    counts[c].tp = static_cast<std::size_t>(static_cast<long long>(base[c].tp) + shift[c][0]);
    counts[c].fp = static_cast<std::size_t>(static_cast<long long>(base[c].fp) + shift[c][1]);
    counts[c].fn = static_cast<std::size_t>(static_cast<long long>(base[c].fn) + shift[c][2]);
  }
  return eval::weighted_f1(counts);
}

bool run_iteration(const PairedOutcomes& outcomes, std::uint64_t seed, std::size_t iteration, double observed,
                   std::vector<char>& swap) {
  Rng rng(mix_seed(seed, iteration));
  for (auto& flag : swap) flag = rng.coin() ? 1 : 0;
  return outcomes.delta(swap) >= observed - kTieTolerance;
}

}  // namespace

PairedOutcomes::PairedOutcomes(std::size_t n_labels, std::span<const std::vector<std::size_t>> gold,
                               std::span<const std::vector<std::size_t>> predicted_a,
                               std::span<const std::vector<std::size_t>> predicted_b)
    : n_labels_(n_labels), n_examples_(gold.size()), base_a_(n_labels), base_b_(n_labels) {
  if (predicted_a.size() != gold.size() || predicted_b.size() != gold.size()) {
    throw ValidationError("significance: prediction sets are not aligned with gold");
  }
  std::vector<eval::ClassCounts> a_e(n_labels);
  std::vector<eval::ClassCounts> b_e(n_labels);
  for (std::size_t e = 0; e < gold.size(); ++e) {
    eval::accumulate(base_a_, gold[e], predicted_a[e]);
    eval::accumulate(base_b_, gold[e], predicted_b[e]);
    if (predicted_a[e] == predicted_b[e]) continue;
    std::fill(a_e.begin(), a_e.end(), eval::ClassCounts{});
    std::fill(b_e.begin(), b_e.end(), eval::ClassCounts{});
    eval::accumulate(a_e, gold[e], predicted_a[e]);
    eval::accumulate(b_e, gold[e], predicted_b[e]);
    for (std::size_t c = 0; c < n_labels; ++c) {
      swap_delta_.push_back({static_cast<long long>(b_e[c].tp) - static_cast<long long>(a_e[c].tp),
                             static_cast<long long>(b_e[c].fp) - static_cast<long long>(a_e[c].fp),
                             static_cast<long long>(b_e[c].fn) - static_cast<long long>(a_e[c].fn)});
    }
    ++n_differing_;
  }
}

double PairedOutcomes::delta(std::span<const char> swap) const {
  std::vector<std::array<long long, 3>> shift_a(n_labels_, {0, 0, 0});
  for (std::size_t k = 0; k < n_differing_; ++k) {
    if (!swap[k]) continue;
    for (std::size_t c = 0; c < n_labels_; ++c) {
      for (int f = 0; f < 3; ++f) shift_a[c][f] += swap_delta_[k * n_labels_ + c][f];
    }
  }
  std::vector<std::array<long long, 3>> shift_b(n_labels_);
  for (std::size_t c = 0; c < n_labels_; ++c) {
    for (int f = 0; f < 3; ++f) shift_b[c][f] = -shift_a[c][f];
  }
  return std::fabs(weighted_f1_signed(base_a_, shift_a) - weighted_f1_signed(base_b_, shift_b));
}

double PairedOutcomes::observed_delta() const {
  std::vector<char> none(n_differing_, 0);
  return delta(none);
}

std::size_t randomization_exceedances_serial(const PairedOutcomes& outcomes, std::size_t iterations, std::uint64_t seed) {
  const double observed = outcomes.observed_delta();
  std::vector<char> swap(outcomes.n_differing());
  std::size_t count = 0;
  for (std::size_t i = 0; i < iterations; ++i) {
    if (run_iteration(outcomes, seed, i, observed, swap)) ++count;
  }
  return count;
}

std::size_t randomization_exceedances(const PairedOutcomes& outcomes, std::size_t iterations, std::uint64_t seed) {
  const double observed = outcomes.observed_delta();
  const auto n = static_cast<std::ptrdiff_t>(iterations);
  std::size_t count = 0;
#pragma omp parallel reduction(+ : count)
  {
    std::vector<char> swap(outcomes.n_differing());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (run_iteration(outcomes, seed, static_cast<std::size_t>(i), observed, swap)) ++count;
    }
  }
  return count;
}

}  // namespace agenda::kernels
