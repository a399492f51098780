#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace agenda::eval {

/// Per-class incidence counts over (example, label) pairs.
struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t support() const noexcept { return tp + fn; }
  bool operator==(const ClassCounts&) const = default;
};

// Any 0/0 below evaluates to 0.
double precision(const ClassCounts& c) noexcept;
double recall(const ClassCounts& c) noexcept;
double f1(const ClassCounts& c) noexcept;

/// Sum over classes of (support_c / total support) * F1_c; 0 when there is no support.
double weighted_f1(std::span<const ClassCounts> counts) noexcept;

/// Adds one example's incidences. Both sets are sorted label indices.
void accumulate(std::span<ClassCounts> counts, std::span<const std::size_t> gold, std::span<const std::size_t> predicted);

}  // namespace agenda::eval
