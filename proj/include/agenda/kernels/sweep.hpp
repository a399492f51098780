#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace agenda::kernels {

/// {l : row[l] >= tau}, or {other_index} when that is empty. Sorted indices.
std::vector<std::size_t> decide_row(std::span<const double> row, double tau, std::size_t other_index);

struct SweepProblem {
  std::size_t n_labels = 0;
  std::size_t other_index = 0;
  std::span<const double> scores;                  // rows x n_labels, row-major
  std::span<const std::vector<std::size_t>> gold;  // sorted label indices per row
};

/// Weighted F1 of decide_row at every tau. Serial reference.
std::vector<double> sweep_weighted_f1_serial(const SweepProblem& problem, std::span<const double> taus);

/// Same, OpenMP over the grid.
std::vector<double> sweep_weighted_f1(const SweepProblem& problem, std::span<const double> taus);

}  // namespace agenda::kernels
