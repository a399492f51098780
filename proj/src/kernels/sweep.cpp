#include "agenda/kernels/sweep.hpp"

#include "agenda/core/error.hpp"
#include "agenda/eval/counts.hpp"

namespace agenda::kernels {

namespace {

void check(const SweepProblem& p) {
  if (p.n_labels == 0 || p.other_index >= p.n_labels) throw ValidationError("sweep: bad label count");
  if (p.scores.size() != p.gold.size() * p.n_labels) throw ValidationError("sweep: scores and gold are not aligned");
}

double objective_at(const SweepProblem& p, double tau) {
  std::vector<eval::ClassCounts> counts(p.n_labels);
  const std::size_t rows = p.gold.size();
  for (std::size_t r = 0; r < rows; ++r) {
    auto predicted = decide_row(p.scores.subspan(r * p.n_labels, p.n_labels), tau, p.other_index);
    eval::accumulate(counts, p.gold[r], predicted);
  }
  return eval::weighted_f1(counts);
}

}  // namespace

std::vector<std::size_t> decide_row(std::span<const double> row, double tau, std::size_t other_index) {
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < row.size(); ++l) {
    if (row[l] >= tau) out.push_back(l);
  }
  if (out.empty()) out.push_back(other_index);
  return out;
}

std::vector<double> sweep_weighted_f1_serial(const SweepProblem& problem, std::span<const double> taus) {
  check(problem);
  std::vector<double> out;
  out.reserve(taus.size());
  for (double tau : taus) out.push_back(objective_at(problem, tau));
  return out;
}

std::vector<double> sweep_weighted_f1(const SweepProblem& problem, std::span<const double> taus) {
  check(problem);
  std::vector<double> out(taus.size());
  const auto n = static_cast<std::ptrdiff_t>(taus.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = objective_at(problem, taus[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace agenda::kernels
