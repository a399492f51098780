// Serial reference vs OpenMP kernel timings. Each pair is also checked for
// identical output; a mismatch exits non-zero.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>

#include "agenda/kernels/randomization.hpp"
#include "agenda/kernels/similarity.hpp"
#include "agenda/kernels/sweep.hpp"

using namespace agenda;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool same) {
  std::printf("%-16s serial %9.2f ms  parallel %9.2f ms  speedup %5.2fx  %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, same ? "identical" : "MISMATCH");
}

std::vector<std::vector<std::size_t>> random_sets(std::mt19937_64& rng, std::size_t n, std::size_t labels) {
  std::vector<std::vector<std::size_t>> out(n);
  for (auto& s : out) {
    for (std::size_t l = 0; l < labels; ++l) {
      if (rng() % 4 == 0) s.push_back(l);
    }
    if (s.empty()) s.push_back(labels - 1);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const double scale = argc > 1 ? std::atof(argv[1]) : 1.0;
  const int reps = 3;
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
  std::mt19937_64 rng(1);
  bool all_same = true;

  {
    const auto n = static_cast<std::size_t>(20000 * scale);
    const std::size_t dim = 384, labels = 6;
    std::normal_distribution<float> d;
    std::vector<backends::EmbeddingVector> rows(n), anchors(2 * labels);
    for (auto& v : rows) {
      v.values.resize(dim);
      for (auto& x : v.values) x = d(rng);
    }
    for (auto& v : anchors) {
      v.values.resize(dim);
      for (auto& x : v.values) x = d(rng);
    }
    std::vector<std::size_t> group(n);
    for (std::size_t i = 0; i < n; ++i) group[i] = i % 2;
    kernels::GroupedAnchors ga{anchors, group, labels};
    kernels::DenseMatrix a, b;
    const double s = best_of(reps, [&] { a = kernels::cosine_matrix_serial(rows, ga); });
    const double p = best_of(reps, [&] { b = kernels::cosine_matrix(rows, ga); });
    report("cosine_matrix", s, p, a == b);
    all_same = all_same && a == b;
  }

  {
    const auto n = static_cast<std::size_t>(5000 * scale);
    const std::size_t labels = 6;
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> scores(n * labels);
    for (auto& x : scores) x = u(rng);
    const auto gold = random_sets(rng, n, labels);
    std::vector<double> taus;
    for (int k = 0; k <= 690; ++k) taus.push_back(0.30 + k * 0.001);
    kernels::SweepProblem problem{labels, labels - 1, scores, gold};
    std::vector<double> a, b;
    const double s = best_of(reps, [&] { a = kernels::sweep_weighted_f1_serial(problem, taus); });
    const double p = best_of(reps, [&] { b = kernels::sweep_weighted_f1(problem, taus); });
    report("threshold_sweep", s, p, a == b);
    all_same = all_same && a == b;
  }

  {
    const auto n = static_cast<std::size_t>(2000 * scale);
    const std::size_t labels = 6;
    const auto gold = random_sets(rng, n, labels);
    const auto pa = random_sets(rng, n, labels);
    const auto pb = random_sets(rng, n, labels);
    kernels::PairedOutcomes outcomes(labels, gold, pa, pb);
    std::size_t a = 0, b = 0;
    const double s = best_of(reps, [&] { a = kernels::randomization_exceedances_serial(outcomes, 10000, 7); });
    const double p = best_of(reps, [&] { b = kernels::randomization_exceedances(outcomes, 10000, 7); });
    report("randomization", s, p, a == b);
    all_same = all_same && a == b;
  }
  return all_same ? 0 : 1;
}
