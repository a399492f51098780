#include <gtest/gtest.h>

#include <random>

#include "agenda/core/error.hpp"
#include "agenda/kernels/randomization.hpp"
#include "agenda/kernels/similarity.hpp"
#include "agenda/kernels/sweep.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace agenda;
using namespace agenda::kernels;

namespace {

std::vector<backends::EmbeddingVector> random_vectors(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<float> d;
  std::vector<backends::EmbeddingVector> out(n);
  for (auto& v : out) {
    v.values.resize(dim);
    for (auto& x : v.values) x = d(rng);
  }
  return out;
}

struct RandomProblem {
  std::size_t n_labels = 4;
  std::vector<double> scores;
  std::vector<std::vector<std::size_t>> gold;
  oracle::Sets gold_sets;
};

RandomProblem random_problem(std::uint64_t seed, std::size_t rows) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  RandomProblem p;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t l = 0; l < p.n_labels; ++l) p.scores.push_back(std::round(u(rng) * 100) / 100);
    auto g = fixture::random_set(rng, p.n_labels, 2);
    p.gold.push_back(fixture::as_vector(g));
    p.gold_sets.push_back(g);
  }
  return p;
}

}  // namespace

TEST(Cosine, KnownValues) {
  std::vector<float> a{1, 0}, b{0, 1}, c{2, 0}, d{-1, 0};
  EXPECT_DOUBLE_EQ(cosine(a, b), 0.0);
  EXPECT_DOUBLE_EQ(cosine(a, c), 1.0);
  EXPECT_DOUBLE_EQ(cosine(a, d), -1.0);
  std::vector<float> z{0, 0}, e{1, 2, 3};
  EXPECT_THROW(cosine(a, z), ValidationError);
  EXPECT_THROW(cosine(a, e), ValidationError);
}

TEST(Cosine, ParallelMatchesSerial) {
  std::mt19937_64 rng(3);
  const auto rows = random_vectors(rng, 257, 16);
  const auto anchors = random_vectors(rng, 12, 16);
  std::vector<std::size_t> group(rows.size());
  for (std::size_t i = 0; i < group.size(); ++i) group[i] = i % 2;
  GroupedAnchors ga{anchors, group, 6};
  const auto serial = cosine_matrix_serial(rows, ga);
  EXPECT_EQ(cosine_matrix(rows, ga), serial);
  EXPECT_DOUBLE_EQ(serial.at(3, 2), cosine(rows[3], anchors[6 + 2]));
}

TEST(DecideRow, ThresholdIsInclusiveAndFallsBack) {
  std::vector<double> row{0.5, 0.49, 0.7, 0.1};
  EXPECT_EQ(decide_row(row, 0.5, 3), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(decide_row(row, 0.71, 3), (std::vector<std::size_t>{3}));
}

TEST(Sweep, MatchesOracleAndSerial) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto p = random_problem(seed, 60);
    SweepProblem sp{p.n_labels, 3, p.scores, p.gold};
    std::vector<double> taus;
    for (int k = 30; k <= 99; ++k) taus.push_back(k / 100.0);
    const auto par = sweep_weighted_f1(sp, taus);
    EXPECT_EQ(par, sweep_weighted_f1_serial(sp, taus));
    for (std::size_t t = 0; t < taus.size(); ++t) {
      oracle::Sets pred;
      for (std::size_t r = 0; r < p.gold.size(); ++r) {
        std::vector<double> row(p.scores.begin() + r * 4, p.scores.begin() + r * 4 + 4);
        auto d = oracle::decide(row, taus[t], 3);
        pred.emplace_back(d.begin(), d.end());
      }
      EXPECT_NEAR(par[t], oracle::weighted_f1(4, p.gold_sets, pred), 1e-12);
    }
  }
}

TEST(Randomization, ParallelMatchesSerial) {
  auto p = random_problem(1, 80);
  std::mt19937_64 rng(5);
  std::vector<std::vector<std::size_t>> a, b;
  for (std::size_t i = 0; i < 80; ++i) {
    a.push_back(fixture::as_vector(fixture::random_set(rng, 4, 2)));
    b.push_back(fixture::as_vector(fixture::random_set(rng, 4, 2)));
  }
  PairedOutcomes po(4, p.gold, a, b);
  EXPECT_EQ(randomization_exceedances(po, 2000, 17), randomization_exceedances_serial(po, 2000, 17));
}

TEST(Randomization, DeltaMatchesOracleForEverySwapPattern) {
  std::mt19937_64 rng(9);
  oracle::Sets g, a, b;
  std::vector<std::vector<std::size_t>> gv, av, bv;
  for (int i = 0; i < 6; ++i) {
    g.push_back(fixture::random_set(rng, 3, 2));
    a.push_back(fixture::random_set(rng, 3, 2));
    b.push_back(i == 2 ? a.back() : fixture::random_set(rng, 3, 2));
    gv.push_back(fixture::as_vector(g.back()));
    av.push_back(fixture::as_vector(a.back()));
    bv.push_back(fixture::as_vector(b.back()));
  }
  PairedOutcomes po(3, gv, av, bv);
  EXPECT_LE(po.n_differing(), 5u);
  EXPECT_NEAR(po.observed_delta(), std::fabs(oracle::weighted_f1(3, g, a) - oracle::weighted_f1(3, g, b)), 1e-12);

  std::vector<std::size_t> differing;
  for (std::size_t i = 0; i < 6; ++i) {
    if (a[i] != b[i]) differing.push_back(i);
  }
  ASSERT_EQ(differing.size(), po.n_differing());
  for (std::size_t mask = 0; mask < (1u << differing.size()); ++mask) {
    std::vector<char> swap(differing.size());
    auto sa = a, sb = b;
    for (std::size_t k = 0; k < differing.size(); ++k) {
      swap[k] = (mask >> k) & 1;
      if (swap[k]) std::swap(sa[differing[k]], sb[differing[k]]);
    }
    EXPECT_NEAR(po.delta(swap), std::fabs(oracle::weighted_f1(3, g, sa) - oracle::weighted_f1(3, g, sb)), 1e-12);
  }
}
