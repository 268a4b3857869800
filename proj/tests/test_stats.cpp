#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "irtpart/prng.hpp"
#include "irtpart/stats.hpp"

using namespace irtpart;

namespace {

// Independent rank oracle: average ranks by explicit counting rather than
// sorting, plus the tie correction term, then the textbook formula.
double friedman_oracle(const ScoreTable& t, double* p_out = nullptr) {
  const std::size_t n = t.n_blocks(), k = t.n_treatments();
  std::vector<double> rank_sum(k, 0.0);
  double tie_term = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t j = 0; j < k; ++j) {
      double below = 0, equal = 0;
      for (std::size_t l = 0; l < k; ++l) {
        if (t.at(b, l) < t.at(b, j)) ++below;
        if (t.at(b, l) == t.at(b, j)) ++equal;
      }
      rank_sum[j] += below + (equal + 1.0) / 2.0;
    }
    // tie groups in this block
    std::vector<double> vals;
    for (std::size_t j = 0; j < k; ++j) vals.push_back(t.at(b, j));
    std::sort(vals.begin(), vals.end());
    for (std::size_t j = 0; j < k;) {
      std::size_t run = 1;
      while (j + run < k && vals[j + run] == vals[j]) ++run;
      tie_term += double(run) * run * run - double(run);
      j += run;
    }
  }
  const double kk = double(k), nn = double(n);
  double numer = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double d = rank_sum[j] - nn * (kk + 1) / 2.0;
    numer += d * d;
  }
  const double denom = nn * kk * (kk + 1) - tie_term / (kk - 1);
  const double stat = denom <= 0.0 ? 0.0 : 12.0 * numer / denom;
  if (p_out) *p_out = denom <= 0.0 ? 1.0 : chi2_sf(stat, double(k - 1));
  return stat;
}

ScoreTable perfect_ordering_table() {
  // 4 blocks, 3 treatments, treatment j always ranks j+1
  ScoreTable t;
  t.blocks = {"b0", "b1", "b2", "b3"};
  t.treatments = {"t0", "t1", "t2"};
  t.scores = {3.0, 2.0, 1.0,  //
              30,  20,  10,   //
              0.9, 0.5, 0.1,  //
              6.0, 5.0, 4.0};
  return t;
}

}  // namespace

TEST_CASE("chi-square tail matches reference values", "[stats]") {
  CHECK(chi2_sf(8.0, 2) == Catch::Approx(0.018315638888734182).epsilon(1e-10));
  CHECK(chi2_sf(3.5, 11) == Catch::Approx(0.9823351040414255).epsilon(1e-10));
  CHECK(chi2_sf(25.0, 11) == Catch::Approx(0.009116681125526997).epsilon(1e-10));
  CHECK(chi2_sf(0.0, 3) == 1.0);
}

TEST_CASE("studentized range tail matches reference values", "[stats]") {
  CHECK(studentized_range_sf(3.314, 3) == Catch::Approx(0.05004414040611005).margin(1e-8));
  CHECK(studentized_range_sf(4.0, 3) == Catch::Approx(0.012987661373194292).margin(1e-8));
  CHECK(studentized_range_sf(2.0, 3) == Catch::Approx(0.33349932504015).margin(1e-8));
  CHECK(studentized_range_sf(3.0, 2) == Catch::Approx(0.03389485352468935).margin(1e-8));
  CHECK(studentized_range_sf(1.0, 4) == Catch::Approx(0.8943255121281808).margin(1e-8));
  CHECK(studentized_range_sf(2.5, 12) == Catch::Approx(0.8356614888280849).margin(1e-8));
  CHECK(studentized_range_sf(5.0, 12) == Catch::Approx(0.020859496488337848).margin(1e-8));
  CHECK(studentized_range_sf(3.0, 6) == Catch::Approx(0.27609937930951).margin(1e-8));
}

TEST_CASE("k=2 studentized range reduces to a z test", "[stats]") {
  for (double q : {0.5, 1.0, 2.0, 3.0, 4.5}) {
    const double expect = 2.0 * (1.0 - detail::normal_cdf(q / std::sqrt(2.0)));
    CHECK(studentized_range_sf(q, 2) == Catch::Approx(expect).margin(1e-6));
  }
}

TEST_CASE("studentized range edge behavior", "[stats]") {
  CHECK(studentized_range_sf(0.0, 5) == 1.0);
  CHECK(studentized_range_sf(-1.0, 5) == 1.0);
  CHECK(studentized_range_sf(50.0, 3) == Catch::Approx(0.0).margin(1e-12));
  CHECK_THROWS(studentized_range_sf(1.0, 1));
}

TEST_CASE("friedman on the perfect-ordering example", "[stats]") {
  const auto res = friedman(perfect_ordering_table());
  CHECK(res.statistic == Catch::Approx(8.0).margin(1e-12));
  CHECK(res.p_value == Catch::Approx(0.018315638888734182).margin(1e-9));
  REQUIRE(res.mean_ranks.size() == 3);
  CHECK(res.mean_ranks[0] == Catch::Approx(3.0));
  CHECK(res.mean_ranks[1] == Catch::Approx(2.0));
  CHECK(res.mean_ranks[2] == Catch::Approx(1.0));
}

TEST_CASE("friedman agrees with the counting oracle on random tables", "[stats]") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    ScoreTable t;
    const std::size_t n = 2 + rng.next_below(8);
    const std::size_t k = 2 + rng.next_below(6);
    for (std::size_t b = 0; b < n; ++b) t.blocks.push_back("b" + std::to_string(b));
    for (std::size_t j = 0; j < k; ++j) t.treatments.push_back("t" + std::to_string(j));
    t.scores.resize(n * k);
    for (auto& s : t.scores) {
      // quantized scores force plenty of ties
      s = double(rng.next_below(trial % 3 == 0 ? 3 : 20)) / 4.0;
    }
    double p_oracle = 0.0;
    const double stat_oracle = friedman_oracle(t, &p_oracle);
    const auto res = friedman(t);
    INFO("trial " << trial << " n=" << n << " k=" << k);
    CHECK(res.statistic == Catch::Approx(stat_oracle).margin(1e-10));
    CHECK(res.p_value == Catch::Approx(p_oracle).margin(1e-10));
  }
}

TEST_CASE("all-tied table degrades to statistic 0 and p 1", "[stats]") {
  ScoreTable t;
  t.blocks = {"a", "b"};
  t.treatments = {"x", "y", "z"};
  t.scores = {1, 1, 1, 2, 2, 2};
  const auto res = friedman(t);
  CHECK(res.statistic == 0.0);
  CHECK(res.p_value == 1.0);
}

TEST_CASE("ranks are invariant under per-block monotone transforms", "[stats]") {
  auto t = perfect_ordering_table();
  const auto base = friedman(t);
  // exponentiate one block, scale another: order within blocks unchanged
  for (std::size_t j = 0; j < 3; ++j) t.scores[0 * 3 + j] = std::exp(t.scores[0 * 3 + j]);
  for (std::size_t j = 0; j < 3; ++j) t.scores[2 * 3 + j] *= 100.0;
  const auto res = friedman(t);
  CHECK(res.statistic == base.statistic);
  CHECK(res.p_value == base.p_value);
  CHECK(res.mean_ranks == base.mean_ranks);
}

TEST_CASE("nemenyi matrix is symmetric with unit diagonal", "[stats]") {
  const auto t = perfect_ordering_table();
  const auto p = nemenyi(t);
  REQUIRE(p.size() == 9);
  for (int i = 0; i < 3; ++i) {
    CHECK(p[std::size_t(i * 3 + i)] == 1.0);
    for (int j = 0; j < 3; ++j) CHECK(p[std::size_t(i * 3 + j)] == p[std::size_t(j * 3 + i)]);
  }
  // larger rank gap, smaller p
  CHECK(p[0 * 3 + 2] < p[0 * 3 + 1]);
  // frozen composition: gap 2 -> q = 2/sqrt(3*4/(6*4)) = 2*sqrt(2),
  // p = SR_sf(2*sqrt(2)*sqrt(2), 3) = SR_sf(4, 3)
  CHECK(p[0 * 3 + 2] == Catch::Approx(0.012987661373194292).margin(1e-8));
}

TEST_CASE("nemenyi needs at least three treatments", "[stats]") {
  ScoreTable t;
  t.blocks = {"a", "b", "c"};
  t.treatments = {"x", "y"};
  t.scores = {1, 2, 2, 1, 1, 2};
  CHECK_THROWS(nemenyi(t));
  CHECK_NOTHROW(friedman(t));
}

TEST_CASE("run_tests bundles friedman and nemenyi", "[stats]") {
  const auto t = perfect_ordering_table();
  const auto res = run_tests(t);
  CHECK(res.friedman_statistic == Catch::Approx(8.0));
  CHECK(res.nemenyi_p.size() == 9);
  CHECK(res.mean_ranks.size() == 3);
}

TEST_CASE("score tables validate their shape", "[stats]") {
  ScoreTable t;
  t.blocks = {"a"};
  t.treatments = {"x", "y", "z"};
  t.scores = {1, 2};  // wrong length
  CHECK_THROWS(friedman(t));
  ScoreTable one_block;
  one_block.blocks = {"a"};
  one_block.treatments = {"x", "y", "z"};
  one_block.scores = {1, 2, 3};
  CHECK_THROWS(friedman(one_block));  // n >= 2 required
}
