#ifndef IRTPART_STATS_HPP
#define IRTPART_STATS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "irtpart/common.hpp"

namespace irtpart {

namespace detail {

// Regularized upper incomplete gamma Q(a, x) by series / continued fraction.
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw Error("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) {
    // P(a,x) series, Q = 1 - P.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // Lentz continued fraction for Q.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(const F& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, m, fa, f(0.5 * (a + m)), fm, (m - a) / 6.0 * (fa + 4.0 * f(0.5 * (a + m)) + fm),
                          tol, 48) +
         adaptive_simpson(f, m, b, fm, f(0.5 * (m + b)), fb, (b - m) / 6.0 * (fm + 4.0 * f(0.5 * (m + b)) + fb),
                          tol, 48);
}

}  // namespace detail

/// Chi-square survival function with df degrees of freedom.
inline double chi2_sf(double x, int df) {
  if (df < 1) throw Error("chi2_sf: df must be positive");
  if (x <= 0.0) return 1.0;
  return detail::gamma_q(0.5 * df, 0.5 * x);
}

/// Survival function of the range of k independent standard normals (the
/// studentized range with infinite degrees of freedom). Absolute error well
/// under 1e-6 for the q, k ranges used here.
inline double studentized_range_sf(double q, int k) {
  if (k < 2) throw Error("studentized_range_sf: k must be at least 2");
  if (q <= 0.0) return 1.0;
  const double lo = -9.0, hi = 9.0 + q;
  const auto integrand = [&](double z) {
    const double span = detail::normal_cdf(z) - detail::normal_cdf(z - q);
    return detail::normal_pdf(z) * std::pow(span, k - 1);
  };
  const double cdf = k * detail::integrate(integrand, lo, hi, 1e-10);
  return std::clamp(1.0 - cdf, 0.0, 1.0);
}

struct ScoreTable {
  std::vector<std::string> blocks;      // length n_b
  std::vector<std::string> treatments;  // length k
  std::vector<double> scores;           // n_b x k row-major

  std::size_t n_blocks() const { return blocks.size(); }
  std::size_t n_treatments() const { return treatments.size(); }
  double at(std::size_t b, std::size_t t) const { return scores[b * treatments.size() + t]; }
};

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::vector<double> mean_ranks;
};

namespace detail {

// Within-block average ranks plus the tie term sum(t^3 - t) for the block.
inline double block_ranks(const double* scores, std::size_t k, std::vector<double>& ranks_out) {
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return scores[x] < scores[y]; });
  ranks_out.resize(k);
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < k) {
    std::size_t j = i;
    while (j + 1 < k && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * (double)(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks_out[order[m]] = avg_rank;
    const double t = (double)(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  return tie_term;
}

}  // namespace detail

/// Friedman rank test over blocks x treatments with the standard tie
/// correction; all-tied tables yield statistic 0, p 1.
inline FriedmanResult friedman(const ScoreTable& table) {
  const std::size_t n = table.n_blocks();
  const std::size_t k = table.n_treatments();
  if (k < 2) throw Error("friedman: need at least two treatments");
  if (n < 2) throw Error("friedman: need at least two blocks");
  if (table.scores.size() != n * k) throw Error("friedman: score table shape mismatch");

  std::vector<double> rank_sums(k, 0.0);
  std::vector<double> ranks;
  double tie_terms = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    tie_terms += detail::block_ranks(&table.scores[b * k], k, ranks);
    for (std::size_t t = 0; t < k; ++t) rank_sums[t] += ranks[t];
  }

  FriedmanResult res;
  res.mean_ranks.resize(k);
  for (std::size_t t = 0; t < k; ++t) res.mean_ranks[t] = rank_sums[t] / (double)n;

  const double expected = (double)n * (double)(k + 1) / 2.0;
  double numer = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    const double d = rank_sums[t] - expected;
    numer += d * d;
  }
  const double denom = (double)n * (double)k * (double)(k + 1) - tie_terms / (double)(k - 1);
  if (denom <= 0.0) {
    res.statistic = 0.0;
    res.p_value = 1.0;
    return res;
  }
  res.statistic = 12.0 * numer / denom;
  res.p_value = chi2_sf(res.statistic, (int)k - 1);
  return res;
}

/// Nemenyi post-hoc pairwise p-values: q_ij = |mean-rank gap| /
/// sqrt(k(k+1)/(6 n_b)), referred to the studentized range via the sqrt(2)
/// rescaling the infinite-df tables are built with.
inline std::vector<double> nemenyi(const ScoreTable& table) {
  const std::size_t k = table.n_treatments();
  if (k < 3) throw Error("nemenyi: need at least three treatments");
  const auto fr = friedman(table);

  const double scale = std::sqrt((double)k * (double)(k + 1) / (6.0 * (double)table.n_blocks()));
  std::vector<double> p(k * k, 1.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double q = std::abs(fr.mean_ranks[i] - fr.mean_ranks[j]) / scale;
      const double pv = studentized_range_sf(q * std::numbers::sqrt2, (int)k);
      p[i * k + j] = pv;
      p[j * k + i] = pv;
    }
  return p;
}

struct TestResult {
  double friedman_statistic = 0.0;
  double friedman_p = 1.0;
  std::vector<double> mean_ranks;
  std::vector<double> nemenyi_p;  // k x k, diagonal 1
};

inline TestResult run_tests(const ScoreTable& table) {
  TestResult res;
  const auto fr = friedman(table);
  res.friedman_statistic = fr.statistic;
  res.friedman_p = fr.p_value;
  res.mean_ranks = fr.mean_ranks;
  res.nemenyi_p = nemenyi(table);
  return res;
}

}  // namespace irtpart

#endif
