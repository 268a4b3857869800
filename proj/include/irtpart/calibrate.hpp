#ifndef IRTPART_CALIBRATE_HPP
#define IRTPART_CALIBRATE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "irtpart/common.hpp"
#include "irtpart/icc.hpp"
#include "irtpart/prng.hpp"
#include "irtpart/quadrature.hpp"
#include "irtpart/response_matrix.hpp"

namespace irtpart {

enum class ItemFlag { calibrated, degenerate_all_correct, degenerate_all_wrong, boundary_clamped };

inline const char* to_string(ItemFlag flag) {
  switch (flag) {
    case ItemFlag::calibrated: return "calibrated";
    case ItemFlag::degenerate_all_correct: return "degenerate_all_correct";
    case ItemFlag::degenerate_all_wrong: return "degenerate_all_wrong";
    case ItemFlag::boundary_clamped: return "boundary_clamped";
  }
  return "calibrated";
}

inline ItemFlag parse_item_flag(std::string_view s) {
  if (s == "calibrated") return ItemFlag::calibrated;
  if (s == "degenerate_all_correct") return ItemFlag::degenerate_all_correct;
  if (s == "degenerate_all_wrong") return ItemFlag::degenerate_all_wrong;
  if (s == "boundary_clamped") return ItemFlag::boundary_clamped;
  throw DataError("unknown item flag '" + std::string(s) + "'");
}

struct ItemParameters {
  std::string item_id;
  double discrimination = 1.0;
  double difficulty = 0.0;
  double guessing = 0.0;
  ItemFlag flag = ItemFlag::calibrated;
};

struct CalibrationConfig {
  int quadrature_points = 21;
  int max_em_iters = 500;
  double loglik_tol = 1e-4;
  double m_step_tol = 1e-8;
  double c_max = 0.95;
  double a_max = 50.0;
  double b_max = 6.0;
  double init_a = 1.0;
  double init_c = 0.05;
};

struct CalibrationResult {
  std::vector<ItemParameters> items;
  std::vector<double> loglik_trace;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> warnings;
};

/// Expected sufficient statistics from one Bock-Aitkin E-step.
struct EStepResult {
  std::vector<double> posterior;  // M x Q, rows sum to 1
  std::vector<double> r_bar;      // items x Q expected corrects per node
  std::vector<double> n_bar;      // Q expected respondents per node
};

namespace detail {

// Per-node success probabilities for one item, clamped away from {0,1}.
inline void item_node_probs(const ItemParameters& item, const QuadratureRule& grid,
                            std::vector<double>& out) {
  out.resize(grid.nodes.size());
  for (std::size_t q = 0; q < grid.nodes.size(); ++q)
    out[q] = icc_3pl(grid.nodes[q], item.discrimination, item.difficulty, item.guessing);
}

// log P and log (1-P) tables, items x Q.
struct LogProbTable {
  std::size_t n_items = 0, n_nodes = 0;
  std::vector<double> log_p, log_q;

  void build(const std::vector<ItemParameters>& items, const QuadratureRule& grid) {
    n_items = items.size();
    n_nodes = grid.nodes.size();
    log_p.resize(n_items * n_nodes);
    log_q.resize(n_items * n_nodes);
    std::vector<double> probs;
    for (std::size_t i = 0; i < n_items; ++i) {
      item_node_probs(items[i], grid, probs);
      for (std::size_t q = 0; q < n_nodes; ++q) {
        log_p[i * n_nodes + q] = std::log(probs[q]);
        log_q[i * n_nodes + q] = std::log(1.0 - probs[q]);
      }
    }
  }
};

// Joint log-likelihood of model m's responses at every node.
inline void model_node_logliks(const ResponseMatrix& matrix, std::size_t m,
                               const std::vector<std::size_t>& active, const LogProbTable& table,
                               std::vector<double>& out) {
  out.assign(table.n_nodes, 0.0);
  for (std::size_t k = 0; k < active.size(); ++k) {
    const double* lp = &table.log_p[k * table.n_nodes];
    const double* lq = &table.log_q[k * table.n_nodes];
    const double* src = matrix.at(m, active[k]) ? lp : lq;
    for (std::size_t q = 0; q < table.n_nodes; ++q) out[q] += src[q];
  }
}

}  // namespace detail

/// Marginal log-likelihood of the whole matrix under the given item
/// parameters, ability integrated over the grid.
inline double observed_loglik(const ResponseMatrix& matrix, const std::vector<ItemParameters>& items,
                              const QuadratureRule& grid) {
  if (items.size() != matrix.items()) throw Error("observed_loglik: item count mismatch");
  std::vector<std::size_t> active(matrix.items());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
  detail::LogProbTable table;
  table.build(items, grid);

  std::vector<double> per_model(matrix.models());
  std::vector<double> node_ll;
  for (std::size_t m = 0; m < matrix.models(); ++m) {
    detail::model_node_logliks(matrix, m, active, table, node_ll);
    double mx = node_ll[0];
    for (double v : node_ll) mx = std::max(mx, v);
    double sum = 0.0;
    for (std::size_t q = 0; q < node_ll.size(); ++q)
      sum += grid.weights[q] * std::exp(node_ll[q] - mx);
    per_model[m] = mx + std::log(sum);
  }
  return pairwise_sum(per_model);
}

/// One E-step over the active items: posterior ability weights per model and
/// the expected counts the M-step consumes.
inline EStepResult e_step(const ResponseMatrix& matrix, const std::vector<ItemParameters>& items,
                          const QuadratureRule& grid) {
  if (items.size() != matrix.items()) throw Error("e_step: item count mismatch");
  const std::size_t M = matrix.models();
  const std::size_t n = matrix.items();
  const std::size_t Q = grid.nodes.size();

  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;
  detail::LogProbTable table;
  table.build(items, grid);

  EStepResult res;
  res.posterior.assign(M * Q, 0.0);
  res.r_bar.assign(n * Q, 0.0);
  res.n_bar.assign(Q, 0.0);

  std::vector<double> node_ll;
  for (std::size_t m = 0; m < M; ++m) {
    detail::model_node_logliks(matrix, m, active, table, node_ll);
    double mx = node_ll[0];
    for (double v : node_ll) mx = std::max(mx, v);
    double denom = 0.0;
    double* post = &res.posterior[m * Q];
    for (std::size_t q = 0; q < Q; ++q) {
      post[q] = grid.weights[q] * std::exp(node_ll[q] - mx);
      denom += post[q];
    }
    for (std::size_t q = 0; q < Q; ++q) {
      post[q] /= denom;
      res.n_bar[q] += post[q];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!matrix.at(m, i)) continue;
      double* r = &res.r_bar[i * Q];
      for (std::size_t q = 0; q < Q; ++q) r[q] += post[q];
    }
  }
  return res;
}

namespace detail {

struct MStepObjective {
  const double* r_bar;
  const double* n_bar;
  const QuadratureRule* grid;
  double c_max;

  // params: (a, b, gamma) with c = c_max * sigmoid(gamma).
  double value(const std::array<double, 3>& x) const {
    const double c = c_max * sigmoid(x[2]);
    double total = 0.0;
    for (std::size_t q = 0; q < grid->nodes.size(); ++q) {
      const double p = icc_3pl(grid->nodes[q], x[0], x[1], c);
      total += r_bar[q] * std::log(p) + (n_bar[q] - r_bar[q]) * std::log(1.0 - p);
    }
    return total;
  }

  std::array<double, 3> gradient(const std::array<double, 3>& x) const {
    const double sg = sigmoid(x[2]);
    const double c = c_max * sg;
    const double dc_dgamma = c_max * sg * (1.0 - sg);
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < grid->nodes.size(); ++q) {
      const double t = grid->nodes[q] - x[1];
      const double s = sigmoid(x[0] * t);
      const double p = clamp_prob(c + (1.0 - c) * s);
      const double dldp = r_bar[q] / p - (n_bar[q] - r_bar[q]) / (1.0 - p);
      const double dpds = (1.0 - c) * s * (1.0 - s);
      g[0] += dldp * dpds * t;
      g[1] += dldp * dpds * -x[0];
      g[2] += dldp * (1.0 - s) * dc_dgamma;
    }
    return g;
  }
};

inline std::array<double, 3> project_box(std::array<double, 3> x, const CalibrationConfig& cfg) {
  x[0] = std::clamp(x[0], -cfg.a_max, cfg.a_max);
  x[1] = std::clamp(x[1], -cfg.b_max, cfg.b_max);
  x[2] = std::clamp(x[2], -30.0, 30.0);
  return x;
}

}  // namespace detail

/// Maximize the expected complete-data log-likelihood for one item. Newton
/// steps (finite-difference Hessian of the analytic gradient) with
/// backtracking halving; falls back to a projected gradient step; never
/// returns a point with a lower objective than the input.
inline ItemParameters m_step_item(const std::vector<double>& r_bar, const std::vector<double>& n_bar,
                                  const QuadratureRule& grid, const ItemParameters& current,
                                  const CalibrationConfig& cfg) {
  detail::MStepObjective obj{r_bar.data(), n_bar.data(), &grid, cfg.c_max};

  const double c0 = std::clamp(current.guessing, 1e-6, cfg.c_max * (1.0 - 1e-9));
  std::array<double, 3> x{current.discrimination, current.difficulty, logit(c0 / cfg.c_max)};
  x = detail::project_box(x, cfg);
  double fx = obj.value(x);

  for (int iter = 0; iter < 200; ++iter) {
    const auto g = obj.gradient(x);

    // Hessian by central differences of the gradient.
    double H[3][3];
    for (int j = 0; j < 3; ++j) {
      const double h = 1e-5 * (1.0 + std::abs(x[j]));
      auto xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const auto gp = obj.gradient(xp);
      const auto gm = obj.gradient(xm);
      for (int i = 0; i < 3; ++i) H[i][j] = (gp[i] - gm[i]) / (2.0 * h);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const double s = 0.5 * (H[i][j] + H[j][i]);
        H[i][j] = H[j][i] = s;
      }

    // Newton direction: solve H d = -g by Gaussian elimination with pivoting.
    std::array<double, 3> dir{};
    bool newton_ok = true;
    {
      double A[3][4] = {{H[0][0], H[0][1], H[0][2], -g[0]},
                        {H[1][0], H[1][1], H[1][2], -g[1]},
                        {H[2][0], H[2][1], H[2][2], -g[2]}};
      for (int col = 0; col < 3 && newton_ok; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
          if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-12) {
          newton_ok = false;
          break;
        }
        if (piv != col)
          for (int k = col; k < 4; ++k) std::swap(A[piv][k], A[col][k]);
        for (int r = col + 1; r < 3; ++r) {
          const double f = A[r][col] / A[col][col];
          for (int k = col; k < 4; ++k) A[r][k] -= f * A[col][k];
        }
      }
      if (newton_ok) {
        for (int r = 2; r >= 0; --r) {
          double v = A[r][3];
          for (int k = r + 1; k < 3; ++k) v -= A[r][k] * dir[k];
          dir[r] = v / A[r][r];
        }
        // A Newton step from an indefinite Hessian may point downhill.
        if (dir[0] * g[0] + dir[1] * g[1] + dir[2] * g[2] <= 0.0) newton_ok = false;
      }
    }

    auto try_direction = [&](const std::array<double, 3>& d) -> bool {
      double tau = 1.0;
      for (int bt = 0; bt < 40; ++bt, tau *= 0.5) {
        auto cand = detail::project_box({x[0] + tau * d[0], x[1] + tau * d[1], x[2] + tau * d[2]}, cfg);
        const double fc = obj.value(cand);
        if (fc > fx) {
          x = cand;
          fx = fc;
          return true;
        }
      }
      return false;
    };

    bool moved = false;
    if (newton_ok) moved = try_direction(dir);
    if (!moved) {
      const double gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
      if (gn > 0.0) moved = try_direction({g[0] / gn, g[1] / gn, g[2] / gn});
    }
    if (!moved) break;

    const double gnorm = std::abs(g[0]) + std::abs(g[1]) + std::abs(g[2]);
    if (gnorm < cfg.m_step_tol) break;
  }

  ItemParameters out = current;
  out.discrimination = x[0];
  out.difficulty = x[1];
  out.guessing = cfg.c_max * sigmoid(x[2]);
  const bool at_bound = std::abs(x[0]) >= cfg.a_max - 1e-12 || std::abs(x[1]) >= cfg.b_max - 1e-12;
  out.flag = at_bound ? ItemFlag::boundary_clamped : ItemFlag::calibrated;
  return out;
}

/// Synthetic response matrix from known item parameters: theta_m ~ N(0,1),
/// cell ~ Bernoulli(icc). Ground-truth oracle for recovery tests.
inline ResponseMatrix simulate_responses(const std::vector<ItemParameters>& items, std::size_t M,
                                         std::uint64_t seed) {
  if (M < 1) throw Error("simulate_responses: need at least one respondent");
  ResponseMatrix matrix;
  matrix.model_ids.resize(M);
  for (std::size_t m = 0; m < M; ++m) matrix.model_ids[m] = "sim_" + std::to_string(m);
  matrix.item_ids.resize(items.size());
  for (std::size_t i = 0; i < items.size(); ++i)
    matrix.item_ids[i] = items[i].item_id.empty() ? "item_" + std::to_string(i) : items[i].item_id;
  matrix.cells.resize(M * items.size());

  Rng rng(seed);
  for (std::size_t m = 0; m < M; ++m) {
    const double theta = rng.next_normal();
    for (std::size_t i = 0; i < items.size(); ++i) {
      const double p = icc_3pl(theta, items[i].discrimination, items[i].difficulty, items[i].guessing);
      matrix.at(m, i) = rng.next_double() < p ? 1 : 0;
    }
  }
  return matrix;
}

/// Full marginal-maximum-likelihood calibration: Bock-Aitkin EM over the
/// non-degenerate items, degenerate ones imputed and flagged.
inline CalibrationResult calibrate(const ResponseMatrix& matrix, const CalibrationConfig& cfg = {}) {
  if (matrix.models() < 2) throw DataError("calibrate: need at least two models");
  if (matrix.items() == 0) throw DataError("calibrate: empty matrix");

  CalibrationResult result;
  if (matrix.models() < 30)
    result.warnings.push_back("calibration with fewer than 30 models; estimates may be unstable");

  const auto p_hat = item_proportions(matrix);

  // Partition into degenerate (imputed) and active (estimated) items.
  std::vector<std::size_t> active;
  result.items.resize(matrix.items());
  for (std::size_t i = 0; i < matrix.items(); ++i) {
    auto& item = result.items[i];
    item.item_id = matrix.item_ids[i];
    if (p_hat[i] == 1.0) {
      item = {matrix.item_ids[i], 1.0, -cfg.b_max, 0.0, ItemFlag::degenerate_all_correct};
    } else if (p_hat[i] == 0.0) {
      item = {matrix.item_ids[i], 1.0, cfg.b_max, 0.0, ItemFlag::degenerate_all_wrong};
    } else {
      item.discrimination = cfg.init_a;
      item.difficulty = -logit(std::clamp(p_hat[i], 0.02, 0.98));
      item.guessing = cfg.init_c;
      item.flag = ItemFlag::calibrated;
      active.push_back(i);
    }
  }

  const auto grid = gauss_hermite_normal(cfg.quadrature_points);

  if (active.empty()) {
    result.converged = true;
    result.loglik_trace.push_back(0.0);
    return result;
  }

  // EM runs on the active sub-matrix only.
  ResponseMatrix sub;
  sub.model_ids = matrix.model_ids;
  sub.item_ids.reserve(active.size());
  for (std::size_t k : active) sub.item_ids.push_back(matrix.item_ids[k]);
  sub.cells.resize(matrix.models() * active.size());
  for (std::size_t m = 0; m < matrix.models(); ++m)
    for (std::size_t k = 0; k < active.size(); ++k) sub.at(m, k) = matrix.at(m, active[k]);

  std::vector<ItemParameters> params;
  params.reserve(active.size());
  for (std::size_t k : active) params.push_back(result.items[k]);

  double ll = observed_loglik(sub, params, grid);
  result.loglik_trace.push_back(ll);

  const std::size_t Q = grid.nodes.size();
  for (int iter = 0; iter < cfg.max_em_iters; ++iter) {
    const auto counts = e_step(sub, params, grid);
    for (std::size_t k = 0; k < params.size(); ++k) {
      std::vector<double> r(counts.r_bar.begin() + (std::ptrdiff_t)(k * Q),
                            counts.r_bar.begin() + (std::ptrdiff_t)((k + 1) * Q));
      params[k] = m_step_item(r, counts.n_bar, grid, params[k], cfg);
    }
    const double next = observed_loglik(sub, params, grid);
    result.loglik_trace.push_back(next);
    result.iterations = iter + 1;
    const double delta = next - ll;
    ll = next;
    if (std::abs(delta) < cfg.loglik_tol) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged)
    result.warnings.push_back("EM did not reach loglik_tol within max_em_iters");

  for (std::size_t k = 0; k < active.size(); ++k) result.items[active[k]] = params[k];
  return result;
}

inline std::string items_to_csv(const std::vector<ItemParameters>& items) {
  std::string out = "item_id,discrimination,difficulty,guessing,flag\n";
  for (const auto& item : items)
    out += csv_row({item.item_id, format_double(item.discrimination), format_double(item.difficulty),
                    format_double(item.guessing), to_string(item.flag)});
  return out;
}

inline std::vector<ItemParameters> items_from_csv(std::string_view text) {
  const auto records = parse_csv_records(text);
  if (records.empty() || records[0] != std::vector<std::string>{"item_id", "discrimination",
                                                                "difficulty", "guessing", "flag"})
    throw DataError("item parameters: bad header");
  std::vector<ItemParameters> items;
  items.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != 5)
      throw DataError("item parameters: row " + std::to_string(r + 1) + " has " +
                      std::to_string(rec.size()) + " fields, expected 5");
    ItemParameters item;
    item.item_id = rec[0];
    item.discrimination = parse_double(rec[1]);
    item.difficulty = parse_double(rec[2]);
    item.guessing = parse_double(rec[3]);
    item.flag = parse_item_flag(rec[4]);
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace irtpart

#endif
