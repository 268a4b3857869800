#ifndef IRTPART_LEARNERS_TREE_HPP
#define IRTPART_LEARNERS_TREE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "irtpart/learners/common.hpp"

namespace irtpart {
namespace learners {

struct TreeConfig {
  int max_depth = 20;
  int min_samples_leaf = 1;
  int mtry = 0;  // features tried per node; 0 = all
};

/// CART with Gini impurity, optional instance weights, optional per-node
/// random feature subsets (for forests). Ties in split quality go to the
/// earliest candidate, so fits are deterministic.
class DecisionTree final : public Model {
  struct Node {
    int feature = -1;  // -1 = leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    int label = 0;
  };

 public:
  static DecisionTree fit(const DataMatrix& rows, const std::vector<int>& labels,
                          const TreeConfig& cfg, Rng* rng = nullptr,
                          const std::vector<double>& weights = {}) {
    if (rows.rows != labels.size()) throw Error("tree: rows/labels size mismatch");
    if (rows.rows == 0) throw Error("tree: empty training set");
    DecisionTree tree;
    std::vector<std::size_t> idx(rows.rows);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    tree.build(rows, labels, weights, idx, 0, cfg, rng);
    return tree;
  }

  int predict_row(std::span<const double> row) const override {
    int node = 0;
    while (nodes_[node].feature >= 0)
      node = row[(std::size_t)nodes_[node].feature] <= nodes_[node].threshold ? nodes_[node].left
                                                                              : nodes_[node].right;
    return nodes_[node].label;
  }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  std::vector<Node> nodes_;

  static double weight_of(const std::vector<double>& weights, std::size_t i) {
    return weights.empty() ? 1.0 : weights[i];
  }

  int build(const DataMatrix& rows, const std::vector<int>& labels,
            const std::vector<double>& weights, const std::vector<std::size_t>& idx, int depth,
            const TreeConfig& cfg, Rng* rng) {
    double w1 = 0.0, w_total = 0.0;
    for (std::size_t i : idx) {
      const double w = weight_of(weights, i);
      w_total += w;
      if (labels[i] == 1) w1 += w;
    }
    const double w0 = w_total - w1;
    const int node_id = (int)nodes_.size();
    nodes_.push_back({});
    nodes_[node_id].label = w1 > w0 ? 1 : 0;

    const bool pure = w1 == 0.0 || w0 == 0.0;
    if (pure || depth >= cfg.max_depth || idx.size() < 2 * (std::size_t)cfg.min_samples_leaf)
      return node_id;

    const double parent_gini = 1.0 - (w0 / w_total) * (w0 / w_total) - (w1 / w_total) * (w1 / w_total);

    std::vector<std::size_t> features;
    if (cfg.mtry > 0 && (std::size_t)cfg.mtry < rows.cols && rng) {
      std::vector<std::size_t> all(rows.cols);
      for (std::size_t f = 0; f < all.size(); ++f) all[f] = f;
      rng->shuffle(all);
      features.assign(all.begin(), all.begin() + cfg.mtry);
    } else {
      features.resize(rows.cols);
      for (std::size_t f = 0; f < features.size(); ++f) features[f] = f;
    }

    int best_feature = -1;
    double best_threshold = 0.0, best_impurity = parent_gini - 1e-12;
    std::vector<std::size_t> order(idx);
    for (std::size_t f : features) {
      std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const double vx = rows.at(x, f), vy = rows.at(y, f);
        return vx != vy ? vx < vy : x < y;
      });
      double left_w1 = 0.0, left_w = 0.0;
      for (std::size_t j = 0; j + 1 < order.size(); ++j) {
        const double w = weight_of(weights, order[j]);
        left_w += w;
        if (labels[order[j]] == 1) left_w1 += w;
        const double v = rows.at(order[j], f), v_next = rows.at(order[j + 1], f);
        if (v == v_next) continue;
        if (j + 1 < (std::size_t)cfg.min_samples_leaf ||
            order.size() - j - 1 < (std::size_t)cfg.min_samples_leaf)
          continue;
        const double right_w = w_total - left_w;
        const double right_w1 = w1 - left_w1;
        const double left_w0 = left_w - left_w1, right_w0 = right_w - right_w1;
        const double gini_l = 1.0 - (left_w0 / left_w) * (left_w0 / left_w) -
                              (left_w1 / left_w) * (left_w1 / left_w);
        const double gini_r = 1.0 - (right_w0 / right_w) * (right_w0 / right_w) -
                              (right_w1 / right_w) * (right_w1 / right_w);
        const double impurity = (left_w * gini_l + right_w * gini_r) / w_total;
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = (int)f;
          best_threshold = 0.5 * (v + v_next);
        }
      }
    }

    if (best_feature < 0) return node_id;

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx)
      (rows.at(i, (std::size_t)best_feature) <= best_threshold ? left_idx : right_idx).push_back(i);
    if (left_idx.empty() || right_idx.empty()) return node_id;

    nodes_[node_id].feature = best_feature;
    nodes_[node_id].threshold = best_threshold;
    const int left = build(rows, labels, weights, left_idx, depth + 1, cfg, rng);
    nodes_[node_id].left = left;
    const int right = build(rows, labels, weights, right_idx, depth + 1, cfg, rng);
    nodes_[node_id].right = right;
    return node_id;
  }
};

/// Least-squares regression stump for gradient boosting: one split, constant
/// values in each leaf supplied by the caller's leaf statistics.
struct RegressionStump {
  int feature = -1;  // -1 = constant
  double threshold = 0.0;
  double left_value = 0.0, right_value = 0.0;

  double eval(std::span<const double> row) const {
    if (feature < 0) return left_value;
    return row[(std::size_t)feature] <= threshold ? left_value : right_value;
  }

  // Split minimizing SSE of targets; leaf membership is returned so the
  // caller can set leaf values with its own loss-specific statistics.
  static RegressionStump fit_split(const DataMatrix& rows, const std::vector<double>& targets,
                                   std::vector<char>& goes_left) {
    const std::size_t n = rows.rows;
    goes_left.assign(n, 1);
    RegressionStump stump;

    double total = 0.0, total_sq = 0.0;
    for (double t : targets) {
      total += t;
      total_sq += t * t;
    }
    double best_sse = total_sq - total * total / (double)n - 1e-12;

    std::vector<std::size_t> order(n);
    for (std::size_t f = 0; f < rows.cols; ++f) {
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const double vx = rows.at(x, f), vy = rows.at(y, f);
        return vx != vy ? vx < vy : x < y;
      });
      double left_sum = 0.0, left_sq = 0.0;
      for (std::size_t j = 0; j + 1 < n; ++j) {
        left_sum += targets[order[j]];
        left_sq += targets[order[j]] * targets[order[j]];
        const double v = rows.at(order[j], f), v_next = rows.at(order[j + 1], f);
        if (v == v_next) continue;
        const double nl = (double)(j + 1), nr = (double)(n - j - 1);
        const double right_sum = total - left_sum, right_sq = total_sq - left_sq;
        const double sse = (left_sq - left_sum * left_sum / nl) + (right_sq - right_sum * right_sum / nr);
        if (sse < best_sse) {
          best_sse = sse;
          stump.feature = (int)f;
          stump.threshold = 0.5 * (v + v_next);
        }
      }
    }

    if (stump.feature >= 0)
      for (std::size_t i = 0; i < n; ++i)
        goes_left[i] = rows.at(i, (std::size_t)stump.feature) <= stump.threshold ? 1 : 0;
    return stump;
  }
};

}  // namespace learners
}  // namespace irtpart

#endif
