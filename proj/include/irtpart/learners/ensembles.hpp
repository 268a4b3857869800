#ifndef IRTPART_LEARNERS_ENSEMBLES_HPP
#define IRTPART_LEARNERS_ENSEMBLES_HPP

#include <cmath>
#include <string>
#include <vector>

#include "irtpart/icc.hpp"
#include "irtpart/learners/tree.hpp"

namespace irtpart {
namespace learners {

/// Majority vote over bootstrap-trained CART trees; `mtry > 0` adds per-node
/// feature subsampling (random forest), `mtry = 0` is plain bagging.
class TreeEnsemble final : public Model {
 public:
  static TreeEnsemble fit(const DataMatrix& rows, const std::vector<int>& labels, int n_estimators,
                          const TreeConfig& tree_cfg, std::uint64_t seed) {
    TreeEnsemble ens;
    Rng root(seed);
    const std::size_t n = rows.rows;
    std::vector<std::size_t> sample(n);
    for (int t = 0; t < n_estimators; ++t) {
      Rng rng = root.stream("tree_" + std::to_string(t));
      for (std::size_t i = 0; i < n; ++i) sample[i] = rng.next_below(n);
      DataMatrix boot_rows = rows.select_rows(sample);
      std::vector<int> boot_labels = select(labels, sample);
      if (single_class(boot_labels)) {
        ens.constant_votes_.push_back(boot_labels[0]);
        continue;
      }
      ens.trees_.push_back(DecisionTree::fit(boot_rows, boot_labels, tree_cfg, &rng));
    }
    return ens;
  }

  int predict_row(std::span<const double> row) const override {
    int ones = 0, total = 0;
    for (const auto& tree : trees_) {
      ones += tree.predict_row(row);
      ++total;
    }
    for (int v : constant_votes_) {
      ones += v;
      ++total;
    }
    return 2 * ones > total ? 1 : 0;  // tie -> negative class
  }

  std::vector<int> member_votes(std::span<const double> row) const override {
    std::vector<int> votes;
    votes.reserve(trees_.size() + constant_votes_.size());
    for (const auto& tree : trees_) votes.push_back(tree.predict_row(row));
    for (int v : constant_votes_) votes.push_back(v);
    return votes;
  }

 private:
  std::vector<DecisionTree> trees_;
  std::vector<int> constant_votes_;  // degenerate single-class bootstraps
};

/// SAMME AdaBoost over depth-1 stumps (binary case: discrete AdaBoost).
class AdaBoost final : public Model {
 public:
  static AdaBoost fit(const DataMatrix& rows, const std::vector<int>& labels, int n_estimators,
                      double learning_rate) {
    AdaBoost model;
    const std::size_t n = rows.rows;
    std::vector<double> w(n, 1.0 / (double)n);
    TreeConfig stump_cfg{1, 1, 0};

    for (int t = 0; t < n_estimators; ++t) {
      DecisionTree stump = DecisionTree::fit(rows, labels, stump_cfg, nullptr, w);
      double err = 0.0;
      std::vector<int> pred(n);
      for (std::size_t i = 0; i < n; ++i) {
        pred[i] = stump.predict_row(rows.row(i));
        if (pred[i] != labels[i]) err += w[i];
      }
      if (err >= 0.5) break;  // no better than chance on current weights
      const double alpha =
          learning_rate * std::log(((1.0 - err) + 1e-12) / (err + 1e-12));
      model.stumps_.push_back(std::move(stump));
      model.alphas_.push_back(alpha);
      if (err <= 0.0) break;  // perfect stump: further rounds cannot reweight

      double w_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (pred[i] != labels[i]) w[i] *= std::exp(alpha);
        w_sum += w[i];
      }
      for (double& wi : w) wi /= w_sum;
    }
    if (model.stumps_.empty()) {
      model.fallback_ = majority_label(labels);
      model.has_fallback_ = true;
    }
    return model;
  }

  int predict_row(std::span<const double> row) const override {
    if (has_fallback_) return fallback_;
    double score = 0.0;
    for (std::size_t t = 0; t < stumps_.size(); ++t)
      score += alphas_[t] * (stumps_[t].predict_row(row) == 1 ? 1.0 : -1.0);
    return score > 0.0 ? 1 : 0;
  }

  std::vector<int> member_votes(std::span<const double> row) const override {
    if (has_fallback_) return {fallback_};
    std::vector<int> votes;
    votes.reserve(stumps_.size());
    for (const auto& s : stumps_) votes.push_back(s.predict_row(row));
    return votes;
  }

 private:
  std::vector<DecisionTree> stumps_;
  std::vector<double> alphas_;
  int fallback_ = 0;
  bool has_fallback_ = false;
};

/// Gradient boosting of regression stumps on the logistic loss, one Newton
/// step per leaf.
class GradientBoosting final : public Model {
 public:
  static GradientBoosting fit(const DataMatrix& rows, const std::vector<int>& labels,
                              int n_estimators, double learning_rate) {
    GradientBoosting model;
    model.learning_rate_ = learning_rate;
    const std::size_t n = rows.rows;

    double pos = 0.0;
    for (int l : labels) pos += l == 1 ? 1.0 : 0.0;
    const double p0 = std::clamp(pos / (double)n, 1e-6, 1.0 - 1e-6);
    model.f0_ = std::log(p0 / (1.0 - p0));

    std::vector<double> f(n, model.f0_);
    std::vector<double> residual(n);
    std::vector<char> goes_left;
    for (int t = 0; t < n_estimators; ++t) {
      for (std::size_t i = 0; i < n; ++i)
        residual[i] = (labels[i] == 1 ? 1.0 : 0.0) - sigmoid(f[i]);
      RegressionStump stump = RegressionStump::fit_split(rows, residual, goes_left);

      // Newton leaf values: sum(residual) / sum(p(1-p)) per leaf.
      double num_l = 0.0, den_l = 0.0, num_r = 0.0, den_r = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double p = sigmoid(f[i]);
        const double h = std::max(p * (1.0 - p), 1e-12);
        if (goes_left[i]) {
          num_l += residual[i];
          den_l += h;
        } else {
          num_r += residual[i];
          den_r += h;
        }
      }
      stump.left_value = den_l > 0.0 ? num_l / den_l : 0.0;
      stump.right_value = den_r > 0.0 ? num_r / den_r : 0.0;

      for (std::size_t i = 0; i < n; ++i)
        f[i] += learning_rate * (goes_left[i] ? stump.left_value : stump.right_value);
      model.stumps_.push_back(stump);
    }
    return model;
  }

  int predict_row(std::span<const double> row) const override {
    double f = f0_;
    for (const auto& s : stumps_) f += learning_rate_ * s.eval(row);
    return f > 0.0 ? 1 : 0;
  }

 private:
  std::vector<RegressionStump> stumps_;
  double f0_ = 0.0;
  double learning_rate_ = 0.1;
};

}  // namespace learners
}  // namespace irtpart

#endif
