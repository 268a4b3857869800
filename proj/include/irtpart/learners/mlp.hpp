#ifndef IRTPART_LEARNERS_MLP_HPP
#define IRTPART_LEARNERS_MLP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "irtpart/icc.hpp"
#include "irtpart/learners/common.hpp"

namespace irtpart {
namespace learners {

/// One tanh hidden layer, logistic output, mini-batch gradient descent on
/// cross-entropy over standardized features; Glorot-uniform init; the best
/// epoch by training loss is kept.
class Mlp final : public Model {
 public:
  static Mlp fit(const DataMatrix& rows, const std::vector<int>& labels, int hidden_units,
                 double learning_rate, int epochs, std::uint64_t seed) {
    const std::size_t n = rows.rows, d = rows.cols;
    const std::size_t h = (std::size_t)hidden_units;
    Mlp model;
    model.hidden_ = h;
    model.scaler_.fit(rows);
    const DataMatrix x = model.scaler_.apply(rows);

    Rng root(seed);
    Rng init = root.stream("init");
    std::vector<double> w1(h * d), b1(h, 0.0), w2(h), b2(1, 0.0);
    const double limit1 = std::sqrt(6.0 / (double)(d + h));
    for (double& v : w1) v = (init.next_double() * 2.0 - 1.0) * limit1;
    const double limit2 = std::sqrt(6.0 / (double)(h + 1));
    for (double& v : w2) v = (init.next_double() * 2.0 - 1.0) * limit2;

    auto forward_loss = [&](const std::vector<double>& w1v, const std::vector<double>& b1v,
                            const std::vector<double>& w2v, double b2v) {
      double loss = 0.0;
      std::vector<double> hid(h);
      for (std::size_t i = 0; i < n; ++i) {
        double z = b2v;
        for (std::size_t j = 0; j < h; ++j) {
          double a = b1v[j];
          for (std::size_t c = 0; c < d; ++c) a += w1v[j * d + c] * x.at(i, c);
          hid[j] = std::tanh(a);
          z += w2v[j] * hid[j];
        }
        const double p = clamp_prob(sigmoid(z));
        const double y = labels[i] == 1 ? 1.0 : 0.0;
        loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
      }
      return loss / (double)n;
    };

    std::vector<double> best_w1 = w1, best_b1 = b1, best_w2 = w2;
    double best_b2 = b2[0];
    double best_loss = forward_loss(w1, b1, w2, b2[0]);

    const std::size_t batch = std::min<std::size_t>(32, n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    std::vector<double> hid(h), delta1(h);
    std::vector<double> g_w1(h * d), g_b1(h), g_w2(h);
    for (int epoch = 0; epoch < epochs; ++epoch) {
      Rng rng = root.stream("epoch_" + std::to_string(epoch));
      rng.shuffle(order);
      for (std::size_t start = 0; start < n; start += batch) {
        const std::size_t stop = std::min(n, start + batch);
        std::fill(g_w1.begin(), g_w1.end(), 0.0);
        std::fill(g_b1.begin(), g_b1.end(), 0.0);
        std::fill(g_w2.begin(), g_w2.end(), 0.0);
        double g_b2 = 0.0;
        for (std::size_t m = start; m < stop; ++m) {
          const std::size_t i = order[m];
          double z = b2[0];
          for (std::size_t j = 0; j < h; ++j) {
            double a = b1[j];
            for (std::size_t c = 0; c < d; ++c) a += w1[j * d + c] * x.at(i, c);
            hid[j] = std::tanh(a);
            z += w2[j] * hid[j];
          }
          const double p = sigmoid(z);
          const double err = p - (labels[i] == 1 ? 1.0 : 0.0);
          g_b2 += err;
          for (std::size_t j = 0; j < h; ++j) {
            g_w2[j] += err * hid[j];
            delta1[j] = err * w2[j] * (1.0 - hid[j] * hid[j]);
            g_b1[j] += delta1[j];
            for (std::size_t c = 0; c < d; ++c) g_w1[j * d + c] += delta1[j] * x.at(i, c);
          }
        }
        const double scale = learning_rate / (double)(stop - start);
        for (std::size_t j = 0; j < h * d; ++j) w1[j] -= scale * g_w1[j];
        for (std::size_t j = 0; j < h; ++j) {
          b1[j] -= scale * g_b1[j];
          w2[j] -= scale * g_w2[j];
        }
        b2[0] -= scale * g_b2;
      }
      const double loss = forward_loss(w1, b1, w2, b2[0]);
      if (loss < best_loss) {
        best_loss = loss;
        best_w1 = w1;
        best_b1 = b1;
        best_w2 = w2;
        best_b2 = b2[0];
      }
    }

    model.w1_ = best_w1;
    model.b1_ = best_b1;
    model.w2_ = best_w2;
    model.b2_ = best_b2;
    return model;
  }

  int predict_row(std::span<const double> row) const override {
    scaler_.apply_row(row, scratch_);
    const std::size_t d = scratch_.size();
    double z = b2_;
    for (std::size_t j = 0; j < hidden_; ++j) {
      double a = b1_[j];
      for (std::size_t c = 0; c < d; ++c) a += w1_[j * d + c] * scratch_[c];
      z += w2_[j] * std::tanh(a);
    }
    return z > 0.0 ? 1 : 0;
  }

 private:
  Standardizer scaler_;
  std::size_t hidden_ = 0;
  std::vector<double> w1_, b1_, w2_;
  double b2_ = 0.0;
  mutable std::vector<double> scratch_;
};

}  // namespace learners
}  // namespace irtpart

#endif
