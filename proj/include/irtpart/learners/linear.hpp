#ifndef IRTPART_LEARNERS_LINEAR_HPP
#define IRTPART_LEARNERS_LINEAR_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "irtpart/icc.hpp"
#include "irtpart/learners/common.hpp"

namespace irtpart {
namespace learners {

namespace detail {

// Cholesky solve of A x = b for symmetric positive-definite A (in place).
inline std::vector<double> cholesky_solve(std::vector<double> A, std::vector<double> b,
                                          std::size_t d) {
  for (std::size_t j = 0; j < d; ++j) {
    double diag = A[j * d + j];
    for (std::size_t k = 0; k < j; ++k) diag -= A[j * d + k] * A[j * d + k];
    if (diag <= 0.0) throw Error("lda: covariance not positive definite");
    A[j * d + j] = std::sqrt(diag);
    for (std::size_t i = j + 1; i < d; ++i) {
      double v = A[i * d + j];
      for (std::size_t k = 0; k < j; ++k) v -= A[i * d + k] * A[j * d + k];
      A[i * d + j] = v / A[j * d + j];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= A[i * d + k] * b[k];
    b[i] = v / A[i * d + i];
  }
  for (std::size_t i = d; i-- > 0;) {
    double v = b[i];
    for (std::size_t k = i + 1; k < d; ++k) v -= A[k * d + i] * b[k];
    b[i] = v / A[i * d + i];
  }
  return b;
}

}  // namespace detail

/// Fisher LDA: pooled covariance with a ridge floor, optional shrinkage
/// toward the spherical average variance.
class Lda final : public Model {
 public:
  static Lda fit(const DataMatrix& rows, const std::vector<int>& labels, double shrinkage) {
    const std::size_t n = rows.rows, d = rows.cols;
    Lda model;
    model.weights_.assign(d, 0.0);

    std::vector<double> mu0(d, 0.0), mu1(d, 0.0);
    double n0 = 0.0, n1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto* mu = labels[i] == 1 ? &mu1 : &mu0;
      (labels[i] == 1 ? n1 : n0) += 1.0;
      for (std::size_t c = 0; c < d; ++c) (*mu)[c] += rows.at(i, c);
    }
    for (std::size_t c = 0; c < d; ++c) {
      mu0[c] /= n0;
      mu1[c] /= n1;
    }

    std::vector<double> cov(d * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& mu = labels[i] == 1 ? mu1 : mu0;
      for (std::size_t a = 0; a < d; ++a) {
        const double da = rows.at(i, a) - mu[a];
        for (std::size_t b = a; b < d; ++b) cov[a * d + b] += da * (rows.at(i, b) - mu[b]);
      }
    }
    const double denom = n > 2 ? (double)n - 2.0 : 1.0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) {
        cov[a * d + b] /= denom;
        cov[b * d + a] = cov[a * d + b];
      }

    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a) trace += cov[a * d + a];
    const double avg_var = trace / (double)d;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        cov[a * d + b] *= 1.0 - shrinkage;
        if (a == b) cov[a * d + b] += shrinkage * avg_var + 1e-6 * (avg_var > 0.0 ? avg_var : 1.0);
      }

    std::vector<double> diff(d);
    for (std::size_t c = 0; c < d; ++c) diff[c] = mu1[c] - mu0[c];
    model.weights_ = detail::cholesky_solve(cov, diff, d);

    double mid = 0.0;
    for (std::size_t c = 0; c < d; ++c) mid += model.weights_[c] * 0.5 * (mu0[c] + mu1[c]);
    model.bias_ = -mid + std::log(n1 / n0);
    return model;
  }

  int predict_row(std::span<const double> row) const override {
    double score = bias_;
    for (std::size_t c = 0; c < weights_.size(); ++c) score += weights_[c] * row[c];
    return score > 0.0 ? 1 : 0;
  }

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
};

/// L2-regularized logistic regression by full-batch gradient descent on
/// standardized features; keeps the best-so-far weights by training loss.
class LogisticRegression final : public Model {
 public:
  static LogisticRegression fit(const DataMatrix& rows, const std::vector<int>& labels,
                                double learning_rate, double l2, int iterations) {
    const std::size_t n = rows.rows, d = rows.cols;
    LogisticRegression model;
    model.scaler_.fit(rows);
    const DataMatrix x = model.scaler_.apply(rows);

    std::vector<double> w(d, 0.0), best_w(d, 0.0), grad(d, 0.0);
    double bias = 0.0, best_bias = 0.0;
    double best_loss = std::numeric_limits<double>::infinity();

    for (int it = 0; it < iterations; ++it) {
      double grad_bias = 0.0, loss = 0.0;
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        double z = bias;
        for (std::size_t c = 0; c < d; ++c) z += w[c] * x.at(i, c);
        const double p = sigmoid(z);
        const double y = labels[i] == 1 ? 1.0 : 0.0;
        const double err = p - y;
        grad_bias += err;
        for (std::size_t c = 0; c < d; ++c) grad[c] += err * x.at(i, c);
        loss -= y * std::log(clamp_prob(p)) + (1.0 - y) * std::log(clamp_prob(1.0 - p));
      }
      loss /= (double)n;
      for (std::size_t c = 0; c < d; ++c) loss += 0.5 * l2 * w[c] * w[c] / (double)n;
      if (loss < best_loss) {
        best_loss = loss;
        best_w = w;
        best_bias = bias;
      }
      for (std::size_t c = 0; c < d; ++c) w[c] -= learning_rate * (grad[c] + l2 * w[c]) / (double)n;
      bias -= learning_rate * grad_bias / (double)n;
    }

    // Keep the final point if it improved on every recorded one.
    {
      double loss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double z = bias;
        for (std::size_t c = 0; c < d; ++c) z += w[c] * x.at(i, c);
        const double p = sigmoid(z);
        const double y = labels[i] == 1 ? 1.0 : 0.0;
        loss -= y * std::log(clamp_prob(p)) + (1.0 - y) * std::log(clamp_prob(1.0 - p));
      }
      loss /= (double)n;
      for (std::size_t c = 0; c < d; ++c) loss += 0.5 * l2 * w[c] * w[c] / (double)n;
      if (loss < best_loss) {
        best_w = w;
        best_bias = bias;
      }
    }

    model.weights_ = best_w;
    model.bias_ = best_bias;
    return model;
  }

  int predict_row(std::span<const double> row) const override {
    scaler_.apply_row(row, scratch_);
    double z = bias_;
    for (std::size_t c = 0; c < weights_.size(); ++c) z += weights_[c] * scratch_[c];
    return z > 0.0 ? 1 : 0;
  }

 private:
  Standardizer scaler_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  mutable std::vector<double> scratch_;
};

/// Pegasos-style linear SVM: stochastic sub-gradient descent on the hinge
/// loss over standardized features, best epoch kept by objective value.
class LinearSvm final : public Model {
 public:
  static LinearSvm fit(const DataMatrix& rows, const std::vector<int>& labels, double lambda,
                       int epochs, std::uint64_t seed) {
    const std::size_t n = rows.rows, d = rows.cols;
    LinearSvm model;
    model.scaler_.fit(rows);
    const DataMatrix x = model.scaler_.apply(rows);

    std::vector<double> w(d, 0.0), best_w(d, 0.0);
    double bias = 0.0, best_bias = 0.0;
    double best_obj = std::numeric_limits<double>::infinity();
    Rng root(seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    std::size_t t = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
      Rng rng = root.stream("epoch_" + std::to_string(epoch));
      rng.shuffle(order);
      for (std::size_t i : order) {
        ++t;
        const double eta = 1.0 / (lambda * (double)t);
        const double y = labels[i] == 1 ? 1.0 : -1.0;
        double margin = bias;
        for (std::size_t c = 0; c < d; ++c) margin += w[c] * x.at(i, c);
        margin *= y;
        const double decay = 1.0 - eta * lambda;
        for (std::size_t c = 0; c < d; ++c) w[c] *= decay;
        if (margin < 1.0) {
          for (std::size_t c = 0; c < d; ++c) w[c] += eta * y * x.at(i, c);
          bias += eta * y;
        }
      }

      double hinge = 0.0, norm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double y = labels[i] == 1 ? 1.0 : -1.0;
        double margin = bias;
        for (std::size_t c = 0; c < d; ++c) margin += w[c] * x.at(i, c);
        hinge += std::max(0.0, 1.0 - y * margin);
      }
      for (std::size_t c = 0; c < d; ++c) norm += w[c] * w[c];
      const double obj = hinge / (double)n + 0.5 * lambda * norm;
      if (obj < best_obj) {
        best_obj = obj;
        best_w = w;
        best_bias = bias;
      }
    }

    model.weights_ = best_w;
    model.bias_ = best_bias;
    return model;
  }

  int predict_row(std::span<const double> row) const override {
    scaler_.apply_row(row, scratch_);
    double z = bias_;
    for (std::size_t c = 0; c < weights_.size(); ++c) z += weights_[c] * scratch_[c];
    return z > 0.0 ? 1 : 0;
  }

 private:
  Standardizer scaler_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  mutable std::vector<double> scratch_;
};

}  // namespace learners
}  // namespace irtpart

#endif
