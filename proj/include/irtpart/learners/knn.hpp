#ifndef IRTPART_LEARNERS_KNN_HPP
#define IRTPART_LEARNERS_KNN_HPP

#include <algorithm>
#include <vector>

#include "irtpart/learners/common.hpp"

namespace irtpart {
namespace learners {

/// kNN with Euclidean distance and majority vote. Equal distances are broken
/// by lower training-row index; a split vote falls to the nearest neighbor.
class Knn final : public Model {
 public:
  static Knn fit(const DataMatrix& rows, const std::vector<int>& labels, int k) {
    if (k < 1) throw Error("knn: k must be positive");
    Knn model;
    model.rows_ = rows;
    model.labels_ = labels;
    model.k_ = std::min<std::size_t>((std::size_t)k, rows.rows);
    return model;
  }

  int predict_row(std::span<const double> row) const override {
    const std::size_t n = rows_.rows;
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
      double d = 0.0;
      for (std::size_t c = 0; c < rows_.cols; ++c) {
        const double diff = rows_.at(i, c) - row[c];
        d += diff * diff;
      }
      dist[i] = {d, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + (std::ptrdiff_t)k_, dist.end());
    std::size_t ones = 0;
    for (std::size_t j = 0; j < k_; ++j) ones += labels_[dist[j].second] == 1 ? 1 : 0;
    if (2 * ones == k_) return labels_[dist[0].second];
    return 2 * ones > k_ ? 1 : 0;
  }

 private:
  DataMatrix rows_;
  std::vector<int> labels_;
  std::size_t k_ = 1;
};

}  // namespace learners
}  // namespace irtpart

#endif
