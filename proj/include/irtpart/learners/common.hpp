#ifndef IRTPART_LEARNERS_COMMON_HPP
#define IRTPART_LEARNERS_COMMON_HPP

#include <cmath>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "irtpart/common.hpp"
#include "irtpart/matrix.hpp"
#include "irtpart/prng.hpp"

namespace irtpart {

struct LearnerSpec {
  std::string family;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;  // sorted -> deterministic serialization

  double get(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) throw Error("spec " + family + ": missing hyperparameter '" + name + "'");
    return it->second;
  }
  int get_int(const std::string& name) const { return (int)std::llround(get(name)); }
};

/// A fitted classifier: hard 0/1 label per row, pure and deterministic.
class Model {
 public:
  virtual ~Model() = default;
  virtual int predict_row(std::span<const double> row) const = 0;
  // Per-member votes for ensemble debugging; singletons report themselves.
  virtual std::vector<int> member_votes(std::span<const double> row) const {
    return {predict_row(row)};
  }
};

using ModelPtr = std::unique_ptr<Model>;

inline std::vector<int> predict(const Model& model, const DataMatrix& rows) {
  std::vector<int> out(rows.rows);
  for (std::size_t r = 0; r < rows.rows; ++r) out[r] = model.predict_row(rows.row(r));
  return out;
}

namespace learners {

class ConstantModel final : public Model {
 public:
  explicit ConstantModel(int label) : label_(label) {}
  int predict_row(std::span<const double>) const override { return label_; }

 private:
  int label_;
};

inline int majority_label(const std::vector<int>& labels) {
  std::size_t pos = 0;
  for (int l : labels) pos += l == 1 ? 1 : 0;
  const std::size_t neg = labels.size() - pos;
  return pos > neg ? 1 : 0;  // tie -> negative class
}

/// Per-feature train-set standardization; zero-variance features pass through.
struct Standardizer {
  std::vector<double> mean, scale;

  void fit(const DataMatrix& rows) {
    mean.assign(rows.cols, 0.0);
    scale.assign(rows.cols, 1.0);
    if (rows.rows == 0) return;
    for (std::size_t r = 0; r < rows.rows; ++r)
      for (std::size_t c = 0; c < rows.cols; ++c) mean[c] += rows.at(r, c);
    for (double& m : mean) m /= (double)rows.rows;
    std::vector<double> var(rows.cols, 0.0);
    for (std::size_t r = 0; r < rows.rows; ++r)
      for (std::size_t c = 0; c < rows.cols; ++c) {
        const double d = rows.at(r, c) - mean[c];
        var[c] += d * d;
      }
    for (std::size_t c = 0; c < rows.cols; ++c) {
      const double sd = std::sqrt(var[c] / (double)rows.rows);
      scale[c] = sd > 0.0 ? sd : 1.0;
    }
  }

  DataMatrix apply(const DataMatrix& rows) const {
    DataMatrix out = rows;
    for (std::size_t r = 0; r < out.rows; ++r)
      for (std::size_t c = 0; c < out.cols; ++c) out.at(r, c) = (out.at(r, c) - mean[c]) / scale[c];
    return out;
  }

  void apply_row(std::span<const double> row, std::vector<double>& out) const {
    out.resize(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) out[c] = (row[c] - mean[c]) / scale[c];
  }
};

inline bool single_class(const std::vector<int>& labels) {
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (labels[i] != labels[0]) return false;
  return true;
}

}  // namespace learners
}  // namespace irtpart

#endif
