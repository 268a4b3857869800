#ifndef IRTPART_ZOO_HPP
#define IRTPART_ZOO_HPP

#include <string>
#include <vector>

#include "irtpart/dataset.hpp"
#include "irtpart/learners.hpp"
#include "irtpart/response_matrix.hpp"

namespace irtpart {

inline std::vector<std::string> make_model_ids(const std::vector<LearnerSpec>& specs) {
  std::size_t width = 1;
  for (std::size_t v = specs.size() > 0 ? specs.size() - 1 : 0; v >= 10; v /= 10) ++width;
  std::vector<std::string> ids(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::string num = std::to_string(i);
    ids[i] = "m" + std::string(width - num.size(), '0') + num + "_" + specs[i].family;
  }
  return ids;
}

/// Cross-validated response matrix: for each fold, every spec is trained on
/// the complement and scored on the held-out instances; cell = 1 iff the
/// prediction matches the truth.
inline ResponseMatrix build_response_matrix(const Dataset& dataset, const FoldAssignment& folds,
                                            const std::vector<LearnerSpec>& specs) {
  if (specs.empty()) throw Error("build_response_matrix: no specs");
  if (folds.fold_of.size() != dataset.size())
    throw Error("build_response_matrix: fold assignment does not cover the dataset");

  ResponseMatrix matrix;
  matrix.model_ids = make_model_ids(specs);
  matrix.item_ids = dataset.instance_ids;
  matrix.fold_of_item = folds.fold_of;
  matrix.cells.assign(specs.size() * dataset.size(), 0);

  for (int fold = 0; fold < folds.fold_count; ++fold) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < dataset.size(); ++i)
      (folds.fold_of[i] == fold ? test_idx : train_idx).push_back(i);
    if (test_idx.empty()) continue;
    if (train_idx.size() < 2)
      throw Error("build_response_matrix: fold " + std::to_string(fold) + " leaves fewer than two training rows");

    const DataMatrix train_rows = dataset.rows.select_rows(train_idx);
    const std::vector<int> train_labels = select(dataset.labels, train_idx);
    const DataMatrix test_rows = dataset.rows.select_rows(test_idx);

    for (std::size_t m = 0; m < specs.size(); ++m) {
      ModelPtr model;
      try {
        model = train(specs[m], train_rows, train_labels);
      } catch (const std::exception& e) {
        throw StageError("training failed for model " + matrix.model_ids[m] + " on fold " +
                         std::to_string(fold) + ": " + e.what());
      }
      const std::vector<int> pred = predict(*model, test_rows);
      for (std::size_t j = 0; j < test_idx.size(); ++j)
        matrix.at(m, test_idx[j]) = pred[j] == dataset.labels[test_idx[j]] ? 1 : 0;
    }
  }
  return matrix;
}

}  // namespace irtpart

#endif
