#ifndef IRTPART_EVALUATION_HPP
#define IRTPART_EVALUATION_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "irtpart/dataset.hpp"
#include "irtpart/learners.hpp"
#include "irtpart/metrics.hpp"
#include "irtpart/partitioning.hpp"

namespace irtpart {

struct TuningConfig {
  std::size_t samples_per_family = 30;
  int inner_folds = 5;
  std::string selection_metric = "accuracy";
  std::uint64_t seed = 0;
};

inline double metric_by_name(const MetricSet& m, const std::string& name) {
  if (name == "accuracy") return m.accuracy;
  if (name == "precision") return m.precision;
  if (name == "recall") return m.recall;
  if (name == "f1") return m.f1;
  if (name == "mcc") return m.mcc;
  throw Error("unknown selection metric '" + name + "'");
}

/// Random grid search over one family: sample specs, score each by mean
/// selection metric over inner stratified CV folds of the training data,
/// return the best (first sampled wins ties). Never sees test rows.
inline LearnerSpec random_grid_search(const std::string& family, const DataMatrix& train_rows,
                                      const std::vector<int>& train_labels, const TuningConfig& config,
                                      const std::vector<HyperParamSpace>& spaces) {
  if (config.samples_per_family < 1) throw Error("random_grid_search: need at least one sample");
  if (config.inner_folds < 2) throw Error("random_grid_search: need at least two inner folds");
  if (learners::single_class(train_labels))
    throw Error("random_grid_search: training partition has a single class");

  const auto specs = sample_random_models(config.samples_per_family, {family}, config.seed, spaces);

  // Inner folds are shared by every candidate so scores are paired.
  std::size_t pos = 0;
  for (int l : train_labels) pos += l == 1 ? 1 : 0;
  const std::size_t minority = std::min(pos, train_labels.size() - pos);
  const int folds = std::min<int>(config.inner_folds, (int)minority);

  std::vector<double> scores(specs.size(), 0.0);
  if (folds >= 2) {
    Rng fold_rng(derive_seed(config.seed, "inner_folds"));
    const FoldAssignment fa = stratified_folds(train_labels, folds, fold_rng);
    for (int k = 0; k < folds; ++k) {
      std::vector<std::size_t> fit_idx, val_idx;
      for (std::size_t i = 0; i < train_labels.size(); ++i)
        (fa.fold_of[i] == k ? val_idx : fit_idx).push_back(i);
      const DataMatrix fit_rows = train_rows.select_rows(fit_idx);
      const std::vector<int> fit_labels = select(train_labels, fit_idx);
      const DataMatrix val_rows = train_rows.select_rows(val_idx);
      const std::vector<int> val_labels = select(train_labels, val_idx);
      for (std::size_t s = 0; s < specs.size(); ++s) {
        const ModelPtr model = train(specs[s], fit_rows, fit_labels);
        const MetricSet m = compute_metrics(val_labels, predict(*model, val_rows));
        scores[s] += metric_by_name(m, config.selection_metric);
      }
    }
    for (double& s : scores) s /= (double)folds;
  } else {
    // Too few minority instances to stratify: fall back to resubstitution.
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const ModelPtr model = train(specs[s], train_rows, train_labels);
      const MetricSet m = compute_metrics(train_labels, predict(*model, train_rows));
      scores[s] = metric_by_name(m, config.selection_metric);
    }
  }

  std::size_t best = 0;
  for (std::size_t s = 1; s < specs.size(); ++s)
    if (scores[s] > scores[best]) best = s;
  return specs[best];
}

struct EvaluationEntry {
  std::string strategy;
  std::string family;
  bool ok = false;
  std::string error;
  LearnerSpec spec;
  MetricSet train_metrics, test_metrics;
};

/// Tune, refit, and score every family on one partition plan. Family
/// failures are recorded in the entry rather than aborting the run.
inline std::vector<EvaluationEntry> evaluate_partition(const Dataset& dataset,
                                                       const PartitionPlan& plan,
                                                       const std::vector<std::string>& families,
                                                       const TuningConfig& config,
                                                       const std::vector<HyperParamSpace>& spaces) {
  std::unordered_map<std::string, std::size_t> row_of;
  row_of.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) row_of[dataset.instance_ids[i]] = i;

  auto lookup = [&](const std::vector<std::string>& ids) {
    std::vector<std::size_t> idx;
    idx.reserve(ids.size());
    for (const auto& id : ids) {
      auto it = row_of.find(id);
      if (it == row_of.end()) throw Error("evaluate_partition: unknown instance id '" + id + "'");
      idx.push_back(it->second);
    }
    return idx;
  };
  const auto train_idx = lookup(plan.train_ids);
  const auto test_idx = lookup(plan.test_ids);
  if (train_idx.size() + test_idx.size() != dataset.size())
    throw Error("evaluate_partition: plan does not cover the dataset");

  const DataMatrix train_rows = dataset.rows.select_rows(train_idx);
  const std::vector<int> train_labels = select(dataset.labels, train_idx);
  const DataMatrix test_rows = dataset.rows.select_rows(test_idx);
  const std::vector<int> test_labels = select(dataset.labels, test_idx);

  std::vector<EvaluationEntry> entries;
  entries.reserve(families.size());
  for (const auto& family : families) {
    EvaluationEntry entry;
    entry.strategy = plan.strategy.name();
    entry.family = family;
    try {
      TuningConfig family_config = config;
      family_config.seed = derive_seed(config.seed, family);
      entry.spec = random_grid_search(family, train_rows, train_labels, family_config, spaces);
      const ModelPtr model = train(entry.spec, train_rows, train_labels);
      entry.train_metrics = compute_metrics(train_labels, predict(*model, train_rows));
      entry.test_metrics = compute_metrics(test_labels, predict(*model, test_rows));
      entry.ok = true;
    } catch (const std::exception& e) {
      entry.ok = false;
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace irtpart

#endif
