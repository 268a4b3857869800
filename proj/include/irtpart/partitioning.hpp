#ifndef IRTPART_PARTITIONING_HPP
#define IRTPART_PARTITIONING_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "irtpart/calibrate.hpp"
#include "irtpart/common.hpp"
#include "irtpart/csv.hpp"
#include "irtpart/prng.hpp"

namespace irtpart {

enum class IrtParam { discrimination, difficulty, guessing };
enum class SplitMode { min_max, max_min, balanced, random };

inline double param_value(const ItemParameters& item, IrtParam p) {
  switch (p) {
    case IrtParam::discrimination: return item.discrimination;
    case IrtParam::difficulty: return item.difficulty;
    case IrtParam::guessing: return item.guessing;
  }
  return 0.0;
}

struct PartitionStrategy {
  SplitMode mode = SplitMode::random;
  IrtParam param = IrtParam::discrimination;  // ignored for random
  int seed = 0;                               // used only for random

  std::string name() const {
    if (mode == SplitMode::random) return "Random_" + std::to_string(seed);
    std::string prefix;
    switch (param) {
      case IrtParam::discrimination: prefix = "Dis"; break;
      case IrtParam::difficulty: prefix = "Dif"; break;
      case IrtParam::guessing: prefix = "Gues"; break;
    }
    switch (mode) {
      case SplitMode::min_max: return prefix + "_min_max";
      case SplitMode::max_min: return prefix + "_max_min";
      case SplitMode::balanced: return prefix + "_balanced";
      default: return prefix;
    }
  }

  friend bool operator==(const PartitionStrategy& x, const PartitionStrategy& y) {
    if (x.mode != y.mode) return false;
    if (x.mode == SplitMode::random) return x.seed == y.seed;
    return x.param == y.param;
  }
};

inline PartitionStrategy parse_strategy(std::string_view name) {
  PartitionStrategy s;
  if (name.rfind("Random_", 0) == 0) {
    s.mode = SplitMode::random;
    s.seed = (int)parse_int64(name.substr(7));
    if (s.seed < 0) throw DataError("strategy: negative random seed");
    return s;
  }
  std::size_t us = name.find('_');
  if (us == std::string_view::npos) throw DataError("unknown strategy '" + std::string(name) + "'");
  const std::string_view prefix = name.substr(0, us);
  const std::string_view mode = name.substr(us + 1);
  if (prefix == "Dis")
    s.param = IrtParam::discrimination;
  else if (prefix == "Dif")
    s.param = IrtParam::difficulty;
  else if (prefix == "Gues")
    s.param = IrtParam::guessing;
  else
    throw DataError("unknown strategy '" + std::string(name) + "'");
  if (mode == "min_max")
    s.mode = SplitMode::min_max;
  else if (mode == "max_min")
    s.mode = SplitMode::max_min;
  else if (mode == "balanced")
    s.mode = SplitMode::balanced;
  else
    throw DataError("unknown strategy '" + std::string(name) + "'");
  return s;
}

/// The twelve canonical strategies: Dis/Dif/Gues x min_max/max_min/balanced,
/// then Random_0..2.
inline std::vector<PartitionStrategy> enumerate_strategies() {
  std::vector<PartitionStrategy> out;
  for (IrtParam p : {IrtParam::discrimination, IrtParam::difficulty, IrtParam::guessing})
    for (SplitMode m : {SplitMode::min_max, SplitMode::max_min, SplitMode::balanced})
      out.push_back({m, p, 0});
  for (int seed = 0; seed < 3; ++seed) out.push_back({SplitMode::random, IrtParam::discrimination, seed});
  return out;
}

struct InstanceProvenance {
  std::string instance_id;
  double param_value = 0.0;
  int label = 0;
  std::size_t rank_in_class = 0;  // position in the per-class ordering used
};

struct PartitionPlan {
  PartitionStrategy strategy;
  std::vector<std::string> train_ids, test_ids;  // each in dataset order
  double ratio = 0.7;
  std::vector<InstanceProvenance> provenance;  // dataset order
};

inline std::size_t round_half_up(double x) { return (std::size_t)std::floor(x + 0.5); }

namespace detail {

struct SplitScratch {
  std::vector<std::size_t> order;      // per-class instance indices, sorted
  std::vector<char> in_train;          // by dataset index
};

inline std::vector<std::size_t> class_indices(const std::vector<int>& labels, int cls) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == cls) out.push_back(i);
  return out;
}

inline PartitionPlan finish_plan(PartitionStrategy strategy, double ratio,
                                 const std::vector<std::string>& ids,
                                 const std::vector<int>& labels,
                                 const std::vector<double>& values,
                                 const std::vector<std::size_t>& rank,
                                 const std::vector<char>& in_train) {
  PartitionPlan plan;
  plan.strategy = strategy;
  plan.ratio = ratio;
  plan.provenance.resize(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    plan.provenance[i] = {ids[i], values[i], labels[i], rank[i]};
    (in_train[i] ? plan.train_ids : plan.test_ids).push_back(ids[i]);
  }
  return plan;
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Per class: order by (parameter, instance_id) in the given direction and
/// send the first round(ratio * n_c) to train. Ascending = min_max (train low,
/// test high); descending = max_min.
inline PartitionPlan split_ordered(const std::vector<ItemParameters>& items,
                                   const std::vector<int>& labels, IrtParam param, bool ascending,
                                   double ratio = 0.7) {
  if (items.size() != labels.size()) throw Error("split_ordered: items/labels size mismatch");
  const std::size_t n = items.size();
  std::vector<std::string> ids(n);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids[i] = items[i].item_id;
    values[i] = param_value(items[i], param);
  }

  std::vector<char> in_train(n, 0);
  std::vector<std::size_t> rank(n, 0);
  for (int cls : {0, 1}) {
    auto idx = detail::class_indices(labels, cls);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      if (values[x] != values[y]) return ascending ? values[x] < values[y] : values[x] > values[y];
      return ids[x] < ids[y];
    });
    const std::size_t n_train = round_half_up(ratio * (double)idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      rank[idx[j]] = j;
      in_train[idx[j]] = j < n_train ? 1 : 0;
    }
  }

  PartitionStrategy strategy{ascending ? SplitMode::min_max : SplitMode::max_min, param, 0};
  return detail::finish_plan(strategy, ratio, ids, labels, values, rank, in_train);
}

/// Per class: ascending order, then systematic interleave — in each
/// consecutive window of 10, positions {3,6,9} go to test — followed by a
/// count correction that moves the surplus-side instances closest to the
/// other side's parameter median.
inline PartitionPlan split_balanced(const std::vector<ItemParameters>& items,
                                    const std::vector<int>& labels, IrtParam param,
                                    double ratio = 0.7) {
  if (items.size() != labels.size()) throw Error("split_balanced: items/labels size mismatch");
  const std::size_t n = items.size();
  std::vector<std::string> ids(n);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids[i] = items[i].item_id;
    values[i] = param_value(items[i], param);
  }

  std::vector<char> in_train(n, 0);
  std::vector<std::size_t> rank(n, 0);
  for (int cls : {0, 1}) {
    auto idx = detail::class_indices(labels, cls);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      if (values[x] != values[y]) return values[x] < values[y];
      return ids[x] < ids[y];
    });
    for (std::size_t j = 0; j < idx.size(); ++j) {
      rank[idx[j]] = j;
      const std::size_t pos = j % 10;
      in_train[idx[j]] = (pos == 3 || pos == 6 || pos == 9) ? 0 : 1;
    }

    // Correct the per-class count to exactly round(ratio * n_c): move the
    // surplus-side members nearest (by parameter) to the other side's median,
    // ties broken by instance_id.
    const std::size_t target_train = round_half_up(ratio * (double)idx.size());
    std::size_t have_train = 0;
    for (std::size_t i : idx) have_train += in_train[i] ? 1 : 0;

    while (have_train != target_train) {
      const bool surplus_in_train = have_train > target_train;
      std::vector<double> other_vals;
      for (std::size_t i : idx)
        if (in_train[i] == (surplus_in_train ? 0 : 1)) other_vals.push_back(values[i]);
      const double med = detail::median_of(std::move(other_vals));

      std::size_t best = idx.size();
      for (std::size_t j = 0; j < idx.size(); ++j) {
        const std::size_t i = idx[j];
        if (in_train[i] != (surplus_in_train ? 1 : 0)) continue;
        if (best == idx.size() || std::abs(values[i] - med) < std::abs(values[idx[best]] - med) ||
            (std::abs(values[i] - med) == std::abs(values[idx[best]] - med) && ids[i] < ids[idx[best]]))
          best = j;
      }
      in_train[idx[best]] = surplus_in_train ? 0 : 1;
      have_train += surplus_in_train ? (std::size_t)-1 : 1;
    }
  }

  PartitionStrategy strategy{SplitMode::balanced, param, 0};
  return detail::finish_plan(strategy, ratio, ids, labels, values, rank, in_train);
}

/// Per class: seeded shuffle, first round(ratio * n_c) to train. Depends only
/// on (ids, labels, seed), never on item parameters.
inline PartitionPlan split_random(const std::vector<std::string>& ids, const std::vector<int>& labels,
                                  int seed, double ratio = 0.7) {
  if (ids.size() != labels.size()) throw Error("split_random: ids/labels size mismatch");
  const std::size_t n = ids.size();
  std::vector<double> values(n, 0.0);

  std::vector<char> in_train(n, 0);
  std::vector<std::size_t> rank(n, 0);
  Rng root((std::uint64_t)seed);
  for (int cls : {0, 1}) {
    auto idx = detail::class_indices(labels, cls);
    Rng rng = root.stream(cls == 0 ? "class_0" : "class_1");
    rng.shuffle(idx);
    const std::size_t n_train = round_half_up(ratio * (double)idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      rank[idx[j]] = j;
      in_train[idx[j]] = j < n_train ? 1 : 0;
    }
  }

  PartitionStrategy strategy{SplitMode::random, IrtParam::discrimination, seed};
  return detail::finish_plan(strategy, ratio, ids, labels, values, rank, in_train);
}

/// Dispatch one canonical strategy.
inline PartitionPlan make_partition(const std::vector<ItemParameters>& items,
                                    const std::vector<int>& labels, PartitionStrategy strategy,
                                    double ratio = 0.7) {
  switch (strategy.mode) {
    case SplitMode::min_max: return split_ordered(items, labels, strategy.param, true, ratio);
    case SplitMode::max_min: return split_ordered(items, labels, strategy.param, false, ratio);
    case SplitMode::balanced: return split_balanced(items, labels, strategy.param, ratio);
    case SplitMode::random: {
      std::vector<std::string> ids(items.size());
      for (std::size_t i = 0; i < items.size(); ++i) ids[i] = items[i].item_id;
      return split_random(ids, labels, strategy.seed, ratio);
    }
  }
  throw Error("make_partition: unreachable");
}

inline std::string partition_to_csv(const PartitionPlan& plan) {
  std::string out = "instance_id,assignment\n";
  std::size_t t = 0;
  for (const auto& p : plan.provenance) {
    // train_ids preserves dataset order, so a single cursor suffices.
    const bool train = t < plan.train_ids.size() && plan.train_ids[t] == p.instance_id;
    if (train) ++t;
    out += csv_row({p.instance_id, train ? "train" : "test"});
  }
  return out;
}

}  // namespace irtpart

#endif
