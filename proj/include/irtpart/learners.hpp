#ifndef IRTPART_LEARNERS_HPP
#define IRTPART_LEARNERS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "irtpart/common.hpp"
#include "irtpart/csv.hpp"
#include "irtpart/learners/common.hpp"
#include "irtpart/learners/ensembles.hpp"
#include "irtpart/learners/knn.hpp"
#include "irtpart/learners/linear.hpp"
#include "irtpart/learners/mlp.hpp"
#include "irtpart/learners/tree.hpp"
#include "irtpart/prng.hpp"

namespace irtpart {

struct HyperParam {
  enum class Kind { integer, real, logreal, categorical };
  std::string name;
  Kind kind = Kind::real;
  double lo = 0.0, hi = 0.0;            // bounds for integer/real/logreal
  std::vector<double> categories;       // for categorical
};

struct HyperParamSpace {
  std::string family;
  std::vector<HyperParam> params;  // declaration order = sampling order
};

/// The ten built-in families, canonical order.
inline const std::vector<std::string>& canonical_families() {
  static const std::vector<std::string> families = {
      "decision_tree", "random_forest", "bagging",        "adaboost",   "gradient_boosting",
      "knn",           "lda",           "logistic_regression", "linear_svm", "mlp"};
  return families;
}

/// Built-in hyperparameter manifest; the file format parsed by
/// parse_manifest uses the same text.
inline const char* default_manifest() {
  return R"(# Hyperparameter domains per learner family.
# kinds: int lo hi | real lo hi | logreal lo hi | cat v1,v2,...

[decision_tree]
max_depth = int 1 20
min_samples_leaf = int 1 10

[random_forest]
n_estimators = int 5 100
max_depth = int 2 20

[bagging]
n_estimators = int 5 50
max_depth = int 1 20

[adaboost]
n_estimators = int 10 200
learning_rate = logreal 0.01 1.0

[gradient_boosting]
n_estimators = int 10 200
learning_rate = logreal 0.01 0.5

[knn]
k = cat 1,3,5,7,9,11,13,15,17,19,21,23,25

[lda]
shrinkage = real 0.0 0.9

[logistic_regression]
learning_rate = logreal 0.001 1.0
l2 = logreal 0.000001 10.0
iterations = int 50 500

[linear_svm]
lambda = logreal 0.0001 1.0
epochs = int 5 50

[mlp]
hidden_units = int 2 48
learning_rate = logreal 0.001 1.0
epochs = int 20 120
)";
}

inline std::vector<HyperParamSpace> parse_manifest(std::string_view text) {
  std::vector<HyperParamSpace> spaces;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw DataError("manifest line " + std::to_string(line_no) + ": malformed section");
      spaces.push_back({std::string(trim(line.substr(1, line.size() - 2))), {}});
      continue;
    }
    if (spaces.empty()) throw DataError("manifest line " + std::to_string(line_no) + ": parameter before any [family]");

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw DataError("manifest line " + std::to_string(line_no) + ": expected 'name = kind ...'");
    HyperParam hp;
    hp.name = std::string(trim(line.substr(0, eq)));
    std::string_view rest = trim(line.substr(eq + 1));
    const std::size_t sp = rest.find_first_of(" \t");
    const std::string_view kind = sp == std::string_view::npos ? rest : rest.substr(0, sp);
    std::string_view args = sp == std::string_view::npos ? std::string_view{} : trim(rest.substr(sp + 1));

    if (kind == "cat") {
      hp.kind = HyperParam::Kind::categorical;
      std::size_t p = 0;
      while (p <= args.size()) {
        std::size_t comma = args.find(',', p);
        if (comma == std::string_view::npos) comma = args.size();
        hp.categories.push_back(parse_double(trim(args.substr(p, comma - p))));
        p = comma + 1;
      }
      if (hp.categories.empty())
        throw DataError("manifest line " + std::to_string(line_no) + ": empty categorical domain");
    } else {
      if (kind == "int")
        hp.kind = HyperParam::Kind::integer;
      else if (kind == "real")
        hp.kind = HyperParam::Kind::real;
      else if (kind == "logreal")
        hp.kind = HyperParam::Kind::logreal;
      else
        throw DataError("manifest line " + std::to_string(line_no) + ": unknown kind '" + std::string(kind) + "'");
      const std::size_t mid = args.find_first_of(" \t");
      if (mid == std::string_view::npos)
        throw DataError("manifest line " + std::to_string(line_no) + ": expected two bounds");
      hp.lo = parse_double(trim(args.substr(0, mid)));
      hp.hi = parse_double(trim(args.substr(mid + 1)));
      if (hp.lo > hp.hi) throw DataError("manifest line " + std::to_string(line_no) + ": lo > hi");
      if (hp.kind == HyperParam::Kind::logreal && hp.lo <= 0.0)
        throw DataError("manifest line " + std::to_string(line_no) + ": logreal needs positive bounds");
    }
    spaces.back().params.push_back(std::move(hp));
  }
  return spaces;
}

inline const HyperParamSpace& find_space(const std::vector<HyperParamSpace>& spaces,
                                         const std::string& family) {
  for (const auto& s : spaces)
    if (s.family == family) return s;
  throw Error("unknown learner family '" + family + "'");
}

inline double sample_param(const HyperParam& hp, Rng& rng) {
  switch (hp.kind) {
    case HyperParam::Kind::integer:
      return (double)((std::int64_t)hp.lo + (std::int64_t)rng.next_below((std::uint64_t)(hp.hi - hp.lo) + 1));
    case HyperParam::Kind::real: return hp.lo + rng.next_double() * (hp.hi - hp.lo);
    case HyperParam::Kind::logreal:
      return std::exp(std::log(hp.lo) + rng.next_double() * (std::log(hp.hi) - std::log(hp.lo)));
    case HyperParam::Kind::categorical: return hp.categories[rng.next_below(hp.categories.size())];
  }
  return hp.lo;
}

/// Draw `count` specs spread as evenly as possible over `families` (the
/// count % families extras go to the first families in order), parameters
/// sampled from each family's space by labeled streams of `seed`.
inline std::vector<LearnerSpec> sample_random_models(std::size_t count,
                                                     const std::vector<std::string>& families,
                                                     std::uint64_t seed,
                                                     const std::vector<HyperParamSpace>& spaces) {
  if (families.empty()) throw Error("sample_random_models: no families");
  if (count < families.size()) throw Error("sample_random_models: count below family count");
  for (const auto& f : families) find_space(spaces, f);  // validate before sampling

  Rng root(seed);
  std::vector<LearnerSpec> specs;
  specs.reserve(count);
  const std::size_t base = count / families.size();
  const std::size_t extra = count % families.size();
  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    const auto& space = find_space(spaces, families[fi]);
    const std::size_t family_count = base + (fi < extra ? 1 : 0);
    for (std::size_t j = 0; j < family_count; ++j) {
      Rng rng = root.stream(families[fi] + "_" + std::to_string(j));
      LearnerSpec spec;
      spec.family = families[fi];
      for (const auto& hp : space.params) spec.params[hp.name] = sample_param(hp, rng);
      spec.seed = rng.next_u64();
      specs.push_back(std::move(spec));
    }
  }
  return specs;
}

inline std::vector<LearnerSpec> sample_random_models(std::size_t count,
                                                     const std::vector<std::string>& families,
                                                     std::uint64_t seed) {
  static const std::vector<HyperParamSpace> spaces = parse_manifest(default_manifest());
  return sample_random_models(count, families, seed, spaces);
}

/// Train one spec. Single-class training data yields a constant model for
/// every family.
inline ModelPtr train(const LearnerSpec& spec, const DataMatrix& rows, const std::vector<int>& labels) {
  using namespace learners;
  if (rows.rows != labels.size()) throw Error("train: rows/labels size mismatch");
  if (rows.rows < 2) throw Error("train: need at least two training instances");
  if (single_class(labels)) return std::make_unique<ConstantModel>(labels[0]);

  const std::string& f = spec.family;
  if (f == "decision_tree") {
    TreeConfig cfg{spec.get_int("max_depth"), spec.get_int("min_samples_leaf"), 0};
    return std::make_unique<DecisionTree>(DecisionTree::fit(rows, labels, cfg));
  }
  if (f == "random_forest") {
    const int mtry = std::max(1, (int)std::floor(std::sqrt((double)rows.cols)));
    TreeConfig cfg{spec.get_int("max_depth"), 1, mtry};
    return std::make_unique<TreeEnsemble>(
        TreeEnsemble::fit(rows, labels, spec.get_int("n_estimators"), cfg, spec.seed));
  }
  if (f == "bagging") {
    TreeConfig cfg{spec.get_int("max_depth"), 1, 0};
    return std::make_unique<TreeEnsemble>(
        TreeEnsemble::fit(rows, labels, spec.get_int("n_estimators"), cfg, spec.seed));
  }
  if (f == "adaboost")
    return std::make_unique<AdaBoost>(
        AdaBoost::fit(rows, labels, spec.get_int("n_estimators"), spec.get("learning_rate")));
  if (f == "gradient_boosting")
    return std::make_unique<GradientBoosting>(
        GradientBoosting::fit(rows, labels, spec.get_int("n_estimators"), spec.get("learning_rate")));
  if (f == "knn") return std::make_unique<Knn>(Knn::fit(rows, labels, spec.get_int("k")));
  if (f == "lda") return std::make_unique<Lda>(Lda::fit(rows, labels, spec.get("shrinkage")));
  if (f == "logistic_regression")
    return std::make_unique<LogisticRegression>(LogisticRegression::fit(
        rows, labels, spec.get("learning_rate"), spec.get("l2"), spec.get_int("iterations")));
  if (f == "linear_svm")
    return std::make_unique<LinearSvm>(
        LinearSvm::fit(rows, labels, spec.get("lambda"), spec.get_int("epochs"), spec.seed));
  if (f == "mlp")
    return std::make_unique<Mlp>(Mlp::fit(rows, labels, spec.get_int("hidden_units"),
                                          spec.get("learning_rate"), spec.get_int("epochs"), spec.seed));
  throw Error("unknown learner family '" + f + "'");
}

/// A fitted model plus its provenance.
struct TrainedModel {
  LearnerSpec spec;
  ModelPtr state;
  std::uint64_t training_fingerprint = 0;  // hash of the training instance_ids
};

inline TrainedModel train_tracked(const LearnerSpec& spec, const DataMatrix& rows,
                                  const std::vector<int>& labels,
                                  const std::vector<std::string>& instance_ids) {
  TrainedModel tm;
  tm.spec = spec;
  tm.state = train(spec, rows, labels);
  std::string joined;
  for (const auto& id : instance_ids) {
    joined += id;
    joined += '\n';
  }
  tm.training_fingerprint = fnv1a64(joined);
  return tm;
}

inline std::string format_param_value(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string((std::int64_t)v);
  return format_double(v);
}

/// Spec list CSV: model_id,family,seed,params with params as `k=v;k=v`.
inline std::string specs_to_csv(const std::vector<std::string>& model_ids,
                                const std::vector<LearnerSpec>& specs) {
  if (model_ids.size() != specs.size()) throw Error("specs_to_csv: id/spec count mismatch");
  std::string out = "model_id,family,seed,params\n";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::string params;
    for (const auto& [name, value] : specs[i].params) {
      if (!params.empty()) params += ';';
      params += name + "=" + format_param_value(value);
    }
    out += csv_row({model_ids[i], specs[i].family, std::to_string(specs[i].seed), params});
  }
  return out;
}

inline std::vector<std::pair<std::string, LearnerSpec>> specs_from_csv(std::string_view text) {
  const auto records = parse_csv_records(text);
  if (records.empty() || records[0] != std::vector<std::string>{"model_id", "family", "seed", "params"})
    throw DataError("spec list: bad header");
  std::vector<std::pair<std::string, LearnerSpec>> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != 4) throw DataError("spec list: row " + std::to_string(r + 1) + " malformed");
    LearnerSpec spec;
    spec.family = rec[1];
    spec.seed = parse_uint64(rec[2]);
    std::string_view params = rec[3];
    std::size_t p = 0;
    while (p < params.size()) {
      std::size_t semi = params.find(';', p);
      if (semi == std::string_view::npos) semi = params.size();
      const std::string_view pair = params.substr(p, semi - p);
      const std::size_t eq = pair.find('=');
      if (eq == std::string_view::npos) throw DataError("spec list: malformed param '" + std::string(pair) + "'");
      spec.params[std::string(pair.substr(0, eq))] = parse_double(pair.substr(eq + 1));
      p = semi + 1;
    }
    out.emplace_back(rec[0], std::move(spec));
  }
  return out;
}

}  // namespace irtpart

#endif
