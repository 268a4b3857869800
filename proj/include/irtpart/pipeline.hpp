#ifndef IRTPART_PIPELINE_HPP
#define IRTPART_PIPELINE_HPP

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>
#include <unistd.h>

#include "irtpart/arff.hpp"
#include "irtpart/calibrate.hpp"
#include "irtpart/common.hpp"
#include "irtpart/config.hpp"
#include "irtpart/csv.hpp"
#include "irtpart/dataset.hpp"
#include "irtpart/digest.hpp"
#include "irtpart/evaluation.hpp"
#include "irtpart/learners.hpp"
#include "irtpart/openml.hpp"
#include "irtpart/partitioning.hpp"
#include "irtpart/stats.hpp"
#include "irtpart/zoo.hpp"

namespace irtpart {

inline constexpr const char* kToolName = "irt-partition";
inline constexpr const char* kToolVersion = "1.0.0";

/// Artifact layout inside one run directory.
struct RunPaths {
  std::filesystem::path root;

  explicit RunPaths(std::filesystem::path r) : root(std::move(r)) {}
  std::filesystem::path dataset_csv() const { return root / "dataset.csv"; }
  std::filesystem::path dataset_meta_json() const { return root / "dataset_meta.json"; }
  std::filesystem::path folds_csv() const { return root / "folds.csv"; }
  std::filesystem::path model_specs_csv() const { return root / "model_specs.csv"; }
  std::filesystem::path response_matrix_csv() const { return root / "response_matrix.csv"; }
  std::filesystem::path matrix_diagnostics_csv() const { return root / "matrix_diagnostics.csv"; }
  std::filesystem::path item_parameters_csv() const { return root / "item_parameters.csv"; }
  std::filesystem::path calibration_summary_json() const { return root / "calibration_summary.json"; }
  std::filesystem::path partitions_dir() const { return root / "partitions"; }
  std::filesystem::path partition_csv(const std::string& name) const {
    return partitions_dir() / (name + ".csv");
  }
  std::filesystem::path report_json() const { return root / "report.json"; }
  std::filesystem::path report_csv() const { return root / "report.csv"; }
  std::filesystem::path nemenyi_csv(const std::string& dataset) const {
    return root / ("nemenyi_" + dataset + ".csv");
  }
  std::filesystem::path plots_dir() const { return root / "plots"; }
  std::filesystem::path box_accuracy_csv() const { return plots_dir() / "box_accuracy.csv"; }
  std::filesystem::path bar_mcc_csv() const { return plots_dir() / "bar_mcc.csv"; }
  std::filesystem::path line_f1_csv() const { return plots_dir() / "line_f1.csv"; }
  std::filesystem::path heatmap_nemenyi_csv() const { return plots_dir() / "heatmap_nemenyi.csv"; }
  std::filesystem::path manifest_json() const { return root / "manifest.json"; }
  std::filesystem::path lock_file() const { return root / ".lock"; }
};

/// A run directory belongs to one process at a time. The lock file is
/// created exclusively and removed on scope exit.
class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& path) : path_(path) {
    std::filesystem::create_directories(path.parent_path());
    std::FILE* f = std::fopen(path_.string().c_str(), "wx");
    if (!f)
      throw StageError("run directory is locked by " + path_.string() +
                       "; remove the file if no other run is active");
    std::fprintf(f, "%ld\n", (long)::getpid());
    std::fclose(f);
  }
  ~RunLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path path_;
};

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string iso_utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// manifest.json accumulates stage records and artifact digests across
/// subcommand invocations. Timestamps live here and nowhere else, so every
/// other artifact is byte-reproducible.
class ManifestWriter {
 public:
  ManifestWriter(RunPaths paths, const RunConfig& cfg) : paths_(std::move(paths)) {
    if (std::filesystem::exists(paths_.manifest_json())) {
      try {
        j_ = nlohmann::json::parse(detail::read_file(paths_.manifest_json()));
      } catch (...) {
        j_ = nlohmann::json::object();  // unreadable manifest: start over
      }
    } else {
      j_ = nlohmann::json::object();
    }
    j_["tool"] = kToolName;
    j_["version"] = kToolVersion;
    j_["dataset"] = cfg.name;
    j_["seed"] = cfg.seed;
    j_["config_digest"] = cfg.config_digest;
  }

  void record_stage(const std::string& stage, double seconds,
                    const std::vector<std::filesystem::path>& artifacts,
                    const std::vector<std::string>& warnings) {
    auto& st = j_["stages"][stage];
    st["completed_at"] = iso_utc_now();
    st["seconds"] = seconds;
    st["warnings"] = warnings;
    for (const auto& p : artifacts) {
      std::error_code ec;
      const auto rel = std::filesystem::relative(p, paths_.root, ec);
      j_["artifacts"][ec ? p.generic_string() : rel.generic_string()] = fnv1a64_file_hex(p);
    }
    detail::write_file_atomic(paths_.manifest_json(), j_.dump(2) + "\n");
  }

 private:
  RunPaths paths_;
  nlohmann::json j_;
};

inline std::vector<std::string> resolve_families(const RunConfig& cfg) {
  return cfg.families.empty() ? canonical_families() : cfg.families;
}

inline std::vector<PartitionStrategy> resolve_strategies(const RunConfig& cfg) {
  if (cfg.strategies.empty()) return enumerate_strategies();
  std::vector<PartitionStrategy> out;
  out.reserve(cfg.strategies.size());
  for (const auto& name : cfg.strategies) out.push_back(parse_strategy(name));
  return out;
}

inline std::vector<HyperParamSpace> resolve_spaces(const RunConfig& cfg) {
  if (cfg.hyperparams_path.empty()) return parse_manifest(default_manifest());
  return parse_manifest(detail::read_file(cfg.hyperparams_path));
}

inline Dataset load_source(const RunConfig& cfg) {
  Dataset ds;
  if (cfg.source.rfind("openml:", 0) == 0) {
    OpenmlConfig oc;
    oc.base_url = cfg.base_url;
    if (!cfg.cache_dir.empty()) oc.cache_dir = cfg.cache_dir;
    oc.offline = cfg.offline;
    oc.positive_label = cfg.positive_label;
    oc.target_name = cfg.target_name;
    ds = fetch_openml(parse_int64(cfg.source.substr(7)), oc);
  } else {
    const std::string text = detail::read_file(cfg.source);
    std::string lower = cfg.source;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return (char)std::tolower(c); });
    if (lower.size() >= 5 && lower.compare(lower.size() - 5, 5, ".arff") == 0)
      ds = parse_arff(text, cfg.positive_label, cfg.target_name);
    else
      ds = parse_csv(text, cfg.target_name.empty() ? "class" : cfg.target_name, cfg.positive_label);
  }
  validate_pipeline_dataset(ds);
  return ds;
}

/// Later stages reload the dataset from its artifact (not the source), so a
/// stage works identically whether it runs in the same process or a new one.
inline Dataset load_dataset_artifact(const RunPaths& paths) {
  const auto meta = nlohmann::json::parse(detail::read_file(paths.dataset_meta_json()));
  return parse_csv(detail::read_file(paths.dataset_csv()), meta.at("target").get<std::string>(),
                   meta.at("positive_label").get<std::string>());
}

namespace detail {

inline nlohmann::json dataset_meta_json(const Dataset& ds) {
  const auto [pos, neg] = class_counts(ds);
  nlohmann::json j;
  j["target"] = ds.schema.target_name;
  j["positive_label"] = ds.schema.positive_label;
  j["negative_label"] = ds.schema.negative_label;
  j["instances"] = ds.size();
  j["features"] = ds.n_features();
  j["positives"] = pos;
  j["negatives"] = neg;
  return j;
}

inline nlohmann::json metrics_json(const MetricSet& m) {
  nlohmann::json j;
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["mcc"] = m.mcc;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["fn"] = m.fn;
  j["tn"] = m.tn;
  return j;
}

}  // namespace detail

inline void matrix_impl(const RunConfig& cfg, const RunPaths& paths, ManifestWriter& manifest) {
  const StageTimer timer;
  const Dataset ds = load_source(cfg);
  const FoldAssignment folds = stratified_folds(ds, cfg.folds, derive_seed(cfg.seed, "folds"));
  const auto spaces = resolve_spaces(cfg);
  const auto specs =
      sample_random_models(cfg.model_count, resolve_families(cfg), derive_seed(cfg.seed, "models"), spaces);
  const ResponseMatrix matrix = build_response_matrix(ds, folds, specs);

  detail::write_file_atomic(paths.dataset_csv(), to_csv(ds));
  detail::write_file_atomic(paths.dataset_meta_json(), detail::dataset_meta_json(ds).dump(2) + "\n");

  std::string folds_text = "instance_id,fold\n";
  for (std::size_t i = 0; i < ds.size(); ++i)
    folds_text += csv_row({ds.instance_ids[i], std::to_string(folds.fold_of[i])});
  detail::write_file_atomic(paths.folds_csv(), folds_text);

  detail::write_file_atomic(paths.model_specs_csv(), specs_to_csv(matrix.model_ids, specs));
  detail::write_file_atomic(paths.response_matrix_csv(), export_matrix(matrix));

  std::string diag = "kind,id,value\n";
  const auto acc = model_accuracies(matrix);
  for (std::size_t m = 0; m < matrix.models(); ++m)
    diag += csv_row({"model_accuracy", matrix.model_ids[m], format_double(acc[m])});
  const auto prop = item_proportions(matrix);
  for (std::size_t i = 0; i < matrix.items(); ++i)
    diag += csv_row({"item_proportion", matrix.item_ids[i], format_double(prop[i])});
  detail::write_file_atomic(paths.matrix_diagnostics_csv(), diag);

  manifest.record_stage("matrix", timer.seconds(),
                        {paths.dataset_csv(), paths.dataset_meta_json(), paths.folds_csv(),
                         paths.model_specs_csv(), paths.response_matrix_csv(),
                         paths.matrix_diagnostics_csv()},
                        {});
}

inline void calibrate_impl(const RunConfig& cfg, const RunPaths& paths, ManifestWriter& manifest) {
  if (!std::filesystem::exists(paths.response_matrix_csv())) matrix_impl(cfg, paths, manifest);
  const StageTimer timer;
  const ResponseMatrix matrix = import_matrix(detail::read_file(paths.response_matrix_csv()));

  // Column -> fold map from the folds artifact; without one the whole matrix
  // is calibrated as a single batch.
  std::vector<int> fold_of(matrix.items(), 0);
  int fold_count = 1;
  if (std::filesystem::exists(paths.folds_csv())) {
    const auto records = parse_csv_records(detail::read_file(paths.folds_csv()));
    if (records.empty() || records[0] != std::vector<std::string>{"instance_id", "fold"})
      throw DataError("folds artifact: bad header");
    std::unordered_map<std::string, int> by_id;
    for (std::size_t r = 1; r < records.size(); ++r) {
      if (records[r].size() != 2)
        throw DataError("folds artifact: row " + std::to_string(r + 1) + " malformed");
      by_id[records[r][0]] = (int)parse_int64(records[r][1]);
    }
    for (std::size_t i = 0; i < matrix.items(); ++i) {
      const auto it = by_id.find(matrix.item_ids[i]);
      if (it == by_id.end())
        throw DataError("folds artifact: no fold for item '" + matrix.item_ids[i] + "'");
      if (it->second < 0) throw DataError("folds artifact: negative fold id");
      fold_of[i] = it->second;
      fold_count = std::max(fold_count, it->second + 1);
    }
  }

  std::vector<ItemParameters> all_items(matrix.items());
  nlohmann::json fold_summaries = nlohmann::json::array();
  std::vector<std::string> warnings;
  for (int k = 0; k < fold_count; ++k) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < matrix.items(); ++i)
      if (fold_of[i] == k) cols.push_back(i);
    if (cols.empty()) continue;

    ResponseMatrix sub;
    sub.model_ids = matrix.model_ids;
    sub.item_ids = select(matrix.item_ids, cols);
    sub.cells.resize(matrix.models() * cols.size());
    for (std::size_t m = 0; m < matrix.models(); ++m)
      for (std::size_t j = 0; j < cols.size(); ++j) sub.at(m, j) = matrix.at(m, cols[j]);

    const CalibrationResult res = calibrate(sub, cfg.calibration);
    for (std::size_t j = 0; j < cols.size(); ++j) all_items[cols[j]] = res.items[j];

    nlohmann::json fj;
    fj["fold"] = k;
    fj["items"] = cols.size();
    fj["converged"] = res.converged;
    fj["iterations"] = res.iterations;
    fj["loglik_first"] = res.loglik_trace.front();
    fj["loglik_last"] = res.loglik_trace.back();
    fj["warnings"] = res.warnings;
    fold_summaries.push_back(fj);
    for (const auto& w : res.warnings) warnings.push_back("fold " + std::to_string(k) + ": " + w);
  }

  detail::write_file_atomic(paths.item_parameters_csv(), items_to_csv(all_items));

  std::map<std::string, std::size_t> flag_counts{{"calibrated", 0},
                                                 {"degenerate_all_correct", 0},
                                                 {"degenerate_all_wrong", 0},
                                                 {"boundary_clamped", 0}};
  double sum_a = 0, sum_b = 0, sum_c = 0;
  double est_a = 0, est_b = 0, est_c = 0;
  std::size_t est_n = 0;
  for (const auto& item : all_items) {
    ++flag_counts[to_string(item.flag)];
    sum_a += item.discrimination;
    sum_b += item.difficulty;
    sum_c += item.guessing;
    if (item.flag == ItemFlag::calibrated || item.flag == ItemFlag::boundary_clamped) {
      est_a += item.discrimination;
      est_b += item.difficulty;
      est_c += item.guessing;
      ++est_n;
    }
  }
  const double n_all = all_items.empty() ? 1.0 : (double)all_items.size();
  const double n_est = est_n == 0 ? 1.0 : (double)est_n;

  nlohmann::json summary;
  summary["dataset"] = cfg.name;
  summary["items"] = all_items.size();
  summary["folds"] = fold_summaries;
  summary["flag_counts"] = flag_counts;
  summary["parameter_means"] = {{"discrimination", sum_a / n_all},
                                {"difficulty", sum_b / n_all},
                                {"guessing", sum_c / n_all}};
  summary["parameter_means_estimated"] = {{"discrimination", est_a / n_est},
                                          {"difficulty", est_b / n_est},
                                          {"guessing", est_c / n_est}};
  summary["estimated_items"] = est_n;
  detail::write_file_atomic(paths.calibration_summary_json(), summary.dump(2) + "\n");

  manifest.record_stage("calibrate", timer.seconds(),
                        {paths.item_parameters_csv(), paths.calibration_summary_json()}, warnings);
}

inline std::string nemenyi_matrix_csv(const std::vector<std::string>& names,
                                      const std::vector<double>& p) {
  std::vector<std::string> header{"strategy"};
  header.insert(header.end(), names.begin(), names.end());
  std::string out = csv_row(header);
  const std::size_t k = names.size();
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::string> row{names[i]};
    for (std::size_t j = 0; j < k; ++j) row.push_back(format_double(p[i * k + j]));
    out += csv_row(row);
  }
  return out;
}

inline void evaluate_impl(const RunConfig& cfg, const RunPaths& paths, ManifestWriter& manifest) {
  if (!std::filesystem::exists(paths.item_parameters_csv())) calibrate_impl(cfg, paths, manifest);
  const StageTimer timer;
  const Dataset ds = load_dataset_artifact(paths);
  const auto all_items = items_from_csv(detail::read_file(paths.item_parameters_csv()));

  std::unordered_map<std::string, std::size_t> item_of;
  item_of.reserve(all_items.size());
  for (std::size_t i = 0; i < all_items.size(); ++i) item_of[all_items[i].item_id] = i;
  std::vector<ItemParameters> items(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const auto it = item_of.find(ds.instance_ids[r]);
    if (it == item_of.end())
      throw DataError("item parameters: no entry for instance '" + ds.instance_ids[r] + "'");
    items[r] = all_items[it->second];
  }

  const auto strategies = resolve_strategies(cfg);
  if (strategies.empty()) throw DataError("evaluate: empty strategy list");
  const auto families = resolve_families(cfg);
  const auto spaces = resolve_spaces(cfg);

  std::vector<std::pair<PartitionStrategy, std::vector<EvaluationEntry>>> results;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> artifacts;
  for (const auto& strategy : strategies) {
    const PartitionPlan plan = make_partition(items, ds.labels, strategy, cfg.train_fraction);
    const auto ppath = paths.partition_csv(strategy.name());
    detail::write_file_atomic(ppath, partition_to_csv(plan));
    artifacts.push_back(ppath);

    TuningConfig tuning = cfg.tuning;
    tuning.seed = derive_seed(cfg.seed, "tuning/" + strategy.name());
    results.emplace_back(strategy, evaluate_partition(ds, plan, families, tuning, spaces));
  }

  // Statistics run over the strategies whose every family produced scores.
  std::vector<std::size_t> complete;
  for (std::size_t s = 0; s < results.size(); ++s) {
    bool ok = !results[s].second.empty();
    for (const auto& e : results[s].second) ok = ok && e.ok;
    if (ok) complete.push_back(s);
  }

  bool have_stats = false;
  TestResult stats;
  std::vector<std::string> stat_names;
  std::string stats_warning;
  if (complete.size() < 3) {
    stats_warning = "statistics skipped: fewer than 3 strategies completed for every family";
    warnings.push_back(stats_warning);
  } else if (families.size() < 2) {
    stats_warning = "statistics skipped: rank tests need at least 2 families";
    warnings.push_back(stats_warning);
  } else {
    ScoreTable table;
    table.blocks = families;
    for (const auto s : complete) stat_names.push_back(results[s].first.name());
    table.treatments = stat_names;
    table.scores.resize(families.size() * stat_names.size());
    for (std::size_t b = 0; b < families.size(); ++b)
      for (std::size_t t = 0; t < complete.size(); ++t)
        table.scores[b * stat_names.size() + t] = results[complete[t]].second[b].test_metrics.f1;
    stats = run_tests(table);
    have_stats = true;
  }

  nlohmann::json report;
  report["tool"] = kToolName;
  report["version"] = kToolVersion;
  report["dataset"] = cfg.name;
  report["seed"] = cfg.seed;
  report["train_fraction"] = cfg.train_fraction;
  report["selection_metric"] = cfg.tuning.selection_metric;
  report["samples_per_family"] = cfg.tuning.samples_per_family;
  report["inner_folds"] = cfg.tuning.inner_folds;
  report["families"] = families;
  nlohmann::json jstrats = nlohmann::json::array();
  for (const auto& [strategy, entries] : results) {
    nlohmann::json js;
    js["strategy"] = strategy.name();
    nlohmann::json jfams = nlohmann::json::array();
    for (const auto& e : entries) {
      nlohmann::json je;
      je["family"] = e.family;
      je["ok"] = e.ok;
      if (!e.ok) {
        je["error"] = e.error;
      } else {
        je["model_seed"] = e.spec.seed;
        nlohmann::json jp = nlohmann::json::object();
        for (const auto& [k, v] : e.spec.params) jp[k] = v;
        je["params"] = jp;
        je["train"] = detail::metrics_json(e.train_metrics);
        je["test"] = detail::metrics_json(e.test_metrics);
      }
      jfams.push_back(je);
    }
    js["families"] = jfams;
    jstrats.push_back(js);
  }
  report["strategies"] = jstrats;
  if (have_stats) {
    nlohmann::json jstat;
    jstat["test"] = "friedman chi-square with nemenyi post-hoc";
    jstat["score"] = "test f1";
    jstat["strategies"] = stat_names;
    jstat["friedman_statistic"] = stats.friedman_statistic;
    jstat["friedman_p"] = stats.friedman_p;
    nlohmann::json jranks = nlohmann::json::object();
    for (std::size_t t = 0; t < stat_names.size(); ++t) jranks[stat_names[t]] = stats.mean_ranks[t];
    jstat["mean_ranks"] = jranks;
    nlohmann::json jnem = nlohmann::json::array();
    for (std::size_t i = 0; i < stat_names.size(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < stat_names.size(); ++j)
        row.push_back(stats.nemenyi_p[i * stat_names.size() + j]);
      jnem.push_back(row);
    }
    jstat["nemenyi_p"] = jnem;
    report["statistics"] = jstat;
  } else {
    report["statistics"] = nullptr;
    report["statistics_warning"] = stats_warning;
  }
  detail::write_file_atomic(paths.report_json(), report.dump(2) + "\n");
  artifacts.push_back(paths.report_json());

  std::string rc = "strategy,family,split,accuracy,precision,recall,f1,mcc\n";
  for (const auto& [strategy, entries] : results) {
    (void)strategy;
    for (const auto& e : entries) {
      if (!e.ok) continue;
      for (const auto* pair : {&e.train_metrics, &e.test_metrics}) {
        const MetricSet& m = *pair;
        rc += csv_row({e.strategy, e.family, pair == &e.train_metrics ? "train" : "test",
                       format_double(m.accuracy), format_double(m.precision),
                       format_double(m.recall), format_double(m.f1), format_double(m.mcc)});
      }
    }
  }
  detail::write_file_atomic(paths.report_csv(), rc);
  artifacts.push_back(paths.report_csv());

  if (have_stats) {
    detail::write_file_atomic(paths.nemenyi_csv(cfg.name),
                              nemenyi_matrix_csv(stat_names, stats.nemenyi_p));
    artifacts.push_back(paths.nemenyi_csv(cfg.name));
  }

  manifest.record_stage("evaluate", timer.seconds(), artifacts, warnings);
}

inline void plotdata_impl(const RunConfig& cfg, const RunPaths& paths, ManifestWriter& manifest) {
  if (!std::filesystem::exists(paths.report_json()))
    throw StageError("plotdata: report.json not found; run evaluate first");
  const StageTimer timer;
  const auto report = nlohmann::json::parse(detail::read_file(paths.report_json()));

  const auto families = report.at("families").get<std::vector<std::string>>();
  std::vector<std::string> strategies;
  // entry_of[family][strategy] -> test metrics object
  std::map<std::string, std::map<std::string, nlohmann::json>> entry_of;
  for (const auto& js : report.at("strategies")) {
    const auto sname = js.at("strategy").get<std::string>();
    strategies.push_back(sname);
    for (const auto& je : js.at("families")) {
      if (!je.at("ok").get<bool>()) continue;
      entry_of[je.at("family").get<std::string>()][sname] = je.at("test");
    }
  }
  if (strategies.empty()) throw StageError("plotdata: report contains no strategies");

  const auto wide_matrix = [&](const char* metric) {
    std::vector<std::string> header{"family"};
    header.insert(header.end(), strategies.begin(), strategies.end());
    std::string out = csv_row(header);
    for (const auto& family : families) {
      std::vector<std::string> row{family};
      const auto fit = entry_of.find(family);
      for (const auto& strategy : strategies) {
        std::string cell;  // stays empty for a failed (strategy, family) pair
        if (fit != entry_of.end()) {
          const auto mit = fit->second.find(strategy);
          if (mit != fit->second.end()) cell = format_double(mit->second.at(metric).get<double>());
        }
        row.push_back(cell);
      }
      out += csv_row(row);
    }
    return out;
  };

  std::vector<std::filesystem::path> artifacts;
  std::vector<std::string> warnings;
  detail::write_file_atomic(paths.box_accuracy_csv(), wide_matrix("accuracy"));
  detail::write_file_atomic(paths.bar_mcc_csv(), wide_matrix("mcc"));
  detail::write_file_atomic(paths.line_f1_csv(), wide_matrix("f1"));
  artifacts.push_back(paths.box_accuracy_csv());
  artifacts.push_back(paths.bar_mcc_csv());
  artifacts.push_back(paths.line_f1_csv());

  if (report.at("statistics").is_null()) {
    warnings.push_back("heatmap skipped: report has no statistics block");
  } else {
    const auto& jstat = report.at("statistics");
    const auto names = jstat.at("strategies").get<std::vector<std::string>>();
    std::vector<double> p;
    for (const auto& row : jstat.at("nemenyi_p"))
      for (const auto& v : row) p.push_back(v.get<double>());
    detail::write_file_atomic(paths.heatmap_nemenyi_csv(), nemenyi_matrix_csv(names, p));
    artifacts.push_back(paths.heatmap_nemenyi_csv());
  }

  manifest.record_stage("plotdata", timer.seconds(), artifacts, warnings);
  (void)cfg;
}

inline void cmd_matrix(const RunConfig& cfg) {
  const RunPaths paths(cfg.out_dir);
  std::filesystem::create_directories(paths.root);
  const RunLock lock(paths.lock_file());
  ManifestWriter manifest(paths, cfg);
  matrix_impl(cfg, paths, manifest);
}

inline void cmd_calibrate(const RunConfig& cfg) {
  const RunPaths paths(cfg.out_dir);
  std::filesystem::create_directories(paths.root);
  const RunLock lock(paths.lock_file());
  ManifestWriter manifest(paths, cfg);
  calibrate_impl(cfg, paths, manifest);
}

inline void cmd_evaluate(const RunConfig& cfg) {
  const RunPaths paths(cfg.out_dir);
  std::filesystem::create_directories(paths.root);
  const RunLock lock(paths.lock_file());
  ManifestWriter manifest(paths, cfg);
  evaluate_impl(cfg, paths, manifest);
}

inline void cmd_plotdata(const RunConfig& cfg) {
  const RunPaths paths(cfg.out_dir);
  std::filesystem::create_directories(paths.root);
  const RunLock lock(paths.lock_file());
  ManifestWriter manifest(paths, cfg);
  plotdata_impl(cfg, paths, manifest);
}

}  // namespace irtpart

#endif
