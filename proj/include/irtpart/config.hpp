#ifndef IRTPART_CONFIG_HPP
#define IRTPART_CONFIG_HPP

#include <string>
#include <vector>

#include "irtpart/calibrate.hpp"
#include "irtpart/common.hpp"
#include "irtpart/digest.hpp"
#include "irtpart/evaluation.hpp"
#include "irtpart/partitioning.hpp"

namespace irtpart {

/// Everything one pipeline run needs; parsed from a `key = value` file.
struct RunConfig {
  std::string name;            // dataset label used in artifact names
  std::string source;          // CSV/ARFF path or "openml:<id>"
  std::string target_name;     // empty: ARFF last-nominal / OpenML default
  std::string positive_label;  // empty: minority class
  int folds = 10;
  std::size_t model_count = 100;
  std::uint64_t seed = 0;
  std::string out_dir = "run_out";
  std::vector<std::string> strategies;  // empty = all twelve
  std::vector<std::string> families;    // empty = all ten
  double train_fraction = 0.7;
  CalibrationConfig calibration;
  TuningConfig tuning;
  std::string hyperparams_path;  // empty = built-in manifest
  bool offline = false;
  std::string cache_dir;  // empty = IRT_PARTITION_CACHE or ~/.cache
  std::string base_url = "https://www.openml.org";
  std::string config_digest;  // hash of the config text, echoed in the manifest
};

namespace detail {

inline std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t p = 0;
  while (p <= text.size()) {
    std::size_t comma = text.find(',', p);
    if (comma == std::string_view::npos) comma = text.size();
    const auto item = trim(text.substr(p, comma - p));
    if (!item.empty()) out.emplace_back(item);
    p = comma + 1;
  }
  return out;
}

inline bool parse_bool(std::string_view v, std::size_t line_no) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DataError("config line " + std::to_string(line_no) + ": expected a boolean, got '" +
                  std::string(v) + "'");
}

}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::size_t pos = 0, line_no = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw DataError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));

    if (key == "name")
      cfg.name = value;
    else if (key == "source")
      cfg.source = value;
    else if (key == "target")
      cfg.target_name = value;
    else if (key == "positive_label")
      cfg.positive_label = value;
    else if (key == "folds")
      cfg.folds = (int)parse_int64(value);
    else if (key == "models")
      cfg.model_count = (std::size_t)parse_int64(value);
    else if (key == "seed")
      cfg.seed = parse_uint64(value);
    else if (key == "out")
      cfg.out_dir = value;
    else if (key == "strategies") {
      cfg.strategies = detail::split_list(value);
      if (cfg.strategies.empty())
        throw DataError("config line " + std::to_string(line_no) + ": strategies filter is empty");
    } else if (key == "families") {
      cfg.families = detail::split_list(value);
      if (cfg.families.empty())
        throw DataError("config line " + std::to_string(line_no) + ": families filter is empty");
    }
    else if (key == "train_fraction")
      cfg.train_fraction = parse_double(value);
    else if (key == "quadrature_points")
      cfg.calibration.quadrature_points = (int)parse_int64(value);
    else if (key == "max_em_iters")
      cfg.calibration.max_em_iters = (int)parse_int64(value);
    else if (key == "loglik_tol")
      cfg.calibration.loglik_tol = parse_double(value);
    else if (key == "c_max")
      cfg.calibration.c_max = parse_double(value);
    else if (key == "a_max")
      cfg.calibration.a_max = parse_double(value);
    else if (key == "b_max")
      cfg.calibration.b_max = parse_double(value);
    else if (key == "samples_per_family")
      cfg.tuning.samples_per_family = (std::size_t)parse_int64(value);
    else if (key == "inner_folds")
      cfg.tuning.inner_folds = (int)parse_int64(value);
    else if (key == "selection_metric")
      cfg.tuning.selection_metric = value;
    else if (key == "hyperparams")
      cfg.hyperparams_path = value;
    else if (key == "offline")
      cfg.offline = detail::parse_bool(value, line_no);
    else if (key == "cache_dir")
      cfg.cache_dir = value;
    else if (key == "base_url")
      cfg.base_url = value;
    else
      throw DataError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }

  if (cfg.source.empty()) throw DataError("config: 'source' is required");
  if (cfg.folds < 1) throw DataError("config: folds must be >= 1");
  if (cfg.model_count < 1) throw DataError("config: models must be >= 1");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
    throw DataError("config: train_fraction must lie in (0, 1)");

  if (cfg.name.empty()) {
    std::string stem = cfg.source;
    if (stem.rfind("openml:", 0) == 0) {
      cfg.name = "openml_" + stem.substr(7);
    } else {
      const std::size_t slash = stem.find_last_of("/\\");
      if (slash != std::string::npos) stem = stem.substr(slash + 1);
      const std::size_t dot = stem.find_last_of('.');
      if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
      cfg.name = stem;
    }
  }
  for (const auto& s : cfg.strategies) parse_strategy(s);  // validate names early
  cfg.config_digest = fnv1a64_hex(text);
  return cfg;
}

}  // namespace irtpart

#endif
