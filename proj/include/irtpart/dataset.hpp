#ifndef IRTPART_DATASET_HPP
#define IRTPART_DATASET_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "irtpart/common.hpp"
#include "irtpart/csv.hpp"
#include "irtpart/matrix.hpp"
#include "irtpart/prng.hpp"

namespace irtpart {

enum class FeatureKind { numeric, nominal };

struct FeatureInfo {
  std::string name;
  FeatureKind kind = FeatureKind::numeric;
  std::vector<std::string> levels;  // nominal only, in coding order
};

struct DatasetSchema {
  std::vector<FeatureInfo> features;
  std::string target_name;
  std::string positive_label;
  std::string negative_label;
};

/// A loaded binary-classification dataset. Nominal features are integer
/// coded by level index; labels are 1 for the positive class, 0 otherwise.
/// instance_ids are zero-padded row numbers assigned at load time and stay
/// attached to their instances through every later stage.
struct Dataset {
  DatasetSchema schema;
  DataMatrix rows;
  std::vector<int> labels;
  std::vector<std::string> instance_ids;

  std::size_t size() const { return rows.rows; }
  std::size_t n_features() const { return rows.cols; }
};

struct FoldAssignment {
  std::vector<int> fold_of;
  int fold_count = 0;
};

namespace detail {

inline bool is_missing_token(std::string_view token) {
  return token.empty() || token == "?";
}

inline std::vector<std::string> make_instance_ids(std::size_t n) {
  std::size_t width = 1;
  for (std::size_t v = n > 0 ? n - 1 : 0; v >= 10; v /= 10) ++width;
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string s = std::to_string(i);
    ids[i] = std::string(width - s.size(), '0') + s;
  }
  return ids;
}

/// Raw string cells plus (possibly empty) declared feature kinds; the common
/// tail of the CSV and ARFF loaders.
struct RawTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<std::string>> rows;
  // Declared nominal levels per column, empty vector = undeclared (infer).
  std::vector<std::vector<std::string>> declared_levels;
  bool kinds_declared = false;
  std::vector<FeatureKind> kinds;  // only meaningful when kinds_declared
};

inline Dataset build_dataset(const RawTable& table, std::size_t target_col,
                             std::string positive_label) {
  const std::size_t n = table.rows.size();
  const std::size_t n_cols = table.column_names.size();
  if (n == 0) throw DataError("dataset: no data rows");
  for (std::size_t r = 0; r < n; ++r)
    if (table.rows[r].size() != n_cols)
      throw DataError("dataset: row " + std::to_string(r + 1) + " has " +
                      std::to_string(table.rows[r].size()) + " fields, expected " +
                      std::to_string(n_cols));

  // Label mapping. Exactly two observed values; the positive one may be
  // given explicitly or chosen as the minority class.
  std::vector<std::string> label_order;  // first-appearance order
  std::map<std::string, std::size_t> label_counts;
  for (std::size_t r = 0; r < n; ++r) {
    const std::string& v = table.rows[r][target_col];
    if (is_missing_token(v)) throw DataError("dataset: missing target value in row " + std::to_string(r + 1));
    if (!label_counts.count(v)) label_order.push_back(v);
    ++label_counts[v];
  }
  if (label_order.size() > 2)
    throw DataError("dataset: target column has " + std::to_string(label_order.size()) +
                    " distinct values, expected exactly 2");
  if (label_order.size() < 2)
    throw DataError("dataset: both classes must be present, target has a single value '" +
                    label_order[0] + "'");
  if (positive_label.empty()) {
    // Minority class is the positive class; exact tie -> lexicographically
    // smaller value.
    const auto& a = label_order[0];
    const auto& b = label_order[1];
    if (label_counts[a] != label_counts[b])
      positive_label = label_counts[a] < label_counts[b] ? a : b;
    else
      positive_label = std::min(a, b);
  }
  if (!label_counts.count(positive_label))
    throw DataError("dataset: positive label '" + positive_label + "' not present in target column");
  std::string negative_label = label_order[0] == positive_label ? label_order[1] : label_order[0];

  std::vector<int> labels(n);
  for (std::size_t r = 0; r < n; ++r) labels[r] = table.rows[r][target_col] == positive_label ? 1 : 0;

  // Feature columns in original order, target removed.
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < n_cols; ++c)
    if (c != target_col) feature_cols.push_back(c);

  Dataset ds;
  ds.schema.target_name = table.column_names[target_col];
  ds.schema.positive_label = positive_label;
  ds.schema.negative_label = negative_label;
  ds.rows = DataMatrix(n, feature_cols.size());
  ds.labels = std::move(labels);
  ds.instance_ids = make_instance_ids(n);

  for (std::size_t f = 0; f < feature_cols.size(); ++f) {
    const std::size_t c = feature_cols[f];
    FeatureInfo info;
    info.name = table.column_names[c];

    bool numeric;
    if (table.kinds_declared) {
      numeric = table.kinds[c] == FeatureKind::numeric;
    } else {
      numeric = true;
      for (std::size_t r = 0; r < n && numeric; ++r) {
        const auto token = trim(table.rows[r][c]);
        double v;
        if (!is_missing_token(token) && !parse_double(token, v)) numeric = false;
      }
    }

    if (numeric) {
      info.kind = FeatureKind::numeric;
      std::vector<double> present;
      std::vector<bool> missing(n, false);
      for (std::size_t r = 0; r < n; ++r) {
        const auto token = trim(table.rows[r][c]);
        if (is_missing_token(token)) {
          missing[r] = true;
        } else {
          double v;
          parse_double(token, v);
          ds.rows.at(r, f) = v;
          present.push_back(v);
        }
      }
      if (present.empty())
        throw DataError("dataset: column '" + info.name + "' has no observed values");
      // Column median over the full dataset, computed before any split.
      std::sort(present.begin(), present.end());
      const std::size_t m = present.size();
      const double median = m % 2 ? present[m / 2] : 0.5 * (present[m / 2 - 1] + present[m / 2]);
      for (std::size_t r = 0; r < n; ++r)
        if (missing[r]) ds.rows.at(r, f) = median;
    } else {
      info.kind = FeatureKind::nominal;
      std::vector<std::string> levels = table.declared_levels.empty()
                                            ? std::vector<std::string>{}
                                            : table.declared_levels[c];
      std::map<std::string, int> code;
      for (std::size_t i = 0; i < levels.size(); ++i) code[levels[i]] = int(i);
      std::vector<int> level_count(levels.size(), 0);
      std::vector<bool> missing(n, false);
      std::size_t present = 0;
      for (std::size_t r = 0; r < n; ++r) {
        const auto token = std::string(trim(table.rows[r][c]));
        if (is_missing_token(token)) {
          missing[r] = true;
          continue;
        }
        auto it = code.find(token);
        if (it == code.end()) {
          if (!table.declared_levels.empty() && !table.declared_levels[c].empty())
            throw DataError("dataset: value '" + token + "' not among declared levels of '" +
                            info.name + "'");
          code[token] = int(levels.size());
          levels.push_back(token);
          level_count.push_back(0);
          it = code.find(token);
        }
        ds.rows.at(r, f) = double(it->second);
        ++level_count[it->second];
        ++present;
      }
      if (present == 0)
        throw DataError("dataset: column '" + info.name + "' has no observed values");
      // Mode, ties to the earlier level in coding order.
      int mode = 0;
      for (std::size_t l = 1; l < level_count.size(); ++l)
        if (level_count[l] > level_count[mode]) mode = int(l);
      for (std::size_t r = 0; r < n; ++r)
        if (missing[r]) ds.rows.at(r, f) = double(mode);
      info.levels = std::move(levels);
    }
    ds.schema.features.push_back(std::move(info));
  }
  return ds;
}

}  // namespace detail

/// RFC 4180 CSV with a mandatory header row. Columns where every observed
/// value parses as a number become numeric features; everything else becomes
/// an integer-coded nominal. Missing cells ("" or "?") are imputed with the
/// column median (numeric) or mode (nominal).
inline Dataset parse_csv(std::string_view text, const std::string& target_name,
                         const std::string& positive_label) {
  auto records = parse_csv_records(text);
  if (records.empty()) throw DataError("csv: empty file");
  detail::RawTable table;
  table.column_names = records[0];
  table.rows.assign(records.begin() + 1, records.end());
  std::size_t target_col = table.column_names.size();
  for (std::size_t c = 0; c < table.column_names.size(); ++c)
    if (table.column_names[c] == target_name) target_col = c;
  if (target_col == table.column_names.size())
    throw DataError("csv: target column '" + target_name + "' not found");
  return detail::build_dataset(table, target_col, positive_label);
}

/// Dataset -> CSV with the same layout parse_csv reads, so a round trip
/// reproduces rows, labels and ids exactly.
inline std::string to_csv(const Dataset& ds) {
  std::string out;
  std::vector<std::string> header;
  for (const auto& f : ds.schema.features) header.push_back(f.name);
  header.push_back(ds.schema.target_name);
  out += csv_row(header);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    std::vector<std::string> row;
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
      const auto& info = ds.schema.features[f];
      if (info.kind == FeatureKind::numeric)
        row.push_back(format_double(ds.rows.at(r, f)));
      else
        row.push_back(info.levels[std::size_t(ds.rows.at(r, f))]);
    }
    row.push_back(ds.labels[r] ? ds.schema.positive_label : ds.schema.negative_label);
    out += csv_row(row);
  }
  return out;
}

inline std::pair<std::size_t, std::size_t> class_counts(const Dataset& ds) {
  std::size_t pos = 0;
  for (int y : ds.labels) pos += std::size_t(y);
  return {pos, ds.size() - pos};
}

/// Stratified fold assignment over bare labels. Within each class, indices
/// are shuffled and dealt round-robin; class c starts dealing at the fold
/// where class c-1 stopped, which keeps total fold sizes within 1 as well.
inline FoldAssignment stratified_folds(const std::vector<int>& labels, int fold_count, Rng rng) {
  if (fold_count < 1) throw DataError("folds: fold count must be >= 1");
  FoldAssignment fa;
  fa.fold_count = fold_count;
  fa.fold_of.assign(labels.size(), -1);
  std::size_t dealt = 0;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) idx.push_back(i);
    if (idx.size() < std::size_t(fold_count))
      throw DataError("folds: class " + std::to_string(cls) + " has " + std::to_string(idx.size()) +
                      " members, fewer than " + std::to_string(fold_count) + " folds");
    rng.shuffle(idx);
    for (std::size_t j = 0; j < idx.size(); ++j)
      fa.fold_of[idx[j]] = int((dealt + j) % std::size_t(fold_count));
    dealt += idx.size();
  }
  return fa;
}

inline FoldAssignment stratified_folds(const Dataset& ds, int fold_count, std::uint64_t seed) {
  return stratified_folds(ds.labels, fold_count, Rng(seed).stream("stratified_folds"));
}

/// Checks the invariants the full pipeline needs (parsers themselves accept
/// smaller inputs for testing).
inline void validate_pipeline_dataset(const Dataset& ds) {
  if (ds.size() < 20)
    throw DataError("dataset: pipeline needs at least 20 instances, got " + std::to_string(ds.size()));
  auto [pos, neg] = class_counts(ds);
  if (pos == 0 || neg == 0) throw DataError("dataset: both classes must be present");
}

}  // namespace irtpart

#endif
