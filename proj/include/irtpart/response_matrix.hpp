#ifndef IRTPART_RESPONSE_MATRIX_HPP
#define IRTPART_RESPONSE_MATRIX_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "irtpart/common.hpp"
#include "irtpart/csv.hpp"

namespace irtpart {

/// Models x instances binary correctness matrix: cell (m, i) is 1 iff model m
/// predicted instance i's label correctly in the fold that held i out.
struct ResponseMatrix {
  std::vector<std::string> model_ids;
  std::vector<std::string> item_ids;
  std::vector<std::uint8_t> cells;     // row-major M x n
  std::vector<int> fold_of_item;       // empty for imported matrices

  std::size_t models() const { return model_ids.size(); }
  std::size_t items() const { return item_ids.size(); }
  std::uint8_t at(std::size_t m, std::size_t i) const { return cells[m * item_ids.size() + i]; }
  std::uint8_t& at(std::size_t m, std::size_t i) { return cells[m * item_ids.size() + i]; }
};

inline std::string export_matrix(const ResponseMatrix& matrix) {
  std::string out;
  std::vector<std::string> header;
  header.reserve(matrix.items() + 1);
  header.push_back("model_id");
  for (const auto& id : matrix.item_ids) header.push_back(id);
  out += csv_row(header);
  std::vector<std::string> row(matrix.items() + 1);
  for (std::size_t m = 0; m < matrix.models(); ++m) {
    row[0] = matrix.model_ids[m];
    for (std::size_t i = 0; i < matrix.items(); ++i) row[i + 1] = matrix.at(m, i) ? "1" : "0";
    out += csv_row(row);
  }
  return out;
}

inline ResponseMatrix import_matrix(std::string_view text) {
  const auto records = parse_csv_records(text);
  if (records.size() < 2) throw DataError("response matrix: need a header and at least one model row");
  const auto& header = records[0];
  if (header.empty() || header[0] != "model_id")
    throw DataError("response matrix: header must start with 'model_id'");
  if (header.size() < 2) throw DataError("response matrix: no item columns");

  ResponseMatrix matrix;
  matrix.item_ids.assign(header.begin() + 1, header.end());
  const std::size_t n = matrix.item_ids.size();
  {
    std::set<std::string> seen(matrix.item_ids.begin(), matrix.item_ids.end());
    if (seen.size() != n) throw DataError("response matrix: duplicate item ids");
  }

  std::set<std::string> model_seen;
  matrix.cells.reserve((records.size() - 1) * n);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != n + 1)
      throw DataError("response matrix: row " + std::to_string(r + 1) + " has " +
                      std::to_string(rec.size()) + " fields, expected " + std::to_string(n + 1));
    if (!model_seen.insert(rec[0]).second)
      throw DataError("response matrix: duplicate model id '" + rec[0] + "'");
    matrix.model_ids.push_back(rec[0]);
    for (std::size_t i = 1; i < rec.size(); ++i) {
      if (rec[i] == "0")
        matrix.cells.push_back(0);
      else if (rec[i] == "1")
        matrix.cells.push_back(1);
      else
        throw DataError("response matrix: non-binary cell '" + rec[i] + "' at row " +
                        std::to_string(r + 1));
    }
  }
  return matrix;
}

/// Pooled cross-validation accuracy per model.
inline std::vector<double> model_accuracies(const ResponseMatrix& matrix) {
  std::vector<double> out(matrix.models());
  for (std::size_t m = 0; m < matrix.models(); ++m) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < matrix.items(); ++i) correct += matrix.at(m, i);
    out[m] = matrix.items() == 0 ? 0.0 : (double)correct / (double)matrix.items();
  }
  return out;
}

/// Proportion of models answering each item correctly.
inline std::vector<double> item_proportions(const ResponseMatrix& matrix) {
  std::vector<double> out(matrix.items());
  for (std::size_t i = 0; i < matrix.items(); ++i) {
    std::size_t correct = 0;
    for (std::size_t m = 0; m < matrix.models(); ++m) correct += matrix.at(m, i);
    out[i] = matrix.models() == 0 ? 0.0 : (double)correct / (double)matrix.models();
  }
  return out;
}

}  // namespace irtpart

#endif
