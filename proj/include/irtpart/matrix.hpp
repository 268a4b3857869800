#ifndef IRTPART_MATRIX_HPP
#define IRTPART_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace irtpart {

/// Dense row-major matrix of feature values.
struct DataMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  DataMatrix() = default;
  DataMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values.data() + r * cols, cols);
  }

  DataMatrix select_rows(std::span<const std::size_t> indices) const {
    DataMatrix out(indices.size(), cols);
    for (std::size_t i = 0; i < indices.size(); ++i)
      for (std::size_t c = 0; c < cols; ++c) out.at(i, c) = at(indices[i], c);
    return out;
  }
};

template <typename T>
std::vector<T> select(const std::vector<T>& items, std::span<const std::size_t> indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(items[i]);
  return out;
}

}  // namespace irtpart

#endif
