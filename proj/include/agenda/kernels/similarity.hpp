#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "agenda/backends/backend.hpp"

namespace agenda::kernels {

/// u.v / (|u||v|). Throws ValidationError on dimension mismatch or a zero-norm vector.
double cosine(std::span<const float> u, std::span<const float> v);

inline double cosine(const backends::EmbeddingVector& u, const backends::EmbeddingVector& v) {
  return cosine(std::span<const float>(u.values), std::span<const float>(v.values));
}

/// Row-major rows x cols matrix of doubles.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
  bool operator==(const DenseMatrix&) const = default;
};

/// Row i is compared with anchors[group[i] * group_size + j] for j < group_size,
/// i.e. every row picks one contiguous group of anchors (one group per language).
struct GroupedAnchors {
  std::span<const backends::EmbeddingVector> anchors;
  std::span<const std::size_t> group;
  std::size_t group_size = 0;
};

/// Serial reference.
DenseMatrix cosine_matrix_serial(std::span<const backends::EmbeddingVector> rows, const GroupedAnchors& anchors);

/// OpenMP over rows; identical output to the serial reference.
DenseMatrix cosine_matrix(std::span<const backends::EmbeddingVector> rows, const GroupedAnchors& anchors);

}  // namespace agenda::kernels
