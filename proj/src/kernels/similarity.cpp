#include "agenda/kernels/similarity.hpp"

#include <cmath>

#include "agenda/core/error.hpp"

namespace agenda::kernels {

namespace {

double dot(std::span<const float> u, std::span<const float> v) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  return sum;
}

double checked_norm(std::span<const float> u, const char* what) {
  const double n = std::sqrt(dot(u, u));
  if (!(n > 0.0)) throw ValidationError(std::string("zero-norm embedding (") + what + ")");
  return n;
}

void check_shapes(std::span<const backends::EmbeddingVector> rows, const GroupedAnchors& a) {
  if (a.group.size() != rows.size()) throw ValidationError("cosine_matrix: one anchor group per row required");
  for (auto g : a.group) {
    if ((g + 1) * a.group_size > a.anchors.size()) throw ValidationError("cosine_matrix: anchor group out of range");
  }
  const std::size_t dim = rows.empty() ? (a.anchors.empty() ? 0 : a.anchors.front().dim()) : rows.front().dim();
  for (const auto& r : rows) {
    if (r.dim() != dim) throw ValidationError("cosine_matrix: embedding dimension mismatch");
  }
  for (const auto& v : a.anchors) {
    if (v.dim() != dim) throw ValidationError("cosine_matrix: embedding dimension mismatch");
  }
}

std::vector<double> norms(std::span<const backends::EmbeddingVector> vs, const char* what) {
  std::vector<double> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(checked_norm(v.values, what));
  return out;
}

}  // namespace

double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) throw ValidationError("cosine: dimension mismatch");
  const double nu = checked_norm(u, "left");
  const double nv = checked_norm(v, "right");
  return dot(u, v) / (nu * nv);
}

DenseMatrix cosine_matrix_serial(std::span<const backends::EmbeddingVector> rows, const GroupedAnchors& a) {
  check_shapes(rows, a);
  DenseMatrix m{rows.size(), a.group_size, std::vector<double>(rows.size() * a.group_size)};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < a.group_size; ++j) {
      m.values[i * a.group_size + j] = cosine(rows[i].values, a.anchors[a.group[i] * a.group_size + j].values);
    }
  }
  return m;
}

DenseMatrix cosine_matrix(std::span<const backends::EmbeddingVector> rows, const GroupedAnchors& a) {
  check_shapes(rows, a);
  // Norm checks throw, so they run before the parallel region.
  const auto row_norms = norms(rows, "message");
  const auto anchor_norms = norms(a.anchors, "anchor");
  DenseMatrix m{rows.size(), a.group_size, std::vector<double>(rows.size() * a.group_size)};
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < a.group_size; ++j) {
      const std::size_t k = a.group[r] * a.group_size + j;
      m.values[r * a.group_size + j] = dot(rows[r].values, a.anchors[k].values) / (row_norms[r] * anchor_norms[k]);
    }
  }
  return m;
}

}  // namespace agenda::kernels
