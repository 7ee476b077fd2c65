#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "pge/error.hpp"
#include "pge/graph.hpp"
#include "pge/linalg.hpp"
#include "pge/matrix.hpp"

namespace pge {

enum class SignalKind { line, hope };

inline std::string_view to_string(SignalKind k) { return k == SignalKind::line ? "line" : "hope"; }

struct SignalSpec {
  SignalKind kind = SignalKind::hope;
  double alpha = 0.5;
  std::size_t dim = 128;

  void validate(std::size_t order) const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("signal parameter alpha must lie in [0, 1]");
    if (dim < 1) throw ConfigError("embedding dimension must be >= 1");
    if (dim > order)
      throw BackendError("embedding dimension " + std::to_string(dim) + " exceeds graph order " +
                         std::to_string(order));
  }
};

// line: M = C⁻¹ A C⁻¹ / vol(G);  hope: M = A A.
inline Matrix signal_matrix(const Graph& g, SignalKind kind) {
  const std::size_t n = g.num_vertices();
  Matrix m(n, n);
  if (kind == SignalKind::line) {
    const double vol = static_cast<double>(g.volume());
    for (VertexId u = 0; u < n; ++u)
      if (g.degree(u) == 0)
        throw BackendError("line signal undefined: vertex " + std::to_string(u) + " has degree 0");
    for (VertexId u = 0; u < n; ++u) {
      const double du = static_cast<double>(g.degree(u));
      for (VertexId v : g.neighbors(u))
        m(u, v) = 1.0 / (vol * du * static_cast<double>(g.degree(v)));
    }
  } else {
    for (VertexId u = 0; u < n; ++u)
      for (VertexId w : g.neighbors(u))
        for (VertexId v : g.neighbors(w)) m(u, v) += 1.0;
  }
  return m;
}

struct SpectralFactors {
  Matrix vectors;                      // column i: left singular vector i
  std::vector<double> singular_values;  // descending
};

// SVD of a symmetric matrix through its eigendecomposition: singular values
// are |eigenvalues|, left singular vectors the eigenvectors. Each vector is
// oriented so its first non-negligible component is positive.
inline SpectralFactors symmetric_svd(const Matrix& m) {
  if (!all_finite(m)) throw BackendError("signal matrix has non-finite entries");
  double scale = 0.0;
  for (double x : m.data()) scale = std::max(scale, std::abs(x));
  if (!is_symmetric(m, 1e-12 * std::max(1.0, scale)))
    throw BackendError("signal matrix is not symmetric");
  const auto eig = symmetric_eigen(m);
  const std::size_t n = m.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(eig.values[a]) > std::abs(eig.values[b]);
  });
  SpectralFactors f;
  f.vectors = Matrix(n, n);
  f.singular_values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    f.singular_values[j] = std::abs(eig.values[src]);
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = eig.vectors(i, src);
      if (std::abs(x) > 1e-10) {
        sign = x < 0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) f.vectors(i, j) = sign * eig.vectors(i, src);
  }
  return f;
}

// E = U[:, 1:k] D[1:k, 1:k]^alpha.
inline Matrix svd_embed(const Matrix& m, std::size_t k, double alpha) {
  if (k > m.rows())
    throw BackendError("embedding dimension " + std::to_string(k) + " exceeds matrix order " +
                       std::to_string(m.rows()));
  const auto f = symmetric_svd(m);
  Matrix e(m.rows(), k);
  for (std::size_t j = 0; j < k; ++j) {
    const double s = std::pow(f.singular_values[j], alpha);
    for (std::size_t i = 0; i < m.rows(); ++i) e(i, j) = f.vectors(i, j) * s;
  }
  return e;
}

}  // namespace pge
