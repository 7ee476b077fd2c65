#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pge/embedding.hpp"
#include "pge/error.hpp"
#include "pge/graph.hpp"
#include "pge/matrix.hpp"
#include "pge/partition.hpp"
#include "pge/spectral.hpp"

namespace pge {

// PIP(Z1, Z2) = ||Z1 Z1ᵀ - Z2 Z2ᵀ||_F. Row i of both matrices must describe
// the same vertex; the column counts may differ. Evaluated entrywise up to
// kDirectPipRows rows, so small distances keep full precision; larger inputs
// use ||Z1ᵀZ1||² + ||Z2ᵀZ2||² - 2||Z1ᵀZ2||².
inline constexpr std::size_t kDirectPipRows = 4096;

inline double pip_distance(const Matrix& z1, const Matrix& z2) {
  if (z1.rows() != z2.rows())
    throw std::invalid_argument("pip_distance: row counts differ (" + std::to_string(z1.rows()) +
                                " vs " + std::to_string(z2.rows()) + ")");
  if (z1.rows() > kDirectPipRows) {
    const double a = frobenius_norm(transposed_multiply(z1, z1));
    const double b = frobenius_norm(transposed_multiply(z2, z2));
    const double c = frobenius_norm(transposed_multiply(z1, z2));
    return std::sqrt(std::max(0.0, a * a + b * b - 2.0 * c * c));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < z1.rows(); ++i) {
    for (std::size_t j = i; j < z1.rows(); ++j) {
      const double diff = dot(z1.row(i), z1.row(j)) - dot(z2.row(i), z2.row(j));
      sum += (i == j ? 1.0 : 2.0) * diff * diff;
    }
  }
  return std::sqrt(sum);
}

// Aligns rows by vertex id (order of `a`).
inline double pip_distance(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("pip_distance: embeddings cover different vertex counts");
  return pip_distance(a.values(), rows_in_order(b, a.index()));
}

// d(z1_u, z2_u | L): distance between u's inner products with the core
// vertices in each space. Rows of the core matrices are the core vertices.
inline double core_distance(std::span<const double> z1_u, std::span<const double> z2_u,
                            const Matrix& z1_core, const Matrix& z2_core) {
  if (z1_core.rows() != z2_core.rows())
    throw std::invalid_argument("core_distance: core sets differ in size");
  if (z1_core.rows() == 0) throw std::invalid_argument("core_distance: empty core set");
  double sum = 0.0;
  for (std::size_t c = 0; c < z1_core.rows(); ++c) {
    const double diff = dot(z1_u, z1_core.row(c)) - dot(z2_u, z2_core.row(c));
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

inline double core_distance(const EmbeddingMatrix& z1, const EmbeddingMatrix& z2, VertexId u,
                            std::span<const VertexId> core) {
  for (VertexId c : core)
    if (!z1.contains(c) || !z2.contains(c))
      throw std::out_of_range("core vertex " + std::to_string(c) + " missing from an embedding");
  return core_distance(z1.row_for(u), z2.row_for(u), rows_in_order(z1, core),
                       rows_in_order(z2, core));
}

// Singular values of a symmetric matrix, descending.
inline std::vector<double> spectrum(const Matrix& m) { return symmetric_svd(m).singular_values; }

// PIP bound between centralised and two-part parallel embeddings:
//   3 Σ_{i<=k} λ_i^{2α} + 2 Σ_{i<=k} (λ_i^{2α} - λ_{i+1}^{2α}) √(i(n-i))
//   + Σ_{m∈{n1,n2}} √( Σ_{i<=2m-n} (λ_i^{2α} - λ_{i+2(n-m)}^{2α})² + Σ_{i=2m-n+1}^{k} λ_i^{4α} )
// with 1-based λ, λ_i = 0 past the end of the list, empty ranges summing to 0.
inline double theorem1_bound(std::span<const double> spectrum_desc, double alpha, std::size_t k,
                             std::size_t n, std::size_t n1, std::size_t n2) {
  for (std::size_t i = 0; i < spectrum_desc.size(); ++i) {
    if (!(spectrum_desc[i] >= 0.0)) throw ConfigError("spectrum must be non-negative");
    if (i > 0 && spectrum_desc[i] > spectrum_desc[i - 1])
      throw ConfigError("spectrum must be sorted in descending order");
  }
  if (n1 + n2 != n) throw ConfigError("bound: n1 + n2 must equal n");
  if (k > n) throw ConfigError("bound: k must not exceed n");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("bound: alpha must lie in [0, 1]");

  const auto lam = [&](long long i) {  // λ_i^{2α}
    if (i < 1 || static_cast<std::size_t>(i) > spectrum_desc.size()) return 0.0;
    return std::pow(spectrum_desc[static_cast<std::size_t>(i - 1)], 2.0 * alpha);
  };
  const auto kk = static_cast<long long>(k);
  const auto nn = static_cast<long long>(n);

  double first = 0.0, second = 0.0;
  for (long long i = 1; i <= kk; ++i) {
    first += lam(i);
    second += (lam(i) - lam(i + 1)) * std::sqrt(static_cast<double>(i * (nn - i)));
  }
  double third = 0.0;
  for (const std::size_t m_size : {n1, n2}) {
    const auto m = static_cast<long long>(m_size);
    const long long head = 2 * m - nn;
    double inner = 0.0;
    for (long long i = 1; i <= head; ++i) {
      const double diff = lam(i) - lam(i + 2 * (nn - m));
      inner += diff * diff;
    }
    for (long long i = std::max(1LL, head + 1); i <= kk; ++i) inner += lam(i) * lam(i);
    third += std::sqrt(inner);
  }
  return 3.0 * first + 2.0 * second + third;
}

// How the two parts' signal matrices are formed in a bound trial.
enum class PartSignal {
  restricted,  // principal submatrix of the whole graph's signal matrix
  own,         // signal matrix of the induced subgraph
};

struct BoundTrial {
  SignalKind kind = SignalKind::hope;
  double alpha = 0.5;
  std::size_t k = 0;
  std::size_t n = 0, n1 = 0, n2 = 0;
  double pip = 0.0;
  double bound = 0.0;
  std::vector<double> spectrum;

  bool holds() const { return pip <= bound; }
};

// Centralised E from the whole signal matrix versus F stacked from the two
// independently factorised, non-overlapping parts.
inline BoundTrial check_bound(const Graph& g, std::span<const VertexSet> parts, SignalKind kind,
                              double alpha, std::size_t k,
                              PartSignal mode = PartSignal::restricted) {
  if (parts.size() != 2) throw ConfigError("bound check needs exactly two parts");
  const std::size_t n = g.num_vertices();
  if (parts[0].size() + parts[1].size() != n) throw ConfigError("bound check parts must cover V");
  (void)cut_edges(g, parts);  // throws on overlapping parts

  const Matrix m = signal_matrix(g, kind);
  BoundTrial t;
  t.kind = kind;
  t.alpha = alpha;
  t.k = k;
  t.n = n;
  t.n1 = parts[0].size();
  t.n2 = parts[1].size();
  t.spectrum = spectrum(m);

  const Matrix e = svd_embed(m, k, alpha);
  Matrix f(n, k);
  for (VertexSet part : parts) {
    std::sort(part.begin(), part.end());
    const Matrix sub = mode == PartSignal::restricted
                           ? principal_submatrix(m, std::span<const VertexId>(part))
                           : signal_matrix(induced_subgraph(g, part).local, kind);
    const Matrix fp = svd_embed(sub, k, alpha);
    for (std::size_t r = 0; r < part.size(); ++r) {
      auto src = fp.row(r);
      std::copy(src.begin(), src.end(), f.row(part[r]).begin());
    }
  }
  t.pip = pip_distance(e, f);
  t.bound = theorem1_bound(t.spectrum, alpha, k, n, t.n1, t.n2);
  return t;
}

}  // namespace pge
