#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pge/embedding.hpp"
#include "pge/error.hpp"
#include "pge/linalg.hpp"
#include "pge/matrix.hpp"

namespace pge {

// d x d orthogonal map W; a source space is aligned as F_i * W.
struct OrthogonalMap {
  Matrix w;
  std::size_t anchor_rank = 0;  // numerical rank of the cross-covariance
};

// ||WᵀW - I||_F
inline double orthogonality_error(const Matrix& w) {
  return frobenius_norm(transposed_multiply(w, w) - Matrix::identity(w.cols()));
}

// Anchor embeddings in a source space and in the pivot space, row-aligned.
struct AnchorAlignment {
  Matrix source;  // H_i
  Matrix pivot;   // H_0

  static AnchorAlignment gather(const EmbeddingMatrix& src, const EmbeddingMatrix& piv,
                                std::span<const VertexId> anchors) {
    for (VertexId a : anchors) {
      if (!src.contains(a) || !piv.contains(a))
        throw AlignmentError("anchor " + std::to_string(a) + " missing from an embedding");
    }
    return {rows_in_order(src, anchors), rows_in_order(piv, anchors)};
  }
};

// ||H_i W - H_0||_F
inline double mapping_loss(const AnchorAlignment& align, const Matrix& w) {
  return frobenius_norm(multiply(align.source, w) - align.pivot);
}

// Orthogonal Procrustes: with H_iᵀ H_0 = U Σ Vᵀ, W = U Vᵀ minimises
// ||H_i W - H_0||_F over orthogonal W.
inline OrthogonalMap procrustes_fit(const AnchorAlignment& align) {
  const Matrix& hs = align.source;
  const Matrix& hp = align.pivot;
  if (hs.rows() == 0) throw AlignmentError("procrustes_fit: no anchors");
  if (hs.rows() != hp.rows() || hs.cols() != hp.cols())
    throw AlignmentError("procrustes_fit: anchor matrices differ in shape");
  if (!all_finite(hs) || !all_finite(hp))
    throw AlignmentError("procrustes_fit: non-finite anchor embeddings");
  const Matrix cross = transposed_multiply(hs, hp);
  if (frobenius_norm(cross) == 0.0)
    throw AlignmentError("procrustes_fit: degenerate (all-zero) anchor cross-covariance");
  const Svd f = svd(cross);
  OrthogonalMap map{multiply(f.u, transpose(f.v)), 0};
  const double tol = f.singular_values.front() * static_cast<double>(cross.rows()) * 1e-12;
  for (double s : f.singular_values)
    if (s > tol) ++map.anchor_rank;
  return map;
}

struct ReconcileResult {
  std::vector<EmbeddingMatrix> mapped;
  std::vector<OrthogonalMap> maps;  // identity for the pivot
  std::vector<double> fit_seconds;  // per-subgraph alignment time
  std::vector<std::string> warnings;
};

inline EmbeddingMatrix apply_map(const EmbeddingMatrix& e, const Matrix& w) {
  return EmbeddingMatrix(multiply(e.values(), w),
                         std::vector<VertexId>(e.index().begin(), e.index().end()));
}

// Maps every space into the pivot space using the shared anchors.
inline ReconcileResult reconcile_all(std::span<const EmbeddingMatrix> embeddings,
                                     std::span<const VertexId> anchors, std::size_t pivot) {
  if (embeddings.empty()) throw AlignmentError("reconcile_all: no embeddings");
  if (pivot >= embeddings.size()) throw AlignmentError("reconcile_all: pivot index out of range");
  const std::size_t d = embeddings[pivot].dim();
  for (std::size_t i = 0; i < embeddings.size(); ++i)
    if (embeddings[i].dim() != d)
      throw AlignmentError("reconcile_all: dimension mismatch in subgraph " + std::to_string(i), i);

  ReconcileResult out;
  out.mapped.reserve(embeddings.size());
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    if (i == pivot) {
      out.mapped.push_back(embeddings[i]);
      out.maps.push_back({Matrix::identity(d), d});
      out.fit_seconds.push_back(0.0);
      continue;
    }
    if (anchors.empty()) throw AlignmentError("reconcile_all: no anchors to align subgraph " + std::to_string(i), i);
    const auto t0 = std::chrono::steady_clock::now();
    OrthogonalMap map;
    try {
      map = procrustes_fit(AnchorAlignment::gather(embeddings[i], embeddings[pivot], anchors));
    } catch (const AlignmentError& ex) {
      throw AlignmentError("subgraph " + std::to_string(i) + ": " + ex.what(), i);
    }
    out.mapped.push_back(apply_map(embeddings[i], map.w));
    out.fit_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    if (map.anchor_rank < d)
      out.warnings.push_back("subgraph " + std::to_string(i) + ": anchor cross-covariance rank " +
                             std::to_string(map.anchor_rank) + " < dim " + std::to_string(d) +
                             "; orthogonal map is not unique");
    out.maps.push_back(std::move(map));
  }
  return out;
}

struct PivotPolicy {
  enum class Kind { largest, index } kind = Kind::largest;
  std::size_t index = 0;

  // "largest" or "index:<i>"
  static PivotPolicy parse(std::string_view text) {
    if (text == "largest") return {};
    constexpr std::string_view prefix = "index:";
    if (text.substr(0, prefix.size()) == prefix) {
      const std::string rest(text.substr(prefix.size()));
      std::size_t pos = 0;
      try {
        const auto i = std::stoull(rest, &pos);
        if (pos == rest.size()) return {Kind::index, static_cast<std::size_t>(i)};
      } catch (const std::exception&) {
      }
    }
    throw ConfigError("invalid pivot policy '" + std::string(text) + "'");
  }
};

// Largest space wins; ties go to the lowest index.
inline std::size_t choose_pivot(std::span<const EmbeddingMatrix> embeddings, PivotPolicy policy) {
  if (embeddings.empty()) throw AlignmentError("choose_pivot: no embeddings");
  if (policy.kind == PivotPolicy::Kind::index) {
    if (policy.index >= embeddings.size())
      throw ConfigError("pivot index " + std::to_string(policy.index) + " out of range");
    return policy.index;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < embeddings.size(); ++i)
    if (embeddings[i].rows() > embeddings[best].rows()) best = i;
  return best;
}

// One row per vertex in id order. A vertex present in the pivot takes the
// pivot row (this covers every anchor); any other vertex takes the row of
// the first matrix containing it.
inline EmbeddingMatrix assemble_global(std::span<const EmbeddingMatrix> mapped,
                                       std::size_t num_vertices, std::size_t pivot) {
  if (mapped.empty()) throw AlignmentError("assemble_global: no embeddings");
  if (pivot >= mapped.size()) throw AlignmentError("assemble_global: pivot index out of range");
  const std::size_t d = mapped[pivot].dim();
  Matrix out(num_vertices, d);
  std::vector<char> filled(num_vertices, 0);
  auto take = [&](const EmbeddingMatrix& e) {
    if (e.dim() != d) throw AlignmentError("assemble_global: dimension mismatch");
    for (std::size_t r = 0; r < e.rows(); ++r) {
      const VertexId v = e.index()[r];
      if (v >= num_vertices) throw AlignmentError("assemble_global: vertex id out of range");
      if (filled[v]) continue;
      auto src = e.values().row(r);
      std::copy(src.begin(), src.end(), out.row(v).begin());
      filled[v] = 1;
    }
  };
  take(mapped[pivot]);
  for (std::size_t i = 0; i < mapped.size(); ++i)
    if (i != pivot) take(mapped[i]);
  for (std::size_t v = 0; v < num_vertices; ++v)
    if (!filled[v])
      throw AlignmentError("assemble_global: vertex " + std::to_string(v) + " missing from all subgraphs");
  return EmbeddingMatrix::with_identity_index(std::move(out));
}

}  // namespace pge
