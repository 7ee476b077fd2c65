#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "pge/embedding.hpp"
#include "pge/error.hpp"
#include "pge/graph.hpp"
#include "pge/skipgram.hpp"
#include "pge/spectral.hpp"

namespace pge {

enum class BackendKind { walk, svd_line, svd_hope };

inline BackendKind parse_backend(std::string_view name) {
  if (name == "walk") return BackendKind::walk;
  if (name == "svd-line") return BackendKind::svd_line;
  if (name == "svd-hope") return BackendKind::svd_hope;
  throw ConfigError("unknown backend '" + std::string(name) + "' (expected walk, svd-line, svd-hope)");
}

inline std::string_view to_string(BackendKind k) {
  switch (k) {
    case BackendKind::walk: return "walk";
    case BackendKind::svd_line: return "svd-line";
    case BackendKind::svd_hope: return "svd-hope";
  }
  return "?";
}

inline bool is_spectral(BackendKind k) { return k != BackendKind::walk; }

struct BackendConfig {
  BackendKind kind = BackendKind::walk;
  std::size_t dim = 128;
  double alpha = 0.5;  // signal parameter, spectral backends only
  WalkConfig walk;     // dim and seed are overridden per run
  std::size_t dense_cap = 5000;

  SignalSpec signal() const {
    return SignalSpec{kind == BackendKind::svd_line ? SignalKind::line : SignalKind::hope, alpha, dim};
  }
};

// Embeds a whole graph; rows follow the graph's own vertex ids.
inline EmbeddingMatrix embed_graph(const Graph& g, const BackendConfig& cfg, std::uint64_t seed) {
  if (g.num_vertices() == 0) throw BackendError("cannot embed an empty graph");
  Matrix values;
  if (is_spectral(cfg.kind)) {
    if (g.num_vertices() > cfg.dense_cap)
      throw BackendError("graph order " + std::to_string(g.num_vertices()) +
                         " exceeds the dense spectral cap " + std::to_string(cfg.dense_cap));
    const SignalSpec spec = cfg.signal();
    spec.validate(g.num_vertices());
    values = svd_embed(signal_matrix(g, spec.kind), spec.dim, spec.alpha);
  } else {
    WalkConfig wc = cfg.walk;
    wc.dim = cfg.dim;
    wc.seed = seed;
    wc.validate();
    const auto walks = generate_walks(g, wc);
    values = skipgram_train(walks, g.num_vertices(), wc).embedding;
  }
  if (!all_finite(values)) throw BackendError("backend produced non-finite embeddings");
  return EmbeddingMatrix::with_identity_index(std::move(values));
}

// Runs the backend on the subgraph's local graph; rows are indexed by
// parent vertex ids.
inline EmbeddingMatrix embed_subgraph(const Subgraph& sub, const BackendConfig& cfg,
                                      std::uint64_t seed) {
  EmbeddingMatrix local = embed_graph(sub.local, cfg, seed);
  return EmbeddingMatrix(local.values(), sub.vertices);
}

}  // namespace pge
