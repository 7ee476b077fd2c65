#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "pge/graph.hpp"

namespace pge {

inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (coin(rng)) edges.push_back({u, v});
  return Graph::from_edges(n, edges);
}

struct LabeledGraph {
  Graph graph;
  std::vector<std::uint32_t> community;  // one label per vertex
};

// Dense stochastic block model with equal-sized blocks (the last block takes
// the remainder).
inline LabeledGraph stochastic_block_model(std::size_t n, std::size_t blocks, double p_in,
                                           double p_out, std::uint64_t seed) {
  LabeledGraph out;
  out.community.resize(n);
  const std::size_t block_size = (n + blocks - 1) / blocks;
  for (std::size_t v = 0; v < n; ++v)
    out.community[v] = static_cast<std::uint32_t>(std::min(v / block_size, blocks - 1));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) {
      const double p = out.community[u] == out.community[v] ? p_in : p_out;
      if (unit(rng) < p) edges.push_back({u, v});
    }
  out.graph = Graph::from_edges(n, edges);
  return out;
}

// Sparse planted-partition graph for large benchmarks: every vertex draws
// avg_degree/2 partners, a fraction `intra` of them from its own block.
// Runs in O(n * avg_degree).
inline LabeledGraph sparse_planted_partition(std::size_t n, std::size_t blocks,
                                             double avg_degree, double intra,
                                             std::uint64_t seed) {
  LabeledGraph out;
  out.community.resize(n);
  const std::size_t block_size = (n + blocks - 1) / blocks;
  for (std::size_t v = 0; v < n; ++v)
    out.community[v] = static_cast<std::uint32_t>(std::min(v / block_size, blocks - 1));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  const auto draws = static_cast<std::size_t>(avg_degree / 2.0 + 0.5);
  std::vector<Edge> edges;
  edges.reserve(n * draws);
  for (VertexId u = 0; u < n; ++u) {
    const std::size_t b = out.community[u];
    const std::size_t lo = b * block_size;
    const std::size_t hi = std::min(n, lo + block_size) - 1;
    std::uniform_int_distribution<std::size_t> same(lo, hi);
    for (std::size_t t = 0; t < draws; ++t) {
      const auto v = static_cast<VertexId>(unit(rng) < intra ? same(rng) : any(rng));
      if (v != u) edges.push_back({u, v});
    }
  }
  out.graph = Graph::from_edges(n, edges);
  return out;
}

}  // namespace pge
