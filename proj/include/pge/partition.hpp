#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pge/error.hpp"
#include "pge/graph.hpp"

namespace pge {

using VertexSet = std::vector<VertexId>;  // sorted, unique

// Maximal vertex counts k_1..k_n of the compute nodes.
struct Capacities {
  std::vector<std::size_t> limits;

  std::size_t parts() const noexcept { return limits.size(); }
  std::size_t total() const noexcept {
    return std::accumulate(limits.begin(), limits.end(), std::size_t{0});
  }

  static Capacities uniform(std::size_t parts, std::size_t k) {
    return Capacities{std::vector<std::size_t>(parts, k)};
  }

  // Comma-separated list, e.g. "25,25,25".
  static Capacities parse(std::string_view text) {
    Capacities caps;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
      std::size_t pos = 0;
      long long v = 0;
      try {
        v = std::stoll(item, &pos);
      } catch (const std::exception&) {
        throw ConfigError("invalid capacity '" + item + "'");
      }
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size() || v < 1) throw ConfigError("invalid capacity '" + item + "'");
      caps.limits.push_back(static_cast<std::size_t>(v));
    }
    if (caps.limits.empty()) throw ConfigError("empty capacity list");
    return caps;
  }

  // Every k_i >= 1 and sum k_i > |V|.
  void validate(std::size_t num_vertices) const {
    if (limits.empty()) throw ConfigError("at least one compute node is required");
    for (std::size_t i = 0; i < limits.size(); ++i)
      if (limits[i] < 1) throw ConfigError("capacity k_" + std::to_string(i) + " must be >= 1");
    if (total() <= num_vertices)
      throw ConfigError("infeasible capacities: sum of k_i (" + std::to_string(total()) +
                        ") must exceed |V| (" + std::to_string(num_vertices) + ")");
  }
};

namespace detail {

struct WeightedGraph {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> adjacency;
  std::vector<std::int64_t> edge_weight;
  std::vector<std::int64_t> vertex_weight;

  std::size_t size() const noexcept { return vertex_weight.size(); }
  std::int64_t total_weight() const {
    return std::accumulate(vertex_weight.begin(), vertex_weight.end(), std::int64_t{0});
  }
};

inline WeightedGraph weighted_from(const Graph& g) {
  WeightedGraph w;
  const std::size_t n = g.num_vertices();
  w.offsets.resize(n + 1);
  w.offsets[0] = 0;
  w.adjacency.reserve(g.volume());
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId u : g.neighbors(v)) w.adjacency.push_back(u);
    w.offsets[v + 1] = w.adjacency.size();
  }
  w.edge_weight.assign(w.adjacency.size(), 1);
  w.vertex_weight.assign(n, 1);
  return w;
}

struct CoarseLevel {
  WeightedGraph graph;
  std::vector<std::uint32_t> fine_to_coarse;
};

// Heavy-edge matching: vertices are visited in random order and matched to
// the unmatched neighbor with the heaviest connecting edge, subject to a cap
// on the combined vertex weight.
inline CoarseLevel coarsen(const WeightedGraph& g, std::int64_t max_vertex_weight,
                           std::mt19937_64& rng) {
  constexpr std::uint32_t kNone = UINT32_MAX;
  const std::size_t n = g.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::uint32_t> mate(n, kNone);
  for (std::uint32_t u : order) {
    if (mate[u] != kNone) continue;
    std::uint32_t best = kNone;
    std::int64_t best_w = 0;
    for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
      const std::uint32_t v = g.adjacency[e];
      if (v == u || mate[v] != kNone) continue;
      if (g.vertex_weight[u] + g.vertex_weight[v] > max_vertex_weight) continue;
      if (g.edge_weight[e] > best_w) {
        best_w = g.edge_weight[e];
        best = v;
      }
    }
    if (best != kNone) {
      mate[u] = best;
      mate[best] = u;
    } else {
      mate[u] = u;
    }
  }

  CoarseLevel out;
  out.fine_to_coarse.assign(n, kNone);
  std::vector<std::uint32_t> first, second;
  for (std::uint32_t u = 0; u < n; ++u) {
    if (out.fine_to_coarse[u] != kNone) continue;
    const auto c = static_cast<std::uint32_t>(first.size());
    out.fine_to_coarse[u] = c;
    out.fine_to_coarse[mate[u]] = c;
    first.push_back(u);
    second.push_back(mate[u] == u ? kNone : mate[u]);
  }

  const std::size_t cn = first.size();
  WeightedGraph& cg = out.graph;
  cg.offsets.assign(cn + 1, 0);
  cg.vertex_weight.resize(cn);
  std::vector<std::int64_t> slot(cn, -1);
  for (std::uint32_t c = 0; c < cn; ++c) {
    const std::size_t begin = cg.adjacency.size();
    std::int64_t weight = 0;
    for (std::uint32_t member : {first[c], second[c]}) {
      if (member == kNone) continue;
      weight += g.vertex_weight[member];
      for (std::size_t e = g.offsets[member]; e < g.offsets[member + 1]; ++e) {
        const std::uint32_t target = out.fine_to_coarse[g.adjacency[e]];
        if (target == c) continue;
        if (slot[target] < 0) {
          slot[target] = static_cast<std::int64_t>(cg.adjacency.size());
          cg.adjacency.push_back(target);
          cg.edge_weight.push_back(g.edge_weight[e]);
        } else {
          cg.edge_weight[static_cast<std::size_t>(slot[target])] += g.edge_weight[e];
        }
      }
    }
    for (std::size_t e = begin; e < cg.adjacency.size(); ++e) slot[cg.adjacency[e]] = -1;
    cg.vertex_weight[c] = weight;
    cg.offsets[c + 1] = cg.adjacency.size();
  }
  return out;
}

inline std::int64_t cut_weight(const WeightedGraph& g, std::span<const std::uint32_t> part) {
  std::int64_t cut = 0;
  for (std::size_t u = 0; u < g.size(); ++u)
    for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e)
      if (part[u] != part[g.adjacency[e]]) cut += g.edge_weight[e];
  return cut / 2;
}

// Capacity-respecting greedy region growing. Parts 0..n-2 grow from a start
// vertex by repeatedly absorbing the frontier vertex most connected to the
// part until they reach their share of the total weight; the last part takes
// the rest, with overflow pushed to parts that still have room.
inline std::optional<std::vector<std::uint32_t>> grow_partition(
    const WeightedGraph& g, std::span<const std::int64_t> limits, std::mt19937_64& rng,
    bool random_starts) {
  constexpr std::uint32_t kNone = UINT32_MAX;
  const std::size_t n = g.size();
  const std::size_t parts = limits.size();
  const double total_limit = std::accumulate(limits.begin(), limits.end(), 0.0);
  const double total = static_cast<double>(g.total_weight());

  std::vector<std::uint32_t> start_order(n);
  std::iota(start_order.begin(), start_order.end(), 0u);
  if (random_starts) {
    std::shuffle(start_order.begin(), start_order.end(), rng);
  } else {
    std::stable_sort(start_order.begin(), start_order.end(), [&](auto a, auto b) {
      return g.offsets[a + 1] - g.offsets[a] < g.offsets[b + 1] - g.offsets[b];
    });
  }

  std::vector<std::uint32_t> part(n, kNone);
  std::vector<std::int64_t> part_w(parts, 0);
  std::vector<std::int64_t> conn(n, 0);
  std::vector<char> rejected(n, 0);
  std::size_t remaining = n;

  for (std::size_t p = 0; p + 1 < parts && remaining > 0; ++p) {
    const double target = static_cast<double>(limits[p]) * total / total_limit;
    using Entry = std::pair<std::int64_t, std::int64_t>;  // (connection, -vertex)
    std::priority_queue<Entry> frontier;
    std::vector<std::uint32_t> touched;
    std::size_t cursor = 0;
    while (static_cast<double>(part_w[p]) < target && remaining > 0) {
      std::uint32_t v = kNone;
      while (!frontier.empty()) {
        auto [c, neg] = frontier.top();
        frontier.pop();
        const auto cand = static_cast<std::uint32_t>(-neg);
        if (part[cand] == kNone && !rejected[cand] && conn[cand] == c) {
          v = cand;
          break;
        }
      }
      if (v == kNone) {
        while (cursor < n && (part[start_order[cursor]] != kNone || rejected[start_order[cursor]]))
          ++cursor;
        if (cursor == n) break;
        v = start_order[cursor];
      }
      if (part_w[p] + g.vertex_weight[v] > limits[p]) {
        rejected[v] = 1;
        touched.push_back(v);
        continue;
      }
      part[v] = static_cast<std::uint32_t>(p);
      part_w[p] += g.vertex_weight[v];
      --remaining;
      for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
        const std::uint32_t w = g.adjacency[e];
        if (part[w] != kNone) continue;
        if (conn[w] == 0) touched.push_back(w);
        conn[w] += g.edge_weight[e];
        frontier.emplace(conn[w], -static_cast<std::int64_t>(w));
      }
    }
    for (std::uint32_t w : touched) {
      conn[w] = 0;
      rejected[w] = 0;
    }
  }

  const auto last = static_cast<std::uint32_t>(parts - 1);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (part[v] == kNone) {
      part[v] = last;
      part_w[last] += g.vertex_weight[v];
    }
  }

  if (part_w[last] > limits[last]) {
    std::vector<std::int64_t> to(parts);
    for (std::uint32_t v = 0; v < n && part_w[last] > limits[last]; ++v) {
      if (part[v] != last) continue;
      std::fill(to.begin(), to.end(), 0);
      for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e)
        to[part[g.adjacency[e]]] += g.edge_weight[e];
      std::int64_t best_conn = -1;
      std::uint32_t best = kNone;
      for (std::uint32_t q = 0; q < last; ++q) {
        if (part_w[q] + g.vertex_weight[v] > limits[q]) continue;
        if (to[q] > best_conn) {
          best_conn = to[q];
          best = q;
        }
      }
      if (best == kNone) continue;
      part[v] = best;
      part_w[best] += g.vertex_weight[v];
      part_w[last] -= g.vertex_weight[v];
    }
    if (part_w[last] > limits[last]) return std::nullopt;
  }
  return part;
}

// Kernighan-Lin style boundary refinement under per-part caps: greedy
// positive-gain single moves, and pairwise swaps once single moves stall.
inline void refine(const WeightedGraph& g, std::vector<std::uint32_t>& part,
                   std::span<const std::int64_t> limits, int max_passes = 10) {
  const std::size_t n = g.size();
  const std::size_t parts = limits.size();
  std::vector<std::int64_t> part_w(parts, 0);
  for (std::size_t v = 0; v < n; ++v) part_w[part[v]] += g.vertex_weight[v];

  std::vector<std::int64_t> conn(parts, 0);
  std::vector<std::uint32_t> seen;
  auto gather = [&](std::uint32_t v) {
    seen.clear();
    for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
      const std::uint32_t q = part[g.adjacency[e]];
      if (conn[q] == 0) seen.push_back(q);
      conn[q] += g.edge_weight[e];
    }
  };
  auto clear = [&]() {
    for (std::uint32_t q : seen) conn[q] = 0;
    seen.clear();
  };
  auto gain_to = [&](std::uint32_t v, std::uint32_t target) {
    gather(v);
    const std::int64_t gain = conn[target] - conn[part[v]];
    clear();
    return gain;
  };
  auto edge_between = [&](std::uint32_t a, std::uint32_t b) {
    for (std::size_t e = g.offsets[a]; e < g.offsets[a + 1]; ++e)
      if (g.adjacency[e] == b) return g.edge_weight[e];
    return std::int64_t{0};
  };

  for (int pass = 0; pass < max_passes; ++pass) {
    bool moved = false;
    for (std::uint32_t v = 0; v < n; ++v) {
      const std::uint32_t own = part[v];
      gather(v);
      std::int64_t best_gain = 0;
      std::uint32_t best = own;
      for (std::uint32_t q : seen) {
        if (q == own) continue;
        const std::int64_t gain = conn[q] - conn[own];
        if (gain > best_gain && part_w[q] + g.vertex_weight[v] <= limits[q]) {
          best_gain = gain;
          best = q;
        }
      }
      clear();
      if (best != own) {
        part[v] = best;
        part_w[own] -= g.vertex_weight[v];
        part_w[best] += g.vertex_weight[v];
        moved = true;
      }
    }
    if (moved) continue;

    // Swap phase: best candidates per ordered part pair.
    constexpr std::size_t kCandidates = 32;
    std::map<std::pair<std::uint32_t, std::uint32_t>,
             std::vector<std::pair<std::int64_t, std::uint32_t>>> lists;
    for (std::uint32_t v = 0; v < n; ++v) {
      gather(v);
      for (std::uint32_t q : seen)
        if (q != part[v]) lists[{part[v], q}].emplace_back(conn[q] - conn[part[v]], v);
      clear();
    }
    for (auto& [key, list] : lists) {
      std::sort(list.begin(), list.end(),
                [](const auto& x, const auto& y) { return x.first > y.first || (x.first == y.first && x.second < y.second); });
      if (list.size() > kCandidates) list.resize(kCandidates);
    }
    bool swapped = false;
    for (auto& [key, forward] : lists) {
      const auto [a, b] = key;
      if (a > b) continue;
      auto it = lists.find({b, a});
      if (it == lists.end()) continue;
      for (const auto& [gv0, v] : forward) {
        if (part[v] != a) continue;
        for (const auto& [gu0, u] : it->second) {
          if (part[u] != b || part[v] != a) continue;
          if (gv0 + gu0 <= 0) continue;
          const std::int64_t wa = part_w[a] - g.vertex_weight[v] + g.vertex_weight[u];
          const std::int64_t wb = part_w[b] - g.vertex_weight[u] + g.vertex_weight[v];
          if (wa > limits[a] || wb > limits[b]) continue;
          const std::int64_t gain = gain_to(v, b) + gain_to(u, a) - 2 * edge_between(v, u);
          if (gain <= 0) continue;
          part[v] = b;
          part[u] = a;
          part_w[a] = wa;
          part_w[b] = wb;
          swapped = true;
          break;
        }
      }
    }
    if (!swapped) break;
  }
}

}  // namespace detail

// Multilevel capacity-constrained partitioning: heavy-edge-matching
// coarsening, greedy growth on the coarsest level, then projection with
// boundary refinement on every level. Part i receives at most limits[i]
// vertices. The cut is minimised heuristically.
inline std::vector<VertexSet> partition_vertices(const Graph& g,
                                                 std::span<const std::size_t> limits,
                                                 std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  const std::size_t parts = limits.size();
  if (parts < 1) throw ConfigError("number of parts must be >= 1");
  const std::size_t total = std::accumulate(limits.begin(), limits.end(), std::size_t{0});
  if (total < n)
    throw CapacityError("infeasible part limits: sum " + std::to_string(total) + " < |V| = " +
                        std::to_string(n));

  std::vector<VertexSet> result(parts);
  if (parts == 1) {
    result[0].resize(n);
    std::iota(result[0].begin(), result[0].end(), VertexId{0});
    return result;
  }

  std::vector<std::int64_t> lim(limits.begin(), limits.end());
  std::mt19937_64 rng(seed);

  std::vector<detail::WeightedGraph> levels;
  std::vector<std::vector<std::uint32_t>> maps;
  levels.push_back(detail::weighted_from(g));
  const std::size_t coarsest = std::max<std::size_t>(64, 20 * parts);
  const std::int64_t min_limit = *std::min_element(lim.begin(), lim.end());
  const std::int64_t max_vw =
      std::max<std::int64_t>(1, std::min<std::int64_t>(min_limit, static_cast<std::int64_t>(n / parts)) / 8);
  while (levels.back().size() > coarsest) {
    auto level = detail::coarsen(levels.back(), max_vw, rng);
    if (static_cast<double>(level.graph.size()) > 0.9 * static_cast<double>(levels.back().size()))
      break;
    levels.push_back(std::move(level.graph));
    maps.push_back(std::move(level.fine_to_coarse));
  }

  std::size_t level = levels.size() - 1;
  std::optional<std::vector<std::uint32_t>> best;
  for (;;) {
    std::int64_t best_cut = 0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      auto cand = detail::grow_partition(levels[level], lim, rng, attempt > 0);
      if (!cand) continue;
      detail::refine(levels[level], *cand, lim);
      const std::int64_t cut = detail::cut_weight(levels[level], *cand);
      if (!best || cut < best_cut) {
        best = std::move(cand);
        best_cut = cut;
      }
    }
    // Lumpy coarse weights can make packing fail; fall back to a finer level.
    if (best || level == 0) break;
    --level;
  }
  if (!best) throw CapacityError("partitioner could not satisfy the part limits");

  std::vector<std::uint32_t> assignment = std::move(*best);
  for (std::size_t l = level; l > 0; --l) {
    const auto& to_coarse = maps[l - 1];
    std::vector<std::uint32_t> fine(to_coarse.size());
    for (std::size_t u = 0; u < fine.size(); ++u) fine[u] = assignment[to_coarse[u]];
    detail::refine(levels[l - 1], fine, lim);
    assignment = std::move(fine);
  }

  for (VertexId v = 0; v < n; ++v) result[assignment[v]].push_back(v);
  return result;
}

// decomp(G, n, {k_i}) with room reserved for `anchor_count` anchors in every
// part, so that |V_i ∪ A| <= k_i holds after the merge.
inline std::vector<VertexSet> decompose(const Graph& g, const Capacities& caps,
                                        std::size_t anchor_count, std::uint64_t seed) {
  caps.validate(g.num_vertices());
  std::vector<std::size_t> limits;
  for (std::size_t i = 0; i < caps.parts(); ++i) {
    if (caps.limits[i] <= anchor_count)
      throw CapacityError("capacity k_" + std::to_string(i) + " = " +
                              std::to_string(caps.limits[i]) + " cannot hold " +
                              std::to_string(anchor_count) + " anchors plus its own part",
                          i);
    limits.push_back(caps.limits[i] - anchor_count);
  }
  return partition_vertices(g, limits, seed);
}

// Edges whose endpoints lie in different parts. Vertices outside every part
// contribute no cut edges.
inline std::vector<Edge> cut_edges(const Graph& g, std::span<const VertexSet> parts) {
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> owner(g.num_vertices(), kNone);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (VertexId v : parts[i]) {
      if (v >= g.num_vertices()) throw InputError("part vertex " + std::to_string(v) + " out of range");
      if (owner[v] != kNone && owner[v] != i)
        throw InputError("vertex " + std::to_string(v) + " assigned to parts " +
                         std::to_string(owner[v]) + " and " + std::to_string(i));
      owner[v] = static_cast<std::uint32_t>(i);
    }
  }
  std::vector<Edge> cut;
  for (const Edge& e : g.edges())
    if (owner[e.u] != kNone && owner[e.v] != kNone && owner[e.u] != owner[e.v]) cut.push_back(e);
  return cut;
}

struct AnchorSelection {
  std::vector<VertexId> anchors;                                 // sorted ascending
  std::vector<std::pair<VertexId, std::size_t>> border_degrees;  // (u, h_u) sorted by u
};

// h_u counts the cut edges incident to u; the d border vertices with the
// largest h_u become anchors, ties broken by smaller id.
inline AnchorSelection anchor_select(std::span<const Edge> cut, std::size_t d) {
  std::map<VertexId, std::size_t> h;
  for (const Edge& e : cut) {
    ++h[e.u];
    ++h[e.v];
  }
  AnchorSelection sel;
  sel.border_degrees.assign(h.begin(), h.end());
  auto ranked = sel.border_degrees;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t take = std::min(d, ranked.size());
  for (std::size_t i = 0; i < take; ++i) sel.anchors.push_back(ranked[i].first);
  std::sort(sel.anchors.begin(), sel.anchors.end());
  return sel;
}

// Baseline strategy: d vertices drawn uniformly from V.
inline std::vector<VertexId> random_anchors(std::size_t num_vertices, std::size_t d,
                                            std::uint64_t seed) {
  std::vector<VertexId> all(num_vertices);
  std::iota(all.begin(), all.end(), VertexId{0});
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(d, num_vertices));
  std::sort(all.begin(), all.end());
  return all;
}

inline std::size_t anchor_count_for_ratio(std::size_t num_vertices, double ratio) {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw ConfigError("anchor ratio must lie in [0, 1)");
  return static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(num_vertices) - 1e-9));
}

// Subgraph i is induced by V_i ∪ A.
inline std::vector<Subgraph> merge_anchors(const Graph& g, std::span<const VertexSet> parts,
                                           std::span<const VertexId> anchors) {
  std::vector<Subgraph> subs;
  subs.reserve(parts.size());
  for (const VertexSet& part : parts) {
    std::vector<VertexId> members(part.begin(), part.end());
    members.insert(members.end(), anchors.begin(), anchors.end());
    subs.push_back(induced_subgraph(g, members));
  }
  return subs;
}

struct Decomposition {
  std::vector<VertexSet> parts;
  std::vector<Edge> cut;
  std::vector<std::pair<VertexId, std::size_t>> border_degrees;
  std::vector<VertexId> anchors;
  std::vector<Subgraph> subgraphs;

  // Parent edges that landed in no subgraph: cut edges without an anchor
  // endpoint.
  std::size_t lost_edges() const {
    std::size_t lost = 0;
    for (const Edge& e : cut)
      if (!std::binary_search(anchors.begin(), anchors.end(), e.u) &&
          !std::binary_search(anchors.begin(), anchors.end(), e.v))
        ++lost;
    return lost;
  }
};

enum class AnchorStrategy { top_cut_degree, random };

// Builds the bookkeeping for given parts and anchors (e.g. from a manifest).
inline Decomposition assemble_decomposition(const Graph& g, std::vector<VertexSet> parts,
                                            std::vector<VertexId> anchors) {
  Decomposition d;
  for (auto& p : parts) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  d.parts = std::move(parts);
  d.cut = cut_edges(g, d.parts);
  d.border_degrees = anchor_select(d.cut, 0).border_degrees;
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  for (VertexId a : anchors)
    if (a >= g.num_vertices()) throw InputError("anchor " + std::to_string(a) + " out of range");
  d.anchors = std::move(anchors);
  d.subgraphs = merge_anchors(g, d.parts, d.anchors);
  return d;
}

// Graph decomposition for embedding: partition, select anchors, merge.
inline Decomposition decompose_with_anchors(const Graph& g, const Capacities& caps,
                                            std::size_t anchor_count, std::uint64_t seed,
                                            AnchorStrategy strategy = AnchorStrategy::top_cut_degree) {
  auto parts = decompose(g, caps, anchor_count, seed);
  auto cut = cut_edges(g, parts);
  auto selection = anchor_select(cut, anchor_count);
  if (strategy == AnchorStrategy::random)
    selection.anchors = random_anchors(g.num_vertices(), std::min(anchor_count, selection.border_degrees.size()),
                                       seed ^ 0x5bd1e995ULL);
  Decomposition d;
  d.parts = std::move(parts);
  d.cut = std::move(cut);
  d.border_degrees = std::move(selection.border_degrees);
  d.anchors = std::move(selection.anchors);
  d.subgraphs = merge_anchors(g, d.parts, d.anchors);
  return d;
}

// Manifest: one "part <i>: ids..." line per part and one "anchors: ids..." line.
inline void write_manifest(const Decomposition& d, std::ostream& out) {
  out << "# parts " << d.parts.size() << " anchors " << d.anchors.size() << '\n';
  for (std::size_t i = 0; i < d.parts.size(); ++i) {
    out << "part " << i << ':';
    for (VertexId v : d.parts[i]) out << ' ' << v;
    out << '\n';
  }
  out << "anchors:";
  for (VertexId a : d.anchors) out << ' ' << a;
  out << '\n';
}

struct Manifest {
  std::vector<VertexSet> parts;
  std::vector<VertexId> anchors;
};

inline Manifest read_manifest(std::istream& in) {
  Manifest m;
  bool has_anchors = false;
  std::string line;
  std::size_t line_no = 0;
  auto read_ids = [&](std::istringstream& s, std::vector<VertexId>& out) {
    long long id = 0;
    while (s >> id) {
      if (id < 0) throw InputError("manifest line " + std::to_string(line_no) + ": negative id");
      out.push_back(static_cast<VertexId>(id));
    }
    if (!s.eof()) throw InputError("manifest line " + std::to_string(line_no) + ": malformed id");
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream s(line);
    std::string head;
    if (!(s >> head) || head[0] == '#') continue;
    if (head == "anchors:") {
      read_ids(s, m.anchors);
      has_anchors = true;
    } else if (head == "part") {
      std::string index;
      s >> index;
      if (index.empty() || index.back() != ':' ||
          index.substr(0, index.size() - 1) != std::to_string(m.parts.size()))
        throw InputError("manifest line " + std::to_string(line_no) + ": expected 'part " +
                         std::to_string(m.parts.size()) + ":'");
      m.parts.emplace_back();
      read_ids(s, m.parts.back());
    } else {
      throw InputError("manifest line " + std::to_string(line_no) + ": unexpected '" + head + "'");
    }
  }
  if (m.parts.empty() || !has_anchors) throw InputError("manifest missing parts or anchors line");
  return m;
}

}  // namespace pge
