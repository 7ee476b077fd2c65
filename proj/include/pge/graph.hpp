#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pge/error.hpp"

namespace pge {

using VertexId = std::uint32_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  // Canonical orientation u < v.
  static Edge make(VertexId a, VertexId b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable simple undirected graph in compressed row layout. Neighbor lists
// are sorted; internal ids are dense in [0, num_vertices()).
class Graph {
 public:
  Graph() = default;

  // Builds from an arbitrary edge list: self-loops are dropped and duplicate
  // or reversed edges collapse. `labels`, if non-empty, must have one entry
  // per vertex.
  static Graph from_edges(std::size_t num_vertices, std::span<const Edge> edges,
                          std::vector<std::string> labels = {}) {
    if (!labels.empty() && labels.size() != num_vertices)
      throw std::invalid_argument("Graph: label count does not match vertex count");
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (const Edge& e : edges) {
      if (e.u >= num_vertices || e.v >= num_vertices)
        throw std::out_of_range("Graph: edge endpoint out of range");
      if (e.u == e.v) continue;
      canon.push_back(Edge::make(e.u, e.v));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

    Graph g;
    g.offsets_.assign(num_vertices + 1, 0);
    for (const Edge& e : canon) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < num_vertices; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adjacency_.resize(g.offsets_.back());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : canon) {
      g.adjacency_[cursor[e.u]++] = e.v;
      g.adjacency_[cursor[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < num_vertices; ++i)
      std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    g.num_edges_ = canon.size();
    g.labels_ = std::move(labels);
    for (VertexId i = 0; i < g.labels_.size(); ++i) g.label_index_.emplace(g.labels_[i], i);
    return g;
  }

  std::size_t num_vertices() const noexcept {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }
  std::size_t num_edges() const noexcept { return num_edges_; }

  std::span<const VertexId> neighbors(VertexId v) const {
    check(v);
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  std::size_t degree(VertexId v) const {
    check(v);
    return offsets_[v + 1] - offsets_[v];
  }

  bool has_edge(VertexId a, VertexId b) const {
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  // vol(G): sum of all vertex degrees.
  std::size_t volume() const noexcept { return adjacency_.size(); }

  // All edges with u < v, sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (VertexId u = 0; u < num_vertices(); ++u)
      for (VertexId v : neighbors(u))
        if (u < v) out.push_back({u, v});
    return out;
  }

  bool has_labels() const noexcept { return !labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::string label(VertexId v) const {
    check(v);
    return labels_.empty() ? std::to_string(v) : labels_[v];
  }

  // Resolves an external label; without labels, the label is the id itself.
  std::optional<VertexId> find(std::string_view label) const {
    if (labels_.empty()) {
      VertexId id = 0;
      auto [p, ec] = std::from_chars(label.data(), label.data() + label.size(), id);
      if (ec != std::errc{} || p != label.data() + label.size() || id >= num_vertices())
        return std::nullopt;
      return id;
    }
    auto it = label_index_.find(std::string(label));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  void check(VertexId v) const {
    if (v >= num_vertices())
      throw std::out_of_range("vertex id " + std::to_string(v) + " out of range");
  }

  std::vector<std::size_t> offsets_;
  std::vector<VertexId> adjacency_;
  std::size_t num_edges_ = 0;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, VertexId> label_index_;
};

// Graph induced by a vertex subset of a parent graph. Local id i corresponds
// to parent id vertices[i].
struct Subgraph {
  std::vector<VertexId> vertices;  // sorted parent ids
  Graph local;
  std::size_t parent_order = 0;

  std::size_t size() const noexcept { return vertices.size(); }

  VertexId to_parent(VertexId local_id) const { return vertices.at(local_id); }

  std::optional<VertexId> to_local(VertexId parent_id) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), parent_id);
    if (it == vertices.end() || *it != parent_id) return std::nullopt;
    return static_cast<VertexId>(it - vertices.begin());
  }
};

inline Subgraph induced_subgraph(const Graph& g, std::span<const VertexId> vertex_set) {
  Subgraph sub;
  sub.parent_order = g.num_vertices();
  sub.vertices.assign(vertex_set.begin(), vertex_set.end());
  std::sort(sub.vertices.begin(), sub.vertices.end());
  sub.vertices.erase(std::unique(sub.vertices.begin(), sub.vertices.end()), sub.vertices.end());
  if (!sub.vertices.empty() && sub.vertices.back() >= g.num_vertices())
    throw std::out_of_range("induced_subgraph: vertex id " + std::to_string(sub.vertices.back()) +
                            " out of range");

  std::vector<std::int64_t> local_of(g.num_vertices(), -1);
  for (std::size_t i = 0; i < sub.vertices.size(); ++i)
    local_of[sub.vertices[i]] = static_cast<std::int64_t>(i);

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < sub.vertices.size(); ++i) {
    for (VertexId w : g.neighbors(sub.vertices[i])) {
      const auto j = local_of[w];
      if (j > static_cast<std::int64_t>(i))
        edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j)});
    }
  }
  std::vector<std::string> labels;
  if (g.has_labels()) {
    labels.reserve(sub.vertices.size());
    for (VertexId v : sub.vertices) labels.push_back(g.labels()[v]);
  }
  sub.local = Graph::from_edges(sub.vertices.size(), edges, std::move(labels));
  return sub;
}

// Subgraph covering every vertex of g (the centralised case).
inline Subgraph whole_graph(const Graph& g) {
  std::vector<VertexId> all(g.num_vertices());
  for (VertexId i = 0; i < all.size(); ++i) all[i] = i;
  Subgraph sub;
  sub.vertices = std::move(all);
  sub.local = g;
  sub.parent_order = g.num_vertices();
  return sub;
}

// Edge-list reader. Accepts '#' comment lines, blank lines and an optional
// leading "%%vertices N" header that pre-declares labels "0".."N-1".
inline Graph parse_edge_list(std::istream& in, std::string_view source = "<stream>") {
  std::unordered_map<std::string, VertexId> ids;
  std::vector<std::string> labels;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = ids.emplace(label, static_cast<VertexId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    std::string a, b, extra;
    if (!(tokens >> a)) continue;
    if (a[0] == '#') continue;
    if (a == "%%vertices") {
      std::size_t n = 0;
      if (seen_content || !(tokens >> n) || (tokens >> extra))
        throw InputError(std::string(source) + ":" + std::to_string(line_no) +
                         ": malformed %%vertices header");
      for (std::size_t i = 0; i < n; ++i) intern(std::to_string(i));
      seen_content = true;
      continue;
    }
    seen_content = true;
    if (!(tokens >> b) || (tokens >> extra))
      throw InputError(std::string(source) + ":" + std::to_string(line_no) +
                       ": expected two vertex labels, got '" + line + "'");
    const VertexId u = intern(a);
    const VertexId v = intern(b);
    edges.push_back({u, v});
  }
  if (in.bad()) throw InputError(std::string(source) + ": read error");
  const std::size_t n = labels.size();
  Graph g = Graph::from_edges(n, edges, std::move(labels));
  if (g.num_edges() == 0) throw InputError(std::string(source) + ": empty edge set");
  return g;
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list '" + path + "'");
  return parse_edge_list(in, path);
}

// Writes internal ids with a vertex-count header, so reloading reproduces the
// graph under the identity id map (isolated vertices included).
inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << "%%vertices " << g.num_vertices() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write edge list '" + path + "'");
  write_edge_list(g, out);
}

}  // namespace pge
