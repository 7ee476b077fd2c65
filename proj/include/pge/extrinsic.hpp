#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pge/embedding.hpp"
#include "pge/error.hpp"
#include "pge/graph.hpp"
#include "pge/matrix.hpp"

namespace pge {

// ---------------------------------------------------------------------------
// Ranking metrics

// Area under the ROC curve (Mann-Whitney statistic, ties count one half).
inline double roc_auc(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty())
    throw std::invalid_argument("roc_auc needs positive and negative scores");
  std::vector<std::pair<double, bool>> all;
  all.reserve(positives.size() + negatives.size());
  for (double s : positives) all.emplace_back(s, true);
  for (double s : negatives) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t)
      if (all[t].second) rank_sum += avg_rank;
    i = j;
  }
  const auto np = static_cast<double>(positives.size());
  const auto nn = static_cast<double>(negatives.size());
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

// Average precision: Σ (R_t - R_{t-1}) P_t over descending score thresholds;
// tied scores form one threshold.
inline double average_precision(std::span<const double> positives,
                                std::span<const double> negatives) {
  if (positives.empty()) throw std::invalid_argument("average_precision needs positive scores");
  std::vector<std::pair<double, bool>> all;
  for (double s : positives) all.emplace_back(s, true);
  for (double s : negatives) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  const auto np = static_cast<double>(positives.size());
  double tp = 0.0, fp = 0.0, ap = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    double group_tp = 0.0;
    while (j < all.size() && all[j].first == all[i].first) {
      if (all[j].second) group_tp += 1.0; else fp += 1.0;
      ++j;
    }
    tp += group_tp;
    if (group_tp > 0) ap += (group_tp / np) * (tp / (tp + fp));
    i = j;
  }
  return ap;
}

// ---------------------------------------------------------------------------
// Link prediction

struct HoldoutSplit {
  Graph residual;               // same vertex set, held-out edges removed
  std::vector<Edge> positives;  // held-out edges
  std::vector<Edge> negatives;  // sampled vertex pairs without an edge in the original graph
};

// Removes round(ratio * |E|) uniformly chosen edges and samples as many
// non-adjacent vertex pairs.
inline HoldoutSplit holdout_edges(const Graph& g, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("holdout ratio must lie in (0, 1)");
  std::vector<Edge> edges = g.edges();
  const auto removed = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(edges.size())));
  if (removed == 0 || removed >= edges.size())
    throw ConfigError("infeasible holdout: " + std::to_string(removed) + " of " +
                      std::to_string(edges.size()) + " edges");
  const std::size_t n = g.num_vertices();
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  if (pairs - static_cast<double>(edges.size()) < static_cast<double>(removed))
    throw ConfigError("infeasible holdout: not enough non-adjacent pairs for negatives");

  std::mt19937_64 rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);
  HoldoutSplit split;
  split.positives.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(removed));
  std::vector<Edge> kept(edges.begin() + static_cast<std::ptrdiff_t>(removed), edges.end());
  split.residual = Graph::from_edges(n, kept, g.labels());

  std::set<Edge> chosen;
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  while (split.negatives.size() < removed) {
    const VertexId a = pick(rng), b = pick(rng);
    if (a == b || g.has_edge(a, b)) continue;
    const Edge e = Edge::make(a, b);
    if (chosen.insert(e).second) split.negatives.push_back(e);
  }
  std::sort(split.positives.begin(), split.positives.end());
  return split;
}

struct LinkScores {
  double roc = 0.0;
  double ap = 0.0;
};

// Scores each pair by the inner product of its endpoint embeddings.
inline LinkScores score_links(const EmbeddingMatrix& e, std::span<const Edge> positives,
                              std::span<const Edge> negatives) {
  auto score = [&](const Edge& x) { return dot(e.row_for(x.u), e.row_for(x.v)); };
  std::vector<double> pos, neg;
  for (const Edge& x : positives) pos.push_back(score(x));
  for (const Edge& x : negatives) neg.push_back(score(x));
  return {roc_auc(pos, neg), average_precision(pos, neg)};
}

using Embedder = std::function<EmbeddingMatrix(const Graph&)>;

inline LinkScores link_prediction_eval(const Graph& g, const Embedder& embed, double holdout,
                                       std::uint64_t seed) {
  const HoldoutSplit split = holdout_edges(g, holdout, seed);
  const EmbeddingMatrix e = embed(split.residual);
  return score_links(e, split.positives, split.negatives);
}

// ---------------------------------------------------------------------------
// Vertex classification

// Multi-label assignment: vertex -> label indices into `names`.
struct LabeledVertices {
  std::vector<std::string> names;
  std::map<VertexId, std::vector<std::uint32_t>> labels;

  static LabeledVertices from_single(std::span<const std::uint32_t> label_of_vertex) {
    LabeledVertices lv;
    std::uint32_t max_label = 0;
    for (std::size_t v = 0; v < label_of_vertex.size(); ++v) {
      lv.labels[static_cast<VertexId>(v)] = {label_of_vertex[v]};
      max_label = std::max(max_label, label_of_vertex[v]);
    }
    for (std::uint32_t l = 0; l <= max_label && !label_of_vertex.empty(); ++l)
      lv.names.push_back(std::to_string(l));
    return lv;
  }
};

// "vertex label[,label...]" per line; vertices are resolved through the
// graph's external labels.
inline LabeledVertices read_labels(std::istream& in, const Graph& g,
                                   const std::string& source = "<stream>") {
  LabeledVertices lv;
  std::map<std::string, std::uint32_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream s(line);
    std::string vertex, list, extra;
    if (!(s >> vertex) || vertex[0] == '#') continue;
    if (!(s >> list) || (s >> extra))
      throw InputError(source + ":" + std::to_string(line_no) + ": expected 'vertex label[,label...]'");
    const auto v = g.find(vertex);
    if (!v) throw InputError(source + ":" + std::to_string(line_no) + ": unknown vertex '" + vertex + "'");
    std::istringstream items(list);
    std::string item;
    auto& out = lv.labels[*v];
    while (std::getline(items, item, ',')) {
      if (item.empty()) continue;
      auto [it, inserted] = index.emplace(item, static_cast<std::uint32_t>(lv.names.size()));
      if (inserted) lv.names.push_back(item);
      if (std::find(out.begin(), out.end(), it->second) == out.end()) out.push_back(it->second);
    }
  }
  return lv;
}

inline LabeledVertices load_labels(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open label file '" + path + "'");
  return read_labels(in, g, path);
}

// One-vs-rest L2-regularised logistic regression fitted by full-batch
// gradient descent on standardised features.
class LogisticRegression {
 public:
  LogisticRegression(double l2 = 1e-4, std::size_t iterations = 500)
      : l2_(l2), iterations_(iterations) {}

  // targets(i, c) in {0, 1}.
  void fit(const Matrix& x, const Matrix& targets) {
    const std::size_t n = x.rows(), d = x.cols(), c = targets.cols();
    mean_.assign(d, 0.0);
    scale_.assign(d, 1.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) mean_[j] += x(i, j) / static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) {
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) var += (x(i, j) - mean_[j]) * (x(i, j) - mean_[j]);
      var /= static_cast<double>(n);
      scale_[j] = var > 1e-24 ? 1.0 / std::sqrt(var) : 1.0;
    }
    Matrix z(n, d + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) z(i, j) = (x(i, j) - mean_[j]) * scale_[j];
      z(i, d) = 1.0;
    }

    // Step 1/L with L the smoothness constant of the mean logistic loss.
    const Matrix zz = transposed_multiply(z, z);
    std::vector<double> v(d + 1, 1.0), w(d + 1);
    double lambda_max = 0.0;
    for (int it = 0; it < 50; ++it) {
      for (std::size_t a = 0; a <= d; ++a) w[a] = dot(zz.row(a), v);
      const double norm = std::sqrt(dot(w, w));
      if (norm == 0.0) break;
      lambda_max = norm / std::sqrt(dot(v, v));
      for (std::size_t a = 0; a <= d; ++a) v[a] = w[a] / norm;
    }
    const double step = 1.0 / (0.25 * lambda_max / static_cast<double>(n) + l2_);

    weights_ = Matrix(d + 1, c);
    Matrix residual(n, c);
    for (std::size_t it = 0; it < iterations_; ++it) {
      const Matrix scores = multiply(z, weights_);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < c; ++k)
          residual(i, k) = 1.0 / (1.0 + std::exp(-scores(i, k))) - targets(i, k);
      Matrix grad = transposed_multiply(z, residual);
      for (std::size_t a = 0; a <= d; ++a)
        for (std::size_t k = 0; k < c; ++k) {
          double gk = grad(a, k) / static_cast<double>(n);
          if (a < d) gk += l2_ * weights_(a, k);  // bias is not regularised
          weights_(a, k) -= step * gk;
        }
    }
  }

  // Decision values, one column per class.
  Matrix decision(const Matrix& x) const {
    const std::size_t d = mean_.size();
    Matrix out(x.rows(), weights_.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t k = 0; k < weights_.cols(); ++k) {
        double s = weights_(d, k);
        for (std::size_t j = 0; j < d; ++j) s += (x(i, j) - mean_[j]) * scale_[j] * weights_(j, k);
        out(i, k) = s;
      }
    return out;
  }

 private:
  double l2_;
  std::size_t iterations_;
  std::vector<double> mean_, scale_;
  Matrix weights_;
};

struct ClassificationScores {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::vector<std::string> skipped_labels;  // no training examples
};

namespace detail {

struct LabelSplit {
  std::vector<VertexId> train, test;
  std::vector<std::uint32_t> active;  // labels with at least one training example
};

inline LabelSplit split_labeled(const LabeledVertices& lv, double train_ratio, std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw ConfigError("train ratio must lie in (0, 1)");
  std::vector<VertexId> ids;
  for (const auto& [v, ls] : lv.labels)
    if (!ls.empty()) ids.push_back(v);
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(train_ratio * static_cast<double>(ids.size())));
  LabelSplit s;
  s.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  if (s.train.empty() || s.test.empty()) throw ConfigError("train/test split leaves an empty side");
  std::vector<char> seen(lv.names.size(), 0);
  for (VertexId v : s.train)
    for (std::uint32_t l : lv.labels.at(v)) seen[l] = 1;
  for (std::uint32_t l = 0; l < lv.names.size(); ++l)
    if (seen[l]) s.active.push_back(l);
  return s;
}

// Micro/macro F1 of top-|truth| predictions over the active labels.
inline ClassificationScores f1_scores(const LabeledVertices& lv, const LabelSplit& split,
                                      const std::function<std::vector<double>(VertexId)>& score) {
  std::vector<std::int64_t> pos(lv.names.size(), -1);
  for (std::size_t i = 0; i < split.active.size(); ++i) pos[split.active[i]] = static_cast<std::int64_t>(i);
  const std::size_t c = split.active.size();
  std::vector<double> tp(c, 0), fp(c, 0), fn(c, 0);
  for (VertexId v : split.test) {
    std::vector<std::uint32_t> truth;
    for (std::uint32_t l : lv.labels.at(v))
      if (pos[l] >= 0) truth.push_back(static_cast<std::uint32_t>(pos[l]));
    if (truth.empty()) continue;
    const std::vector<double> s = score(v);
    std::vector<std::uint32_t> order(c);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return s[a] > s[b]; });
    std::vector<char> predicted(c, 0);
    for (std::size_t t = 0; t < truth.size() && t < c; ++t) predicted[order[t]] = 1;
    std::vector<char> actual(c, 0);
    for (auto l : truth) actual[l] = 1;
    for (std::size_t k = 0; k < c; ++k) {
      if (predicted[k] && actual[k]) tp[k] += 1;
      else if (predicted[k]) fp[k] += 1;
      else if (actual[k]) fn[k] += 1;
    }
  }
  ClassificationScores out;
  const double stp = std::accumulate(tp.begin(), tp.end(), 0.0);
  const double sfp = std::accumulate(fp.begin(), fp.end(), 0.0);
  const double sfn = std::accumulate(fn.begin(), fn.end(), 0.0);
  out.micro_f1 = stp > 0 ? 2 * stp / (2 * stp + sfp + sfn) : 0.0;
  double macro = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    const double denom = 2 * tp[k] + fp[k] + fn[k];
    macro += denom > 0 ? 2 * tp[k] / denom : 0.0;
  }
  out.macro_f1 = c ? macro / static_cast<double>(c) : 0.0;
  for (std::uint32_t l = 0; l < lv.names.size(); ++l)
    if (pos[l] < 0) out.skipped_labels.push_back(lv.names[l]);
  return out;
}

}  // namespace detail

// Trains on train_ratio of the labeled vertices and predicts, per test
// vertex, its top-|true labels| scoring labels.
inline ClassificationScores vertex_classification_eval(const EmbeddingMatrix& e,
                                                       const LabeledVertices& lv,
                                                       double train_ratio, std::uint64_t seed) {
  if (lv.names.size() < 2) throw ConfigError("vertex classification needs at least two labels");
  const auto split = detail::split_labeled(lv, train_ratio, seed);
  if (split.active.size() < 2) throw ConfigError("fewer than two labels have training examples");
  std::vector<std::int64_t> pos(lv.names.size(), -1);
  for (std::size_t i = 0; i < split.active.size(); ++i) pos[split.active[i]] = static_cast<std::int64_t>(i);

  Matrix x = rows_in_order(e, split.train);
  Matrix y(split.train.size(), split.active.size());
  for (std::size_t i = 0; i < split.train.size(); ++i)
    for (std::uint32_t l : lv.labels.at(split.train[i])) y(i, static_cast<std::size_t>(pos[l])) = 1.0;
  LogisticRegression model;
  model.fit(x, y);

  const Matrix test_x = rows_in_order(e, split.test);
  const Matrix scores = model.decision(test_x);
  std::map<VertexId, std::size_t> row;
  for (std::size_t i = 0; i < split.test.size(); ++i) row[split.test[i]] = i;
  return detail::f1_scores(lv, split, [&](VertexId v) {
    auto r = scores.row(row.at(v));
    return std::vector<double>(r.begin(), r.end());
  });
}

// Same split and protocol, but every test vertex receives the most frequent
// training labels.
inline ClassificationScores majority_baseline(const LabeledVertices& lv, double train_ratio,
                                              std::uint64_t seed) {
  const auto split = detail::split_labeled(lv, train_ratio, seed);
  std::vector<double> freq(split.active.size(), 0.0);
  std::vector<std::int64_t> pos(lv.names.size(), -1);
  for (std::size_t i = 0; i < split.active.size(); ++i) pos[split.active[i]] = static_cast<std::int64_t>(i);
  for (VertexId v : split.train)
    for (std::uint32_t l : lv.labels.at(v)) freq[static_cast<std::size_t>(pos[l])] += 1.0;
  return detail::f1_scores(lv, split, [&](VertexId) { return freq; });
}

}  // namespace pge
