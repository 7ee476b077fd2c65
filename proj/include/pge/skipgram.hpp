#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "pge/error.hpp"
#include "pge/graph.hpp"
#include "pge/matrix.hpp"

namespace pge {

// DeepWalk-family hyperparameters.
struct WalkConfig {
  std::size_t walks_per_vertex = 10;
  std::size_t walk_length = 40;  // vertices per walk, start included
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t dim = 128;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to 1e-4 of its start value
  std::uint64_t seed = 1;

  void validate() const {
    if (walks_per_vertex < 1 || walk_length < 1 || window < 1 || negatives < 1 || dim < 1 ||
        epochs < 1)
      throw ConfigError("walk configuration counts must all be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  }
};

using Walk = std::vector<VertexId>;

// Uniform random walk; stops early at a vertex without neighbors.
inline Walk random_walk(const Graph& g, VertexId start, std::size_t length, std::mt19937_64& rng) {
  Walk walk;
  walk.reserve(length);
  walk.push_back(start);
  VertexId cur = start;
  while (walk.size() < length) {
    auto nb = g.neighbors(cur);
    if (nb.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    cur = nb[pick(rng)];
    walk.push_back(cur);
  }
  return walk;
}

// walks_per_vertex passes; each pass starts one walk at every vertex, in a
// freshly shuffled order.
inline std::vector<Walk> generate_walks(const Graph& g, const WalkConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<VertexId> order(g.num_vertices());
  std::iota(order.begin(), order.end(), VertexId{0});
  std::vector<Walk> walks;
  walks.reserve(order.size() * cfg.walks_per_vertex);
  for (std::size_t pass = 0; pass < cfg.walks_per_vertex; ++pass) {
    std::shuffle(order.begin(), order.end(), rng);
    for (VertexId v : order) walks.push_back(random_walk(g, v, cfg.walk_length, rng));
  }
  return walks;
}

namespace detail {
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
// log(1 + e^x), stable for large |x|.
inline double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }
}  // namespace detail

// Skip-gram with negative sampling. Input vectors are the embeddings; output
// vectors score contexts. Per (center, context) pair the loss is
//   -log σ(u·v_ctx) - Σ_neg log σ(-u·v_neg).
class SkipGramModel {
 public:
  SkipGramModel(std::size_t num_vertices, std::size_t dim, std::uint64_t seed)
      : input_(num_vertices, dim), output_(num_vertices, dim), scratch_(dim) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> init(-0.5 / static_cast<double>(dim),
                                                0.5 / static_cast<double>(dim));
    for (double& x : input_.data()) x = init(rng);
  }

  Matrix& input_vectors() noexcept { return input_; }
  const Matrix& input_vectors() const noexcept { return input_; }
  Matrix& output_vectors() noexcept { return output_; }
  const Matrix& output_vectors() const noexcept { return output_; }

  double pair_loss(VertexId center, VertexId context, std::span<const VertexId> negatives) const {
    auto u = input_.row(center);
    double loss = detail::softplus(-dot(u, output_.row(context)));
    for (VertexId n : negatives) loss += detail::softplus(dot(u, output_.row(n)));
    return loss;
  }

  struct PairGradient {
    std::vector<double> center;                 // d loss / d input[center]
    std::vector<double> context;                // d loss / d output[context]
    std::vector<std::vector<double>> negatives;  // d loss / d output[neg_i]
  };

  PairGradient pair_gradient(VertexId center, VertexId context,
                             std::span<const VertexId> negatives) const {
    const std::size_t d = input_.cols();
    auto u = input_.row(center);
    PairGradient g{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), {}};
    auto accumulate_target = [&](VertexId t, double label, std::vector<double>& out) {
      auto v = output_.row(t);
      const double coeff = detail::sigmoid(dot(u, v)) - label;
      for (std::size_t i = 0; i < d; ++i) {
        g.center[i] += coeff * v[i];
        out[i] = coeff * u[i];
      }
    };
    accumulate_target(context, 1.0, g.context);
    for (VertexId n : negatives) {
      g.negatives.emplace_back(d, 0.0);
      accumulate_target(n, 0.0, g.negatives.back());
    }
    return g;
  }

  // One SGD step on a single pair; returns the loss before the update.
  double step(VertexId center, VertexId context, std::span<const VertexId> negatives, double lr) {
    auto u = input_.row(center);
    std::fill(scratch_.begin(), scratch_.end(), 0.0);
    double loss = 0.0;
    auto update_target = [&](VertexId t, double label) {
      auto v = output_.row(t);
      const double f = dot(u, v);
      loss += label > 0 ? detail::softplus(-f) : detail::softplus(f);
      const double g = lr * (label - detail::sigmoid(f));
      for (std::size_t i = 0; i < u.size(); ++i) {
        scratch_[i] += g * v[i];
        v[i] += g * u[i];
      }
    };
    update_target(context, 1.0);
    for (VertexId n : negatives) update_target(n, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += scratch_[i];
    return loss;
  }

 private:
  Matrix input_;
  Matrix output_;
  std::vector<double> scratch_;
};

struct SkipGramResult {
  Matrix embedding;                // num_vertices x dim input vectors
  std::vector<double> epoch_loss;  // mean pair loss per epoch
};

// Trains over all (center, context) pairs within `window` of each other.
// Negatives come from the unigram^(3/4) distribution of walk visits; a
// negative equal to the context is dropped.
inline SkipGramResult skipgram_train(std::span<const Walk> walks, std::size_t num_vertices,
                                     const WalkConfig& cfg) {
  cfg.validate();
  if (walks.empty()) throw BackendError("skip-gram training needs at least one walk");
  std::vector<double> weight(num_vertices, 0.0);
  std::size_t tokens = 0;
  for (const Walk& w : walks) {
    tokens += w.size();
    for (VertexId v : w) {
      if (v >= num_vertices) throw BackendError("walk visits vertex outside the graph");
      weight[v] += 1.0;
    }
  }
  for (double& x : weight) x = std::pow(x, 0.75);
  std::discrete_distribution<VertexId> noise(weight.begin(), weight.end());

  SkipGramModel model(num_vertices, cfg.dim, cfg.seed);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  SkipGramResult result;
  const double total = static_cast<double>(tokens * cfg.epochs);
  double processed = 0.0;
  std::vector<VertexId> negs;
  negs.reserve(cfg.negatives);
  const auto window = static_cast<std::ptrdiff_t>(cfg.window);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t pairs = 0;
    for (const Walk& w : walks) {
      const auto len = static_cast<std::ptrdiff_t>(w.size());
      for (std::ptrdiff_t i = 0; i < len; ++i) {
        const double lr = cfg.learning_rate * std::max(1e-4, 1.0 - processed / total);
        processed += 1.0;
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - window);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, i + window);
        for (std::ptrdiff_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          negs.clear();
          for (std::size_t s = 0; s < cfg.negatives; ++s) {
            const VertexId n = noise(rng);
            if (n != w[static_cast<std::size_t>(j)]) negs.push_back(n);
          }
          loss_sum += model.step(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(j)], negs, lr);
          ++pairs;
        }
      }
    }
    result.epoch_loss.push_back(pairs ? loss_sum / static_cast<double>(pairs) : 0.0);
  }
  result.embedding = std::move(model.input_vectors());
  return result;
}

}  // namespace pge
