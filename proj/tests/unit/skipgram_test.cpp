#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pge/generators.hpp"
#include "pge/skipgram.hpp"

namespace {

using pge::Edge;
using pge::Graph;
using pge::VertexId;
using pge::WalkConfig;

Graph two_cliques(std::size_t size) {
  std::vector<Edge> e;
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = i + 1; j < size; ++j)
        e.push_back({static_cast<VertexId>(c * size + i), static_cast<VertexId>(c * size + j)});
  return Graph::from_edges(2 * size, e);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  return pge::dot(a, b) / std::sqrt(pge::dot(a, a) * pge::dot(b, b));
}

TEST(Walks, IsolatedVertexGivesSingleton) {
  std::mt19937_64 rng(1);
  const std::vector<Edge> e{{0, 1}};
  const Graph g = Graph::from_edges(3, e);
  EXPECT_EQ(pge::random_walk(g, 2, 10, rng), (pge::Walk{2}));
}

TEST(Walks, K2Alternates) {
  std::mt19937_64 rng(1);
  const std::vector<Edge> e{{0, 1}};
  EXPECT_EQ(pge::random_walk(Graph::from_edges(2, e), 0, 4, rng), (pge::Walk{0, 1, 0, 1}));
}

TEST(Walks, StarLeafFrequencies) {
  std::vector<Edge> e;
  for (VertexId leaf = 1; leaf <= 4; ++leaf) e.push_back({0, leaf});
  const Graph star = Graph::from_edges(5, e);
  std::mt19937_64 rng(2024);
  std::vector<int> hits(5, 0);
  const int walks = 10000;
  for (int i = 0; i < walks; ++i) {
    const auto w = pge::random_walk(star, 0, 2, rng);
    ASSERT_EQ(w.size(), 2u);
    ++hits[w[1]];
  }
  EXPECT_EQ(hits[0], 0);
  for (VertexId leaf = 1; leaf <= 4; ++leaf) EXPECT_NEAR(hits[leaf] / double(walks), 0.25, 0.02);
}

TEST(Walks, CountsLengthsAndSeed) {
  const Graph g = pge::erdos_renyi(30, 0.2, 4);
  WalkConfig cfg;
  cfg.walks_per_vertex = 3;
  cfg.walk_length = 7;
  const auto walks = pge::generate_walks(g, cfg);
  ASSERT_EQ(walks.size(), 90u);
  std::vector<int> starts(30, 0);
  for (const auto& w : walks) {
    ++starts[w[0]];
    if (g.degree(w[0]) > 0) {
      EXPECT_EQ(w.size(), 7u);
    }
    for (std::size_t i = 1; i < w.size(); ++i) EXPECT_TRUE(g.has_edge(w[i - 1], w[i]));
  }
  for (int s : starts) EXPECT_EQ(s, 3);
  EXPECT_EQ(pge::generate_walks(g, cfg), walks);
  cfg.seed = 2;
  EXPECT_NE(pge::generate_walks(g, cfg), walks);
}

TEST(WalkConfigTest, Validation) {
  WalkConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.window = 0;
  EXPECT_THROW(cfg.validate(), pge::ConfigError);
  cfg = WalkConfig{};
  cfg.learning_rate = 0.0;
  EXPECT_THROW(cfg.validate(), pge::ConfigError);
}

TEST(SkipGram, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 0.6);
  for (int trial = 0; trial < 20; ++trial) {
    pge::SkipGramModel model(12, 6, trial);
    for (double& x : model.input_vectors().data()) x = normal(rng);
    for (double& x : model.output_vectors().data()) x = normal(rng);
    const VertexId center = rng() % 12, context = rng() % 12;
    std::vector<VertexId> negs;
    while (negs.size() < 4) {
      const VertexId n = rng() % 12;
      if (n != context && n != center && std::find(negs.begin(), negs.end(), n) == negs.end()) negs.push_back(n);
    }
    const auto g = model.pair_gradient(center, context, negs);

    auto check = [&](pge::Matrix& params, VertexId row, const std::vector<double>& analytic) {
      const double h = 1e-5;
      for (std::size_t i = 0; i < analytic.size(); ++i) {
        double& x = params(row, i);
        const double saved = x;
        x = saved + h;
        const double up = model.pair_loss(center, context, negs);
        x = saved - h;
        const double down = model.pair_loss(center, context, negs);
        x = saved;
        const double numeric = (up - down) / (2 * h);
        const double scale = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-3});
        EXPECT_LE(std::abs(numeric - analytic[i]) / scale, 1e-4);
      }
    };
    check(model.input_vectors(), center, g.center);
    if (center != context) check(model.output_vectors(), context, g.context);
    for (std::size_t k = 0; k < negs.size(); ++k) check(model.output_vectors(), negs[k], g.negatives[k]);
  }
}

TEST(SkipGram, StepReturnsPreUpdateLossAndDescends) {
  pge::SkipGramModel model(5, 4, 3);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 0.3);
  for (double& x : model.output_vectors().data()) x = normal(rng);
  const std::vector<VertexId> negs{3, 4};
  const double before = model.pair_loss(0, 1, negs);
  EXPECT_DOUBLE_EQ(model.step(0, 1, negs, 0.05), before);
  EXPECT_LT(model.pair_loss(0, 1, negs), before);
}

TEST(SkipGram, ShapeAndDeterminism) {
  const Graph g = pge::erdos_renyi(25, 0.2, 6);
  WalkConfig cfg;
  cfg.dim = 10;
  cfg.walks_per_vertex = 2;
  cfg.walk_length = 10;
  cfg.epochs = 2;
  const auto walks = pge::generate_walks(g, cfg);
  const auto a = pge::skipgram_train(walks, 25, cfg);
  const auto b = pge::skipgram_train(walks, 25, cfg);
  EXPECT_EQ(a.embedding.rows(), 25u);
  EXPECT_EQ(a.embedding.cols(), 10u);
  EXPECT_TRUE(pge::all_finite(a.embedding));
  EXPECT_EQ(a.embedding, b.embedding);
  EXPECT_THROW(pge::skipgram_train({}, 25, cfg), pge::BackendError);
}

TEST(SkipGram, TwoCliquesSeparate) {
  const Graph g = two_cliques(8);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    WalkConfig cfg;
    cfg.dim = 16;
    cfg.walks_per_vertex = 10;
    cfg.walk_length = 20;
    cfg.epochs = 3;
    cfg.seed = seed;
    const auto emb = pge::skipgram_train(pge::generate_walks(g, cfg), 16, cfg).embedding;
    double intra = 0, inter = 0;
    int n_intra = 0, n_inter = 0;
    for (VertexId u = 0; u < 16; ++u)
      for (VertexId v = u + 1; v < 16; ++v) {
        const double c = cosine(emb.row(u), emb.row(v));
        if ((u < 8) == (v < 8)) intra += c, ++n_intra;
        else inter += c, ++n_inter;
      }
    EXPECT_GT(intra / n_intra, inter / n_inter) << "seed " << seed;
  }
}

TEST(SkipGram, LossDecreasesAcrossEpochs) {
  const Graph g = pge::stochastic_block_model(120, 3, 0.2, 0.02, 7).graph;
  WalkConfig cfg;
  cfg.dim = 16;
  cfg.walks_per_vertex = 4;
  cfg.walk_length = 20;
  cfg.epochs = 9;
  // a small rate keeps all nine epochs ahead of the sampling-noise plateau
  cfg.learning_rate = 0.0025;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    cfg.seed = seed;
    const auto r = pge::skipgram_train(pge::generate_walks(g, cfg), 120, cfg);
    ASSERT_EQ(r.epoch_loss.size(), 9u);
    // moving window of three epochs
    for (std::size_t e = 1; e + 3 <= 9; ++e) {
      const double prev = r.epoch_loss[e - 1] + r.epoch_loss[e] + r.epoch_loss[e + 1];
      const double next = r.epoch_loss[e] + r.epoch_loss[e + 1] + r.epoch_loss[e + 2];
      EXPECT_LE(next, prev) << "seed " << seed << " epoch " << e;
    }
  }
}

}  // namespace
