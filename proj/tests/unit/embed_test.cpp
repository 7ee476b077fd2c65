#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pge/embed.hpp"
#include "pge/generators.hpp"
#include "pge/partition.hpp"
#include "pge/spectral.hpp"
#include "support.hpp"

namespace {

using pge::Edge;
using pge::Graph;
using pge::Matrix;
using pge::SignalKind;
using testing_support::from_eigen;
using testing_support::random_symmetric;
using testing_support::to_eigen;

Graph path3() {
  const std::vector<Edge> e{{0, 1}, {1, 2}};
  return Graph::from_edges(3, e);
}

TEST(SignalMatrix, LineOnK2) {
  const std::vector<Edge> e{{0, 1}};
  const Matrix m = pge::signal_matrix(Graph::from_edges(2, e), SignalKind::line);
  EXPECT_EQ(m, (Matrix{{0, 0.5}, {0.5, 0}}));
}

TEST(SignalMatrix, LineMatchesDenseFormula) {
  const Graph g = pge::erdos_renyi(15, 0.4, 2);
  const Matrix m = pge::signal_matrix(g, SignalKind::line);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(15, 15);
  for (const Edge& x : g.edges()) a(x.u, x.v) = a(x.v, x.u) = 1.0;
  const Eigen::VectorXd deg = a.rowwise().sum();
  const Eigen::MatrixXd cinv = deg.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd oracle = cinv * a * cinv / deg.sum();
  EXPECT_LT((to_eigen(m) - oracle).norm(), 1e-15);
}

TEST(SignalMatrix, LineRejectsIsolatedVertex) {
  const std::vector<Edge> e{{0, 1}};
  EXPECT_THROW(pge::signal_matrix(Graph::from_edges(3, e), SignalKind::line), pge::BackendError);
}

TEST(SignalMatrix, HopeOnPath) {
  EXPECT_EQ(pge::signal_matrix(path3(), SignalKind::hope), (Matrix{{1, 0, 1}, {0, 2, 0}, {1, 0, 1}}));
  EXPECT_EQ(pge::signal_matrix(Graph::from_edges(4, {}), SignalKind::hope), Matrix(4, 4));
}

TEST(SvdEmbed, IdentityGram) {
  const Matrix e = pge::svd_embed(Matrix::identity(5), 5, 0.5);
  EXPECT_LT(pge::max_abs_difference(pge::gram(e), Matrix::identity(5)), 1e-12);
}

TEST(SvdEmbed, DiagonalHandCase) {
  const Matrix e = pge::svd_embed(Matrix{{4, 0}, {0, 1}}, 1, 0.5);
  EXPECT_NEAR(std::abs(e(0, 0)), 2.0, 1e-14);
  EXPECT_NEAR(e(1, 0), 0.0, 1e-14);
  EXPECT_LT(pge::max_abs_difference(pge::gram(e), Matrix{{4, 0}, {0, 0}}), 1e-12);
}

TEST(SvdEmbed, RankFiveGramMatchesOracle) {
  std::mt19937_64 rng(12);
  const Matrix m = random_symmetric(12, rng);
  const Matrix e = pge::svd_embed(m, 5, 1.0);
  // E Eᵀ is the top-5 spectral truncation of M Mᵀ.
  const Eigen::MatrixXd mm = to_eigen(m) * to_eigen(m).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mm);
  Eigen::MatrixXd oracle = Eigen::MatrixXd::Zero(12, 12);
  for (int i = 11; i > 6; --i)
    oracle += eig.eigenvalues()(i) * eig.eigenvectors().col(i) * eig.eigenvectors().col(i).transpose();
  EXPECT_LT((to_eigen(pge::gram(e)) - oracle).norm(), 1e-9);
}

TEST(SvdEmbed, FullRankGramIsMatrixAbsoluteValue) {
  std::mt19937_64 rng(13);
  for (std::size_t n : {3u, 10u, 25u, 50u}) {
    const Matrix m = random_symmetric(n, rng);
    const Matrix e = pge::svd_embed(m, n, 0.5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(to_eigen(m));
    const Eigen::MatrixXd abs_m =
        eig.eigenvectors() * eig.eigenvalues().cwiseAbs().asDiagonal() * eig.eigenvectors().transpose();
    EXPECT_LT((to_eigen(pge::gram(e)) - abs_m).cwiseAbs().maxCoeff(), 1e-8) << "order " << n;
  }
}

TEST(SvdEmbed, Errors) {
  EXPECT_THROW(pge::svd_embed(Matrix::identity(3), 4, 0.5), pge::BackendError);
  Matrix bad = Matrix::identity(3);
  bad(1, 1) = std::nan("");
  EXPECT_THROW(pge::svd_embed(bad, 2, 0.5), pge::BackendError);
}

TEST(Spectrum, SortedNonNegativeAndOracle) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 10; ++t) {
    const Matrix m = random_symmetric(20, rng);
    const auto f = pge::symmetric_svd(m);
    Eigen::JacobiSVD<Eigen::MatrixXd> oracle(to_eigen(m));
    for (std::size_t i = 0; i < 20; ++i) {
      EXPECT_GE(f.singular_values[i], 0.0);
      if (i) {
        EXPECT_LE(f.singular_values[i], f.singular_values[i - 1]);
      }
      EXPECT_NEAR(f.singular_values[i], oracle.singularValues()(i), 1e-10);
    }
  }
}

TEST(Spectrum, SignConvention) {
  std::mt19937_64 rng(15);
  const auto f = pge::symmetric_svd(random_symmetric(9, rng));
  for (std::size_t j = 0; j < 9; ++j) {
    std::size_t i = 0;
    while (std::abs(f.vectors(i, j)) <= 1e-10) ++i;
    EXPECT_GT(f.vectors(i, j), 0.0);
  }
}

TEST(Spectrum, PrincipalSubmatrixInterlacing) {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 4 + rng() % 27;
    const Matrix m = random_symmetric(n, rng);
    std::vector<pge::VertexId> idx(n);
    std::iota(idx.begin(), idx.end(), pge::VertexId{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(1 + rng() % (n - 1));
    std::sort(idx.begin(), idx.end());
    const Matrix sub = pge::principal_submatrix(m, std::span<const pge::VertexId>(idx));
    const auto full = pge::symmetric_svd(m).singular_values;
    const auto part = pge::symmetric_svd(sub).singular_values;
    Eigen::JacobiSVD<Eigen::MatrixXd> oracle(to_eigen(sub));
    for (std::size_t i = 0; i < part.size(); ++i) {
      EXPECT_NEAR(part[i], oracle.singularValues()(i), 1e-10);
      EXPECT_LE(part[i], full[i] + 1e-12);
    }
  }
}

TEST(EmbedSubgraph, SpectralComposition) {
  pge::BackendConfig cfg;
  cfg.kind = pge::BackendKind::svd_hope;
  cfg.dim = 2;
  cfg.alpha = 0.5;
  const auto e = pge::embed_subgraph(pge::whole_graph(path3()), cfg, 1);
  const Matrix direct = pge::svd_embed(pge::signal_matrix(path3(), SignalKind::hope), 2, 0.5);
  EXPECT_EQ(e.values(), direct);
}

TEST(EmbedSubgraph, WalkDeterministicAndShaped) {
  const Graph g = pge::erdos_renyi(40, 0.15, 3);
  pge::BackendConfig cfg;
  cfg.dim = 8;
  cfg.walk.walks_per_vertex = 3;
  cfg.walk.walk_length = 10;
  cfg.walk.epochs = 2;
  const auto sub = pge::induced_subgraph(g, std::vector<pge::VertexId>{1, 3, 5, 7, 9, 11, 13, 15, 17, 19});
  const auto a = pge::embed_subgraph(sub, cfg, 9);
  const auto b = pge::embed_subgraph(sub, cfg, 9);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rows(), 10u);
  EXPECT_EQ(a.dim(), 8u);
  EXPECT_TRUE(pge::all_finite(a.values()));
  EXPECT_TRUE(a.contains(19));
  EXPECT_FALSE(a.contains(2));
}

TEST(EmbedSubgraph, AnchorsInEveryOutput) {
  const Graph g = pge::erdos_renyi(60, 0.1, 4);
  const auto d = pge::decompose_with_anchors(g, pge::Capacities::uniform(3, 30), 4, 1);
  pge::BackendConfig cfg;
  cfg.kind = pge::BackendKind::svd_hope;
  cfg.dim = 4;
  for (const auto& s : d.subgraphs) {
    const auto e = pge::embed_subgraph(s, cfg, 0);
    for (auto a : d.anchors) EXPECT_TRUE(e.contains(a));
  }
}

TEST(EmbedSubgraph, BackendErrors) {
  pge::BackendConfig cfg;
  cfg.kind = pge::BackendKind::svd_line;
  cfg.dim = 2;
  const std::vector<Edge> e{{0, 1}};
  EXPECT_THROW(pge::embed_graph(Graph::from_edges(3, e), cfg, 0), pge::BackendError);
  cfg.dense_cap = 2;
  EXPECT_THROW(pge::embed_graph(path3(), cfg, 0), pge::BackendError);
  EXPECT_THROW(pge::parse_backend("metis"), pge::ConfigError);
  EXPECT_EQ(pge::parse_backend("svd-line"), pge::BackendKind::svd_line);
  EXPECT_EQ(pge::to_string(pge::BackendKind::walk), "walk");
}

TEST(EmbeddingFile, RoundTripAndFormat) {
  const Matrix v{{1.5, -2.25}, {0.125, 3}};
  const pge::EmbeddingMatrix e(v, {7, 3});
  std::stringstream s;
  pge::write_embedding(e, s);
  const std::string text = s.str();
  EXPECT_EQ(text.substr(0, 4), "2 2\n");
  EXPECT_NE(text.find("7 1.5 -2.25"), std::string::npos);
  EXPECT_EQ(pge::read_embedding(s), e);
  EXPECT_THROW(pge::EmbeddingMatrix(v, {1, 1}), std::invalid_argument);
  std::istringstream bad("2 2\n0 1 2\n");
  EXPECT_THROW(pge::read_embedding(bad), pge::InputError);
}

}  // namespace
