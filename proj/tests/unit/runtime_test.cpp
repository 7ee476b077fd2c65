#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <sstream>

#include "pge/generators.hpp"
#include "pge/runtime.hpp"

namespace {

namespace fs = std::filesystem;
using pge::Edge;
using pge::Graph;
using pge::PipelineConfig;
using pge::VertexId;

Graph two_triangles() {
  const std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}};
  return Graph::from_edges(6, e);
}

PipelineConfig small_walk_config() {
  PipelineConfig cfg;
  cfg.backend.dim = 8;
  cfg.backend.walk.walks_per_vertex = 3;
  cfg.backend.walk.walk_length = 12;
  cfg.backend.walk.epochs = 1;
  cfg.eval_pip = false;
  return cfg;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pge_runtime_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(Config, FileParsingAndOverrides) {
  std::istringstream in("# run settings\nparts = 3\nbackend = svd-hope  # spectral\n\ndim=4\nanchors = 2\n");
  PipelineConfig cfg;
  for (const auto& [k, v] : pge::parse_config(in)) cfg.set(k, v);
  cfg.set("dim", "6");  // a later flag wins
  EXPECT_EQ(cfg.num_parts(), 3u);
  EXPECT_EQ(cfg.backend.kind, pge::BackendKind::svd_hope);
  EXPECT_EQ(cfg.backend.dim, 6u);
  EXPECT_EQ(cfg.resolved_anchor_count(1000), 2u);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, Errors) {
  PipelineConfig cfg;
  EXPECT_THROW(cfg.set("colour", "blue"), pge::ConfigError);
  EXPECT_THROW(cfg.set("workers", "-1"), pge::ConfigError);
  EXPECT_THROW(cfg.set("dim", "4x"), pge::ConfigError);
  EXPECT_THROW(cfg.set("reconcile", "maybe"), pge::ConfigError);
  cfg.set("workers", "0");
  EXPECT_THROW(cfg.validate(), pge::ConfigError);
  cfg = {};
  cfg.set("anchor-ratio", "1.5");
  EXPECT_THROW(cfg.validate(), pge::ConfigError);
  cfg = {};
  cfg.set("parts", "2");
  cfg.set("capacities", "5,5,5");
  EXPECT_THROW(cfg.validate(), pge::ConfigError);
  std::istringstream bad("parts 3\n");
  EXPECT_THROW(pge::parse_config(bad), pge::ConfigError);
}

TEST(Config, DefaultCapacitiesLeaveHeadroom) {
  PipelineConfig cfg;
  cfg.parts = 4;
  const auto caps = cfg.resolved_capacities(1000, 10);
  EXPECT_EQ(caps.limits, (std::vector<std::size_t>(4, 273)));
  EXPECT_NO_THROW(caps.validate(1000));
}

TEST(ParallelFor, RunsEveryIndexAndRethrowsLowestFailure) {
  std::vector<std::atomic<int>> hits(50);
  pge::parallel_for(50, 4, [&](std::size_t i) { ++hits[i]; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  try {
    pge::parallel_for(10, 3, [](std::size_t i) {
      if (i == 7 || i == 4) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "4");
  }
  EXPECT_THROW(pge::parallel_for(1, 0, [](std::size_t) {}), pge::ConfigError);
}

TEST(WorkerPool, CapacityViolationBeforeAnyEmbedding) {
  const Graph g = pge::erdos_renyi(30, 0.2, 1);
  const std::vector<std::vector<VertexId>> sets{{0, 1, 2, 3, 4}, {5, 6, 7}};
  std::vector<pge::Subgraph> subs;
  for (const auto& s : sets) subs.push_back(pge::induced_subgraph(g, s));
  pge::BackendConfig backend;
  backend.kind = pge::BackendKind::svd_line;  // would fail on isolated vertices if it ever ran
  backend.dim = 2;
  const std::vector<pge::EmbedTask> tasks{{&subs[0], 5, 0}, {&subs[1], 2, 1}};
  try {
    pge::worker_pool_execute(tasks, backend, 2);
    FAIL();
  } catch (const pge::CapacityError& e) {
    EXPECT_EQ(e.subgraph(), 1u);
    EXPECT_EQ(e.exit_code(), 3);
    EXPECT_NE(std::string(e.what()).find("subgraph 1"), std::string::npos);
  }
}

TEST(WorkerPool, BackendFailureNamesSubgraph) {
  // isolated vertex 9 lands in part 1 → the line signal is undefined there
  std::vector<Edge> e;
  for (VertexId v = 0; v + 1 < 9; ++v) e.push_back({v, v + 1});
  const Graph g = Graph::from_edges(10, e);
  auto dec = pge::assemble_decomposition(g, {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}}, {});
  PipelineConfig cfg = small_walk_config();
  cfg.backend.kind = pge::BackendKind::svd_line;
  cfg.backend.dim = 2;
  try {
    pge::run_decomposed(g, dec, pge::Capacities::uniform(2, 6), cfg);
    FAIL();
  } catch (const pge::BackendError& ex) {
    EXPECT_EQ(ex.subgraph(), 1u);
    EXPECT_EQ(ex.exit_code(), 4);
  }
}

TEST(WorkerPool, ResultsInTaskOrderForAnyWorkerCount) {
  const Graph g = pge::erdos_renyi(80, 0.1, 2);
  const auto dec = pge::decompose_with_anchors(g, pge::Capacities::uniform(4, 30), 3, 1);
  pge::BackendConfig backend;
  backend.dim = 4;
  backend.walk.walks_per_vertex = 2;
  backend.walk.walk_length = 8;
  backend.walk.epochs = 1;
  std::vector<pge::EmbedTask> tasks;
  for (std::size_t i = 0; i < 4; ++i) tasks.push_back({&dec.subgraphs[i], 30, 7 ^ i});
  const auto one = pge::worker_pool_execute(tasks, backend, 1);
  const auto four = pge::worker_pool_execute(tasks, backend, 4);
  const auto procs = pge::worker_pool_execute(tasks, backend, 3, pge::Isolation::process);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(one[i].embedding, four[i].embedding);
    EXPECT_EQ(one[i].embedding, procs[i].embedding);
    EXPECT_EQ(std::vector<VertexId>(one[i].embedding.index().begin(), one[i].embedding.index().end()),
              dec.subgraphs[i].vertices);
    EXPECT_GT(procs[i].max_rss_kb, 0);
  }
}

TEST(Pipeline, SingleNodeEqualsCentralised) {
  const Graph g = pge::erdos_renyi(50, 0.12, 3);
  PipelineConfig cfg = small_walk_config();
  cfg.seed = 42;
  const auto run = pge::run_parallel(g, cfg);
  EXPECT_EQ(run.global, pge::run_centralised(g, cfg));
  EXPECT_EQ(pge::run_centralised(g, cfg), pge::run_centralised(g, cfg));
  EXPECT_EQ(pge::run_centralised(g, cfg),
            pge::embed_subgraph(pge::whole_graph(g), cfg.backend, cfg.seed));
}

TEST(Pipeline, TwoTrianglesSpectral) {
  const Graph g = two_triangles();
  PipelineConfig cfg;
  cfg.parts = 2;
  cfg.anchor_count = 1;
  cfg.backend.kind = pge::BackendKind::svd_hope;
  cfg.backend.dim = 1;
  cfg.eval_bound = true;
  const auto result = pge::run_pipeline(g, cfg);
  const auto& d = result.decomposition;
  ASSERT_EQ(d.parts.size(), 2u);
  EXPECT_EQ(d.anchors.size(), 1u);
  const auto caps = cfg.resolved_capacities(6, 1);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LE(d.subgraphs[i].size(), caps.limits[i]);
    EXPECT_LE(result.metrics.tasks[i].vertices, result.metrics.tasks[i].capacity);
  }
  EXPECT_LE(result.metrics.peak_task_vertices, *std::max_element(caps.limits.begin(), caps.limits.end()));
  EXPECT_EQ(result.global.rows(), 6u);
  ASSERT_TRUE(result.report.pip.has_value());
  EXPECT_TRUE(std::isfinite(*result.report.pip));
  EXPECT_DOUBLE_EQ(*result.report.pip_normalized, *result.report.pip / 6.0);
  ASSERT_TRUE(result.report.bound.has_value());
  EXPECT_FALSE(result.report.bound_in_theory);  // anchors overlap the parts
}

TEST(Pipeline, DeterministicAcrossWorkerCounts) {
  const auto sbm = pge::stochastic_block_model(200, 4, 0.15, 0.01, 4);
  PipelineConfig cfg = small_walk_config();
  cfg.parts = 4;
  cfg.anchor_count = 8;
  cfg.workers = 1;
  const auto a = pge::run_parallel(sbm.graph, cfg);
  cfg.workers = 3;
  const auto b = pge::run_parallel(sbm.graph, cfg);
  cfg.isolation = pge::Isolation::process;
  const auto c = pge::run_parallel(sbm.graph, cfg);
  EXPECT_EQ(a.global, b.global);
  EXPECT_EQ(a.global, c.global);
}

TEST(Pipeline, EqualTasksStageTimeTracksMaxTask) {
  const auto sbm = pge::stochastic_block_model(800, 4, 0.05, 0.002, 5);
  PipelineConfig cfg = small_walk_config();
  cfg.parts = 4;
  cfg.workers = 4;
  cfg.anchor_count = 8;
  const auto run = pge::run_parallel(sbm.graph, cfg);
  const auto& m = run.metrics;
  ASSERT_EQ(m.tasks.size(), 4u);
  double min_task = 1e300;
  for (const auto& t : m.tasks) min_task = std::min(min_task, t.cpu_seconds);
  EXPECT_GE(m.stage_seconds, m.max_task_seconds);
  EXPECT_LE(m.stage_seconds, 1.1 * m.max_task_seconds);
  EXPECT_GT(min_task, 0.4 * m.max_task_seconds);
}

TEST(Pipeline, NoAnchorsSkipsReconciliationWithWarning) {
  const Graph g = pge::erdos_renyi(40, 0.15, 6);
  PipelineConfig cfg = small_walk_config();
  cfg.parts = 2;
  cfg.anchor_count = 0;
  const auto run = pge::run_parallel(g, cfg);
  EXPECT_TRUE(run.maps.empty());
  ASSERT_FALSE(run.warnings.empty());
  EXPECT_EQ(run.global.rows(), 40u);
}

TEST(Pipeline, ThirtyVertexAssembly) {
  const Graph g = pge::erdos_renyi(30, 0.2, 7);
  PipelineConfig cfg = small_walk_config();
  cfg.parts = 3;
  cfg.anchor_count = 3;
  const auto run = pge::run_parallel(g, cfg);
  EXPECT_EQ(run.global.rows(), 30u);
  for (VertexId v = 0; v < 30; ++v) EXPECT_EQ(run.global.index()[v], v);
  EXPECT_EQ(run.maps.size(), 3u);
  for (const auto& w : run.maps) EXPECT_LT(pge::orthogonality_error(w), 1e-8);
  // anchors take the pivot row exactly
  for (VertexId a : run.decomposition.anchors) {
    auto got = run.global.row_for(a);
    auto want = run.subgraph_embeddings[run.pivot].row_for(a);
    EXPECT_TRUE(std::equal(got.begin(), got.end(), want.begin()));
  }
}

TEST(Pipeline, WritesOutputs) {
  const auto sbm = pge::stochastic_block_model(120, 3, 0.2, 0.02, 8);
  const fs::path dir = scratch_dir("outputs");
  const fs::path labels = dir.string() + "_labels.txt";
  {
    std::ofstream out(labels);
    for (VertexId v = 0; v < 120; ++v) out << v << ' ' << "c" << sbm.community[v] << '\n';
  }
  const fs::path edges = dir.string() + "_edges.txt";
  pge::save_edge_list(sbm.graph, edges.string());

  PipelineConfig cfg = small_walk_config();
  cfg.input = edges.string();
  cfg.parts = 2;
  cfg.anchor_count = 4;
  cfg.labels = labels.string();
  cfg.holdout = 0.5;
  cfg.eval_pip = true;
  cfg.out = dir.string();
  const auto result = pge::run_pipeline(cfg);
  for (const char* f : {"global.emb", "sub_0.emb", "sub_1.emb", "map_0.emb", "map_1.emb", "decomposition.txt",
                        "report.txt", "report.json", "metrics.txt", "metrics.json"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_EQ(pge::load_embedding((dir / "global.emb").string()).rows(), 120u);
  for (const char* k : {"micro_f1", "macro_f1", "baseline_micro_f1", "roc", "ap"})
    EXPECT_TRUE(result.report.extrinsic.count(k)) << k;
  const auto json = nlohmann::json::parse(std::ifstream(dir / "report.json"));
  EXPECT_TRUE(json.contains("pip"));
  const auto metrics = nlohmann::json::parse(std::ifstream(dir / "metrics.json"));
  EXPECT_EQ(metrics["tasks"].size(), 2u);
  fs::remove_all(dir);
  fs::remove(labels);
  fs::remove(edges);
}

TEST(Pipeline, InfeasibleCapacities) {
  const Graph g = pge::erdos_renyi(40, 0.2, 9);
  PipelineConfig cfg = small_walk_config();
  cfg.capacities = pge::Capacities::parse("20,20");
  EXPECT_THROW(pge::run_parallel(g, cfg), pge::ConfigError);
  cfg.capacities = pge::Capacities::parse("39,3");
  cfg.anchor_count = 3;
  EXPECT_THROW(pge::run_parallel(g, cfg), pge::CapacityError);
}

}  // namespace
