// pge: parallel graph embedding command line.
//
//   pge partition --input g.txt --parts 2 --out dir
//   pge embed     --input g.txt [--manifest dir/decomposition.txt] --out dir
//   pge reconcile --input g.txt --manifest dir/decomposition.txt --out dir
//   pge eval      --input g.txt --embedding dir/global.emb [--labels l.txt] [--holdout 0.5]
//   pge run       --input g.txt --parts 4 --workers 4 --out dir
//   pge bound     --input g.txt --backend svd-hope --dim 4

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "pge/pge.hpp"

namespace {

namespace fs = std::filesystem;
using Overrides = std::vector<std::pair<std::string, std::string>>;

struct Options {
  std::string config;
  std::string manifest;
  std::string embedding;
  std::string reference;
  std::string embeddings_dir;
  std::string part_signal = "restricted";
  Overrides overrides;
};

void add_key(CLI::App* app, Options& opt, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      "--" + key, [&opt, key](const std::string& v) { opt.overrides.emplace_back(key, v); }, help);
}

void add_graph_options(CLI::App* app, Options& opt) {
  app->add_option("--config", opt.config, "key = value configuration file (flags override it)");
  add_key(app, opt, "input", "edge-list file");
  add_key(app, opt, "seed", "random seed");
  add_key(app, opt, "out", "output directory");
}

void add_partition_options(CLI::App* app, Options& opt) {
  add_key(app, opt, "parts", "number of compute nodes n");
  add_key(app, opt, "capacities", "comma-separated k_1,...,k_n");
  add_key(app, opt, "anchors", "anchor count d");
  add_key(app, opt, "anchor-ratio", "anchor count as a fraction of |V| (default 0.01)");
  add_key(app, opt, "anchor-strategy", "top or random");
}

void add_backend_options(CLI::App* app, Options& opt) {
  add_key(app, opt, "backend", "walk, svd-line or svd-hope");
  add_key(app, opt, "dim", "embedding dimension");
  add_key(app, opt, "alpha", "signal parameter for the spectral backends");
  add_key(app, opt, "dense-cap", "largest graph order for the spectral backends");
  add_key(app, opt, "walks", "walks per vertex");
  add_key(app, opt, "walk-length", "vertices per walk");
  add_key(app, opt, "window", "skip-gram window");
  add_key(app, opt, "negatives", "negative samples per pair");
  add_key(app, opt, "epochs", "training epochs");
  add_key(app, opt, "learning-rate", "initial learning rate");
  add_key(app, opt, "workers", "concurrent tasks");
  add_key(app, opt, "isolation", "threads or process");
}

void add_eval_options(CLI::App* app, Options& opt) {
  add_key(app, opt, "labels", "vertex label file");
  add_key(app, opt, "train-ratio", "labeled fraction used for training");
  add_key(app, opt, "holdout", "edge fraction held out for link prediction");
  add_key(app, opt, "eval-pip", "compare against the centralised embedding");
  add_key(app, opt, "eval-bound", "evaluate the two-part PIP bound");
  add_key(app, opt, "baseline-seconds", "single-node stage time for the speedup");
}

pge::PipelineConfig make_config(const Options& opt) {
  pge::PipelineConfig cfg;
  if (!opt.config.empty()) pge::apply_config_file(cfg, opt.config);
  for (const auto& [k, v] : opt.overrides) cfg.set(k, v);
  cfg.validate();
  return cfg;
}

pge::Graph require_graph(const pge::PipelineConfig& cfg) {
  if (cfg.input.empty()) throw pge::ConfigError("--input is required");
  return pge::load_edge_list(cfg.input);
}

std::string out_dir(const pge::PipelineConfig& cfg) { return cfg.out.empty() ? "." : cfg.out; }

pge::Decomposition load_decomposition(const pge::Graph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pge::InputError("cannot open manifest '" + path + "'");
  pge::Manifest m = pge::read_manifest(in);
  return pge::assemble_decomposition(g, std::move(m.parts), std::move(m.anchors));
}

pge::Capacities capacities_for(const pge::PipelineConfig& cfg, const pge::Graph& g,
                               const pge::Decomposition& d) {
  if (cfg.capacities) return *cfg.capacities;
  pge::PipelineConfig c = cfg;
  c.parts = d.parts.size();
  return c.resolved_capacities(g.num_vertices(), d.anchors.size());
}

void print_metrics(const pge::RunMetrics& m) {
  std::cout << std::setprecision(4) << "parts " << m.tasks.size() << ", anchors " << m.anchors
            << ", cut edges " << m.cut_edges << ", lost edges " << m.lost_edges << '\n'
            << "stage time " << m.stage_seconds << " s (max task " << m.max_task_seconds
            << " s, reconcile " << m.reconcile_seconds << " s), peak task vertices "
            << m.peak_task_vertices << '\n';
  if (m.speedup) std::cout << "speedup " << *m.speedup << '\n';
}

int cmd_partition(const Options& opt) {
  const auto cfg = make_config(opt);
  const auto g = require_graph(cfg);
  const std::size_t d = cfg.resolved_anchor_count(g.num_vertices());
  const auto caps = cfg.resolved_capacities(g.num_vertices(), d);
  const auto dec = pge::decompose_with_anchors(g, caps, d, cfg.seed, cfg.anchor_strategy);
  const fs::path dir = out_dir(cfg);
  fs::create_directories(dir);
  std::ostringstream s;
  pge::write_manifest(dec, s);
  pge::write_file((dir / "decomposition.txt").string(), s.str());
  std::cout << "parts " << dec.parts.size() << ", anchors " << dec.anchors.size() << ", cut edges "
            << dec.cut.size() << ", lost edges " << dec.lost_edges() << '\n';
  for (std::size_t i = 0; i < dec.subgraphs.size(); ++i)
    std::cout << "subgraph " << i << ": " << dec.subgraphs[i].size() << " vertices (k = "
              << caps.limits[i] << ")\n";
  return 0;
}

int cmd_embed(const Options& opt) {
  auto cfg = make_config(opt);
  const auto g = require_graph(cfg);
  cfg.reconcile = false;
  pge::ParallelRun run;
  if (opt.manifest.empty()) {
    run = pge::run_parallel(g, cfg);
  } else {
    auto dec = load_decomposition(g, opt.manifest);
    const auto caps = capacities_for(cfg, g, dec);
    run = pge::run_decomposed(g, std::move(dec), caps, cfg);
  }
  const fs::path dir = out_dir(cfg);
  fs::create_directories(dir);
  for (std::size_t i = 0; i < run.subgraph_embeddings.size(); ++i)
    pge::save_embedding(run.subgraph_embeddings[i], (dir / ("sub_" + std::to_string(i) + ".emb")).string());
  std::ostringstream s;
  pge::write_manifest(run.decomposition, s);
  pge::write_file((dir / "decomposition.txt").string(), s.str());
  std::ostringstream m;
  run.metrics.write_text(m);
  pge::write_file((dir / "metrics.txt").string(), m.str());
  print_metrics(run.metrics);
  return 0;
}

int cmd_reconcile(const Options& opt) {
  const auto cfg = make_config(opt);
  const auto g = require_graph(cfg);
  const fs::path dir = out_dir(cfg);
  const std::string manifest = opt.manifest.empty() ? (dir / "decomposition.txt").string() : opt.manifest;
  const auto dec = load_decomposition(g, manifest);
  const fs::path src = opt.embeddings_dir.empty() ? dir : fs::path(opt.embeddings_dir);
  std::vector<pge::EmbeddingMatrix> subs;
  for (std::size_t i = 0; i < dec.parts.size(); ++i)
    subs.push_back(pge::load_embedding((src / ("sub_" + std::to_string(i) + ".emb")).string()));
  const std::size_t pivot = pge::choose_pivot(subs, cfg.pivot);
  fs::create_directories(dir);
  pge::EmbeddingMatrix global;
  if (subs.size() > 1 && dec.anchors.empty()) {
    std::cerr << "warning: no anchors, subgraph spaces were not reconciled\n";
    global = pge::assemble_global(subs, g.num_vertices(), pivot);
  } else {
    const auto rec = pge::reconcile_all(subs, dec.anchors, pivot);
    for (const auto& w : rec.warnings) std::cerr << "warning: " << w << '\n';
    for (std::size_t i = 0; i < rec.maps.size(); ++i)
      pge::save_embedding(pge::EmbeddingMatrix::with_identity_index(rec.maps[i].w),
                          (dir / ("map_" + std::to_string(i) + ".emb")).string());
    global = pge::assemble_global(rec.mapped, g.num_vertices(), pivot);
  }
  pge::save_embedding(global, (dir / "global.emb").string());
  std::cout << "pivot " << pivot << ", " << global.rows() << " vertices assembled\n";
  return 0;
}

int cmd_eval(const Options& opt) {
  const auto cfg = make_config(opt);
  const auto g = require_graph(cfg);
  const fs::path dir = out_dir(cfg);
  const std::string emb_path = opt.embedding.empty() ? (dir / "global.emb").string() : opt.embedding;
  pge::ParallelRun run;
  run.global = pge::load_embedding(emb_path);
  if (!opt.manifest.empty()) run.decomposition = load_decomposition(g, opt.manifest);
  else if (cfg.eval_bound) run.decomposition = load_decomposition(g, (dir / "decomposition.txt").string());

  pge::PipelineConfig inner = cfg;
  pge::EvalReport report;
  if (!opt.reference.empty()) {
    inner.eval_pip = false;
    report = pge::evaluate_run(g, run, inner);
    const auto e = pge::load_embedding(opt.reference);
    report.pip = pge::pip_distance(e, run.global);
    report.pip_normalized = *report.pip / static_cast<double>(g.num_vertices());
  } else {
    report = pge::evaluate_run(g, run, inner);
  }
  fs::create_directories(dir);
  pge::write_file((dir / "report.txt").string(), report.text());
  pge::write_file((dir / "report.json").string(), report.to_json().dump(2) + "\n");
  std::cout << report.text();
  return 0;
}

int cmd_run(const Options& opt) {
  const auto cfg = make_config(opt);
  const auto g = require_graph(cfg);
  pge::PipelineConfig c = cfg;
  c.out = out_dir(cfg);
  const auto result = pge::run_pipeline(g, c);
  print_metrics(result.metrics);
  std::cout << result.report.text();
  return 0;
}

int cmd_bound(const Options& opt) {
  const auto cfg = make_config(opt);
  const auto g = require_graph(cfg);
  if (!pge::is_spectral(cfg.backend.kind))
    throw pge::ConfigError("the bound checker needs a spectral backend (svd-line or svd-hope)");
  std::vector<pge::VertexSet> parts;
  if (!opt.manifest.empty()) {
    parts = load_decomposition(g, opt.manifest).parts;
  } else {
    pge::PipelineConfig c = cfg;
    if (!c.capacities) c.parts = 2;
    parts = pge::decompose(g, c.resolved_capacities(g.num_vertices(), 0), 0, cfg.seed);
  }
  const auto kind = cfg.backend.kind == pge::BackendKind::svd_line ? pge::SignalKind::line : pge::SignalKind::hope;
  pge::PartSignal mode;
  if (opt.part_signal == "restricted") mode = pge::PartSignal::restricted;
  else if (opt.part_signal == "own") mode = pge::PartSignal::own;
  else throw pge::ConfigError("--part-signal: expected restricted or own");
  const auto t = pge::check_bound(g, parts, kind, cfg.backend.alpha, cfg.backend.dim, mode);
  std::cout << std::setprecision(10) << "n = " << t.n << " (" << t.n1 << " + " << t.n2 << "), k = " << t.k
            << ", alpha = " << t.alpha << '\n'
            << "pip = " << t.pip << '\n'
            << "bound = " << t.bound << '\n'
            << "holds = " << (t.holds() ? "true" : "false") << '\n';
  return t.holds() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel graph embedding with anchor-based reconciliation"};
  app.require_subcommand(1);
  Options opt;

  auto* partition = app.add_subcommand("partition", "decompose the graph and select anchors");
  add_graph_options(partition, opt);
  add_partition_options(partition, opt);

  auto* embed = app.add_subcommand("embed", "embed every subgraph");
  add_graph_options(embed, opt);
  add_partition_options(embed, opt);
  add_backend_options(embed, opt);
  embed->add_option("--manifest", opt.manifest, "decomposition written by 'partition'");

  auto* reconcile = app.add_subcommand("reconcile", "align subgraph spaces and assemble");
  add_graph_options(reconcile, opt);
  add_key(reconcile, opt, "pivot", "largest or index:<i>");
  reconcile->add_option("--manifest", opt.manifest, "decomposition file");
  reconcile->add_option("--embeddings", opt.embeddings_dir, "directory holding sub_<i>.emb");

  auto* eval = app.add_subcommand("eval", "evaluate an assembled embedding");
  add_graph_options(eval, opt);
  add_partition_options(eval, opt);
  add_backend_options(eval, opt);
  add_eval_options(eval, opt);
  add_key(eval, opt, "pivot", "largest or index:<i>");
  eval->add_option("--embedding", opt.embedding, "embedding to evaluate (default <out>/global.emb)");
  eval->add_option("--reference", opt.reference, "reference embedding instead of a centralised run");
  eval->add_option("--manifest", opt.manifest, "decomposition file (for the bound)");

  auto* run = app.add_subcommand("run", "full pipeline");
  add_graph_options(run, opt);
  add_partition_options(run, opt);
  add_backend_options(run, opt);
  add_eval_options(run, opt);
  add_key(run, opt, "pivot", "largest or index:<i>");
  add_key(run, opt, "reconcile", "align the subgraph spaces (default true)");

  auto* bound = app.add_subcommand("bound", "two-part PIP bound check");
  add_graph_options(bound, opt);
  add_partition_options(bound, opt);
  add_backend_options(bound, opt);
  bound->add_option("--manifest", opt.manifest, "decomposition file with two parts");
  bound->add_option("--part-signal", opt.part_signal, "restricted or own");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*partition) return cmd_partition(opt);
    if (*embed) return cmd_embed(opt);
    if (*reconcile) return cmd_reconcile(opt);
    if (*eval) return cmd_eval(opt);
    if (*run) return cmd_run(opt);
    if (*bound) return cmd_bound(opt);
  } catch (const pge::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
