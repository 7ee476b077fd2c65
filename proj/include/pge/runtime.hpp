#pragma once

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pge/embed.hpp"
#include "pge/embedding.hpp"
#include "pge/error.hpp"
#include "pge/extrinsic.hpp"
#include "pge/graph.hpp"
#include "pge/intrinsic.hpp"
#include "pge/partition.hpp"
#include "pge/reconcile.hpp"
#include "pge/report.hpp"

namespace pge {

enum class Isolation { threads, process };

// ---------------------------------------------------------------------------
// Configuration

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream s(value);
  T out{};
  if constexpr (std::is_unsigned_v<T>) {
    if (!value.empty() && value[0] == '-') throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  }
  if (!(s >> out) || !(s >> std::ws).eof())
    throw ConfigError(key + ": invalid value '" + value + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

}  // namespace detail

struct PipelineConfig {
  std::string input;
  std::optional<std::size_t> parts;
  std::optional<Capacities> capacities;  // default: ceil(1.05 |V| / n) + d per node
  std::optional<std::size_t> anchor_count;
  double anchor_ratio = 0.01;
  AnchorStrategy anchor_strategy = AnchorStrategy::top_cut_degree;
  bool reconcile = true;  // false concatenates the unaligned spaces
  BackendConfig backend;
  PivotPolicy pivot;
  std::size_t workers = 1;
  Isolation isolation = Isolation::threads;
  std::uint64_t seed = 1;

  bool eval_pip = true;  // compare with the centralised embedding
  bool eval_bound = false;
  std::string labels;
  double train_ratio = 0.5;
  std::optional<double> holdout;
  std::optional<double> baseline_seconds;  // single-node stage time for the speedup

  std::string out;

  // Applies one "key = value" setting; keys mirror the CLI flags.
  void set(const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_number;
    if (key == "input") input = value;
    else if (key == "parts") parts = parse_number<std::size_t>(key, value);
    else if (key == "capacities") capacities = Capacities::parse(value);
    else if (key == "anchors") anchor_count = parse_number<std::size_t>(key, value);
    else if (key == "anchor-ratio") anchor_ratio = parse_number<double>(key, value);
    else if (key == "anchor-strategy") {
      if (value == "top") anchor_strategy = AnchorStrategy::top_cut_degree;
      else if (value == "random") anchor_strategy = AnchorStrategy::random;
      else throw ConfigError("anchor-strategy: expected top or random, got '" + value + "'");
    } else if (key == "reconcile") reconcile = parse_bool(key, value);
    else if (key == "backend") backend.kind = parse_backend(value);
    else if (key == "dim") backend.dim = parse_number<std::size_t>(key, value);
    else if (key == "alpha") backend.alpha = parse_number<double>(key, value);
    else if (key == "dense-cap") backend.dense_cap = parse_number<std::size_t>(key, value);
    else if (key == "walks") backend.walk.walks_per_vertex = parse_number<std::size_t>(key, value);
    else if (key == "walk-length") backend.walk.walk_length = parse_number<std::size_t>(key, value);
    else if (key == "window") backend.walk.window = parse_number<std::size_t>(key, value);
    else if (key == "negatives") backend.walk.negatives = parse_number<std::size_t>(key, value);
    else if (key == "epochs") backend.walk.epochs = parse_number<std::size_t>(key, value);
    else if (key == "learning-rate") backend.walk.learning_rate = parse_number<double>(key, value);
    else if (key == "pivot") pivot = PivotPolicy::parse(value);
    else if (key == "workers") workers = parse_number<std::size_t>(key, value);
    else if (key == "isolation") {
      if (value == "threads") isolation = Isolation::threads;
      else if (value == "process") isolation = Isolation::process;
      else throw ConfigError("isolation: expected threads or process, got '" + value + "'");
    } else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "eval-pip") eval_pip = parse_bool(key, value);
    else if (key == "eval-bound") eval_bound = parse_bool(key, value);
    else if (key == "labels") labels = value;
    else if (key == "train-ratio") train_ratio = parse_number<double>(key, value);
    else if (key == "holdout") holdout = parse_number<double>(key, value);
    else if (key == "baseline-seconds") baseline_seconds = parse_number<double>(key, value);
    else if (key == "out") out = value;
    else throw ConfigError("unknown configuration key '" + key + "'");
  }

  void validate() const {
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (parts && *parts < 1) throw ConfigError("parts must be >= 1");
    if (parts && capacities && capacities->parts() != *parts)
      throw ConfigError("parts = " + std::to_string(*parts) + " but " +
                        std::to_string(capacities->parts()) + " capacities were given");
    if (!(anchor_ratio >= 0.0 && anchor_ratio < 1.0)) throw ConfigError("anchor-ratio must lie in [0, 1)");
    if (backend.dim < 1) throw ConfigError("dim must be >= 1");
    if (!(backend.alpha >= 0.0 && backend.alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
    if (holdout && !(*holdout > 0.0 && *holdout < 1.0)) throw ConfigError("holdout must lie in (0, 1)");
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw ConfigError("train-ratio must lie in (0, 1)");
    backend.walk.validate();
  }

  std::size_t num_parts() const { return capacities ? capacities->parts() : parts.value_or(1); }

  std::size_t resolved_anchor_count(std::size_t num_vertices) const {
    return anchor_count ? *anchor_count : anchor_count_for_ratio(num_vertices, anchor_ratio);
  }

  Capacities resolved_capacities(std::size_t num_vertices, std::size_t anchors) const {
    if (capacities) return *capacities;
    const std::size_t n = num_parts();
    const auto k = static_cast<std::size_t>(
        std::ceil(1.05 * static_cast<double>(num_vertices) / static_cast<double>(n)));
    return Capacities::uniform(n, k + anchors);
  }
};

// Flat "key = value" lines; '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in,
                                                                    const std::string& source = "<stream>") {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = detail::trim(body.substr(0, eq));
    std::string value = detail::trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

inline void apply_config_file(PipelineConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  for (const auto& [k, v] : parse_config(in, path)) cfg.set(k, v);
}

// ---------------------------------------------------------------------------
// Worker pool

// Runs body(i) for i in [0, count) on at most `workers` threads. Failures
// are collected per index; the lowest failing index is rethrown after every
// thread has joined.
template <class Body>
void parallel_for(std::size_t count, std::size_t workers, Body&& body) {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(workers, count);
  if (threads <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct EmbedTask {
  const Subgraph* subgraph = nullptr;
  std::size_t capacity = 0;
  std::uint64_t seed = 0;
};

struct TaskResult {
  EmbeddingMatrix embedding;
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;
  long max_rss_kb = 0;  // process isolation only
};

namespace detail {

inline double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Exact binary form, used to hand results back from worker processes.
inline void write_embedding_binary(const EmbeddingMatrix& e, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  const std::uint64_t rows = e.rows(), dim = e.dim();
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  out.write(reinterpret_cast<const char*>(e.index().data()),
            static_cast<std::streamsize>(rows * sizeof(VertexId)));
  out.write(reinterpret_cast<const char*>(e.values().data().data()),
            static_cast<std::streamsize>(rows * dim * sizeof(double)));
  if (!out) throw BackendError("cannot write worker result '" + path + "'");
}

inline EmbeddingMatrix read_embedding_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t rows = 0, dim = 0;
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  if (!in) throw BackendError("truncated worker result '" + path + "'");
  std::vector<VertexId> index(rows);
  Matrix values(rows, dim);
  in.read(reinterpret_cast<char*>(index.data()), static_cast<std::streamsize>(rows * sizeof(VertexId)));
  in.read(reinterpret_cast<char*>(values.data().data()),
          static_cast<std::streamsize>(rows * dim * sizeof(double)));
  if (!in) throw BackendError("truncated worker result '" + path + "'");
  return EmbeddingMatrix(std::move(values), std::move(index));
}

inline std::vector<TaskResult> execute_in_processes(std::span<const EmbedTask> tasks,
                                                    const BackendConfig& backend,
                                                    std::size_t workers) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("pge-pool-" + std::to_string(::getpid()) + "-" +
                        std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  fs::create_directories(dir);
  auto result_path = [&](std::size_t i) { return (dir / ("task_" + std::to_string(i) + ".bin")).string(); };
  auto error_path = [&](std::size_t i) { return (dir / ("task_" + std::to_string(i) + ".err")).string(); };

  std::vector<TaskResult> results(tasks.size());
  std::vector<int> status(tasks.size(), 0);
  std::vector<std::chrono::steady_clock::time_point> started(tasks.size());
  std::map<pid_t, std::size_t> running;
  std::size_t next = 0;

  auto reap_one = [&] {
    int st = 0;
    rusage ru{};
    const pid_t pid = ::wait4(-1, &st, 0, &ru);
    if (pid < 0) throw BackendError("wait4 failed while collecting worker processes");
    const auto it = running.find(pid);
    if (it == running.end()) return;
    const std::size_t i = it->second;
    running.erase(it);
    status[i] = WIFEXITED(st) ? WEXITSTATUS(st) : 128 + (WIFSIGNALED(st) ? WTERMSIG(st) : 0);
    results[i].wall_seconds = seconds_since(started[i]);
    results[i].cpu_seconds = static_cast<double>(ru.ru_utime.tv_sec + ru.ru_stime.tv_sec) +
                             1e-6 * static_cast<double>(ru.ru_utime.tv_usec + ru.ru_stime.tv_usec);
    results[i].max_rss_kb = ru.ru_maxrss;
  };

  while (next < tasks.size() || !running.empty()) {
    while (next < tasks.size() && running.size() < workers) {
      const std::size_t i = next++;
      started[i] = std::chrono::steady_clock::now();
      const pid_t pid = ::fork();
      if (pid < 0) throw BackendError("fork failed for subgraph " + std::to_string(i), i);
      if (pid == 0) {
        int code = 0;
        try {
          write_embedding_binary(embed_subgraph(*tasks[i].subgraph, backend, tasks[i].seed), result_path(i));
        } catch (const Error& ex) {
          std::ofstream(error_path(i)) << ex.what();
          code = ex.exit_code();
        } catch (const std::exception& ex) {
          std::ofstream(error_path(i)) << ex.what();
          code = 1;
        }
        std::_Exit(code);
      }
      running.emplace(pid, i);
    }
    if (!running.empty()) reap_one();
  }

  std::optional<std::size_t> failed;
  for (std::size_t i = 0; i < tasks.size() && !failed; ++i)
    if (status[i] != 0) failed = i;
  if (failed) {
    std::ifstream err(error_path(*failed));
    std::string msg((std::istreambuf_iterator<char>(err)), std::istreambuf_iterator<char>());
    fs::remove_all(dir);
    if (msg.empty()) msg = "worker exited with status " + std::to_string(status[*failed]);
    throw BackendError("subgraph " + std::to_string(*failed) + ": " + msg, *failed);
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) results[i].embedding = read_embedding_binary(result_path(i));
  fs::remove_all(dir);
  return results;
}

}  // namespace detail

// Every task is checked against its capacity before any embedding starts.
// Results come back in task order; the call returns only once all tasks
// have finished, which is the barrier before reconciliation.
inline std::vector<TaskResult> worker_pool_execute(std::span<const EmbedTask> tasks,
                                                   const BackendConfig& backend, std::size_t workers,
                                                   Isolation isolation = Isolation::threads) {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].subgraph == nullptr) throw std::invalid_argument("task without subgraph");
    if (tasks[i].subgraph->size() > tasks[i].capacity)
      throw CapacityError("subgraph " + std::to_string(i) + " has " +
                              std::to_string(tasks[i].subgraph->size()) + " vertices, exceeding k_" +
                              std::to_string(i) + " = " + std::to_string(tasks[i].capacity),
                          i);
  }
  if (isolation == Isolation::process) return detail::execute_in_processes(tasks, backend, workers);

  std::vector<TaskResult> results(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    const double c0 = detail::thread_cpu_seconds();
    try {
      results[i].embedding = embed_subgraph(*tasks[i].subgraph, backend, tasks[i].seed);
    } catch (const std::exception& ex) {
      throw BackendError("subgraph " + std::to_string(i) + ": " + ex.what(), i);
    }
    results[i].cpu_seconds = detail::thread_cpu_seconds() - c0;
    results[i].wall_seconds = detail::seconds_since(t0);
  });
  return results;
}

// ---------------------------------------------------------------------------
// Metrics

struct TaskMetrics {
  std::size_t vertices = 0;
  std::size_t capacity = 0;
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;
  long max_rss_kb = 0;
};

struct RunMetrics {
  std::vector<TaskMetrics> tasks;
  std::size_t workers = 1;
  std::size_t anchors = 0;
  std::size_t cut_edges = 0;
  std::size_t lost_edges = 0;
  double partition_seconds = 0.0;
  double embed_wall_seconds = 0.0;  // wall time of the whole embedding stage
  double max_task_seconds = 0.0;    // max per-task CPU time
  double reconcile_seconds = 0.0;   // max per-space alignment time
  double stage_seconds = 0.0;       // max_task_seconds + reconcile_seconds
  double total_wall_seconds = 0.0;
  std::size_t peak_task_vertices = 0;
  std::optional<double> baseline_seconds;
  std::optional<double> speedup;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["workers"] = workers;
    j["anchors"] = anchors;
    j["cut_edges"] = cut_edges;
    j["lost_edges"] = lost_edges;
    j["partition_seconds"] = partition_seconds;
    j["embed_wall_seconds"] = embed_wall_seconds;
    j["max_task_seconds"] = max_task_seconds;
    j["reconcile_seconds"] = reconcile_seconds;
    j["stage_seconds"] = stage_seconds;
    j["total_wall_seconds"] = total_wall_seconds;
    j["peak_task_vertices"] = peak_task_vertices;
    if (baseline_seconds) j["baseline_seconds"] = *baseline_seconds;
    if (speedup) j["speedup"] = *speedup;
    j["tasks"] = nlohmann::json::array();
    for (const auto& t : tasks)
      j["tasks"].push_back({{"vertices", t.vertices},
                            {"capacity", t.capacity},
                            {"wall_seconds", t.wall_seconds},
                            {"cpu_seconds", t.cpu_seconds},
                            {"max_rss_kb", t.max_rss_kb}});
    return j;
  }

  void write_text(std::ostream& out) const {
    out << std::setprecision(6);
    out << "workers = " << workers << '\n'
        << "anchors = " << anchors << '\n'
        << "cut_edges = " << cut_edges << '\n'
        << "lost_edges = " << lost_edges << '\n'
        << "partition_seconds = " << partition_seconds << '\n'
        << "embed_wall_seconds = " << embed_wall_seconds << '\n'
        << "max_task_seconds = " << max_task_seconds << '\n'
        << "reconcile_seconds = " << reconcile_seconds << '\n'
        << "stage_seconds = " << stage_seconds << '\n'
        << "total_wall_seconds = " << total_wall_seconds << '\n'
        << "peak_task_vertices = " << peak_task_vertices << '\n';
    if (baseline_seconds) out << "baseline_seconds = " << *baseline_seconds << '\n';
    if (speedup) out << "speedup = " << *speedup << '\n';
    for (std::size_t i = 0; i < tasks.size(); ++i)
      out << "task_" << i << " = vertices " << tasks[i].vertices << " capacity " << tasks[i].capacity
          << " wall " << tasks[i].wall_seconds << " cpu " << tasks[i].cpu_seconds << " rss_kb "
          << tasks[i].max_rss_kb << '\n';
  }
};

// ---------------------------------------------------------------------------
// Pipeline

struct ParallelRun {
  Decomposition decomposition;
  std::vector<EmbeddingMatrix> subgraph_embeddings;  // before alignment
  std::vector<Matrix> maps;                          // empty when not reconciled
  std::size_t pivot = 0;
  EmbeddingMatrix global;
  RunMetrics metrics;
  std::vector<std::string> warnings;
};

// Embeds already decomposed subgraphs, reconciles and assembles.
inline ParallelRun run_decomposed(const Graph& g, Decomposition decomposition, const Capacities& caps,
                                  const PipelineConfig& cfg) {
  if (caps.parts() != decomposition.subgraphs.size())
    throw ConfigError("decomposition has " + std::to_string(decomposition.subgraphs.size()) +
                      " parts but " + std::to_string(caps.parts()) + " capacities were given");
  ParallelRun run;
  run.decomposition = std::move(decomposition);
  const auto& subs = run.decomposition.subgraphs;
  RunMetrics& m = run.metrics;
  m.workers = cfg.workers;
  m.anchors = run.decomposition.anchors.size();
  m.cut_edges = run.decomposition.cut.size();
  m.lost_edges = run.decomposition.lost_edges();

  std::vector<EmbedTask> tasks;
  for (std::size_t i = 0; i < subs.size(); ++i)
    tasks.push_back({&subs[i], caps.limits[i], cfg.seed ^ static_cast<std::uint64_t>(i)});
  const auto t0 = std::chrono::steady_clock::now();
  auto results = worker_pool_execute(tasks, cfg.backend, cfg.workers, cfg.isolation);
  m.embed_wall_seconds = detail::seconds_since(t0);

  for (std::size_t i = 0; i < results.size(); ++i) {
    m.tasks.push_back({subs[i].size(), caps.limits[i], results[i].wall_seconds,
                       results[i].cpu_seconds, results[i].max_rss_kb});
    m.max_task_seconds = std::max(m.max_task_seconds, results[i].cpu_seconds);
    m.peak_task_vertices = std::max(m.peak_task_vertices, subs[i].size());
    run.subgraph_embeddings.push_back(std::move(results[i].embedding));
  }

  run.pivot = choose_pivot(run.subgraph_embeddings, cfg.pivot);
  const bool align = cfg.reconcile && subs.size() > 1;
  if (align && run.decomposition.anchors.empty()) {
    run.warnings.push_back("no anchors: subgraph spaces were not reconciled");
  }
  if (align && !run.decomposition.anchors.empty()) {
    ReconcileResult rec = reconcile_all(run.subgraph_embeddings, run.decomposition.anchors, run.pivot);
    for (double s : rec.fit_seconds) m.reconcile_seconds = std::max(m.reconcile_seconds, s);
    for (auto& map : rec.maps) run.maps.push_back(std::move(map.w));
    run.warnings.insert(run.warnings.end(), rec.warnings.begin(), rec.warnings.end());
    run.global = assemble_global(rec.mapped, g.num_vertices(), run.pivot);
  } else {
    run.global = assemble_global(run.subgraph_embeddings, g.num_vertices(), run.pivot);
  }
  m.stage_seconds = m.max_task_seconds + m.reconcile_seconds;
  if (cfg.baseline_seconds && m.stage_seconds > 0) {
    m.baseline_seconds = cfg.baseline_seconds;
    m.speedup = *cfg.baseline_seconds / m.stage_seconds;
  }
  return run;
}

// Partition, parallel embedding, reconciliation, assembly.
inline ParallelRun run_parallel(const Graph& g, const PipelineConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t d = cfg.resolved_anchor_count(g.num_vertices());
  const Capacities caps = cfg.resolved_capacities(g.num_vertices(), d);
  const auto tp = std::chrono::steady_clock::now();
  Decomposition dec = decompose_with_anchors(g, caps, d, cfg.seed, cfg.anchor_strategy);
  const double partition_seconds = detail::seconds_since(tp);
  ParallelRun run = run_decomposed(g, std::move(dec), caps, cfg);
  run.metrics.partition_seconds = partition_seconds;
  run.metrics.total_wall_seconds = detail::seconds_since(t0);
  return run;
}

// Reference embedding E: the backend on the whole graph with the run seed.
inline EmbeddingMatrix run_centralised(const Graph& g, const PipelineConfig& cfg) {
  cfg.validate();
  return embed_graph(g, cfg.backend, cfg.seed);
}

inline EvalReport evaluate_run(const Graph& g, const ParallelRun& run, const PipelineConfig& cfg) {
  EvalReport report;
  report.warnings = run.warnings;
  if (cfg.eval_pip) {
    const EmbeddingMatrix e = run_centralised(g, cfg);
    report.pip = pip_distance(e, run.global);
    report.pip_normalized = *report.pip / static_cast<double>(g.num_vertices());
  }
  if (cfg.eval_bound) {
    const auto& parts = run.decomposition.parts;
    if (parts.size() != 2) {
      report.warnings.push_back("bound skipped: it is defined for two parts only");
    } else if (g.num_vertices() > cfg.backend.dense_cap) {
      report.warnings.push_back("bound skipped: graph exceeds the dense spectral cap");
    } else {
      const SignalKind kind = cfg.backend.kind == BackendKind::svd_line ? SignalKind::line : SignalKind::hope;
      report.spectrum = spectrum(signal_matrix(g, kind));
      report.bound = theorem1_bound(report.spectrum, cfg.backend.alpha,
                                    std::min(cfg.backend.dim, g.num_vertices()), g.num_vertices(),
                                    parts[0].size(), parts[1].size());
      report.bound_in_theory = is_spectral(cfg.backend.kind) && run.decomposition.anchors.empty();
      if (!report.bound_in_theory)
        report.warnings.push_back("bound is out of theory (walk backend or overlapping parts)");
    }
  }
  if (!cfg.labels.empty()) {
    const LabeledVertices lv = load_labels(cfg.labels, g);
    const auto scores = vertex_classification_eval(run.global, lv, cfg.train_ratio, cfg.seed);
    const auto base = majority_baseline(lv, cfg.train_ratio, cfg.seed);
    report.extrinsic["micro_f1"] = scores.micro_f1;
    report.extrinsic["macro_f1"] = scores.macro_f1;
    report.extrinsic["baseline_micro_f1"] = base.micro_f1;
    report.skipped_labels = scores.skipped_labels;
  }
  if (cfg.holdout) {
    PipelineConfig inner = cfg;
    inner.eval_pip = false;
    inner.eval_bound = false;
    const auto links = link_prediction_eval(
        g, [&](const Graph& residual) { return run_parallel(residual, inner).global; }, *cfg.holdout,
        cfg.seed);
    report.extrinsic["roc"] = links.roc;
    report.extrinsic["ap"] = links.ap;
  }
  return report;
}

struct PipelineResult {
  EmbeddingMatrix global;
  EvalReport report;
  RunMetrics metrics;
  Decomposition decomposition;
};

// Writes global.emb, sub_<i>.emb, map_<i>.emb, decomposition.txt,
// report.{txt,json} and metrics.{txt,json} into `dir`.
inline void write_outputs(const std::string& dir, const ParallelRun& run, const EvalReport& report) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);
  save_embedding(run.global, (base / "global.emb").string());
  for (std::size_t i = 0; i < run.subgraph_embeddings.size(); ++i)
    save_embedding(run.subgraph_embeddings[i], (base / ("sub_" + std::to_string(i) + ".emb")).string());
  for (std::size_t i = 0; i < run.maps.size(); ++i)
    save_embedding(EmbeddingMatrix::with_identity_index(run.maps[i]),
                   (base / ("map_" + std::to_string(i) + ".emb")).string());
  {
    std::ostringstream s;
    write_manifest(run.decomposition, s);
    write_file((base / "decomposition.txt").string(), s.str());
  }
  write_file((base / "report.txt").string(), report.text());
  write_file((base / "report.json").string(), report.to_json().dump(2) + "\n");
  std::ostringstream metrics;
  run.metrics.write_text(metrics);
  write_file((base / "metrics.txt").string(), metrics.str());
  write_file((base / "metrics.json").string(), run.metrics.to_json().dump(2) + "\n");
}

inline PipelineResult run_pipeline(const Graph& g, const PipelineConfig& cfg) {
  ParallelRun run = run_parallel(g, cfg);
  EvalReport report = evaluate_run(g, run, cfg);
  if (!cfg.out.empty()) write_outputs(cfg.out, run, report);
  return {std::move(run.global), std::move(report), std::move(run.metrics), std::move(run.decomposition)};
}

inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  if (cfg.input.empty()) throw ConfigError("no input edge list given");
  return run_pipeline(load_edge_list(cfg.input), cfg);
}

}  // namespace pge
