#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "config.hpp"
#include "ledgernet/baseline/small_world.hpp"
#include "ledgernet/errors.hpp"
#include "ledgernet/graph_io.hpp"
#include "ledgernet/ingest/block_range.hpp"
#include "ledgernet/ingest/checkpoint.hpp"
#include "ledgernet/ingest/chunk_file.hpp"
#include "ledgernet/ingest/download.hpp"
#include "ledgernet/ingest/fixture_provider.hpp"
#include "ledgernet/ingest/http_providers.hpp"
#include "ledgernet/metrics/report_json.hpp"

#ifndef LEDGERNET_VERSION
#define LEDGERNET_VERSION "0.0.0"
#endif

namespace ledgernet::cli {

namespace fs = std::filesystem;

namespace {

struct Paths {
  fs::path out;
  fs::path chunks() const { return out / "chunks"; }
  fs::path checkpoint() const { return out / "checkpoint.json"; }
  fs::path graph_json() const { return out / "graph.json"; }
  fs::path graph_pajek() const { return out / "graph.pajek"; }
  fs::path metrics() const { return out / "metrics.json"; }
  fs::path comparison() const { return out / "comparison.json"; }
};

struct Switches {
  bool force = false;
  bool reproducible = false;
  bool allow_partial = false;
  std::optional<std::string> config_file;
  std::optional<std::string> graph;
  std::optional<std::string> graph_format;
  std::optional<std::string> chunks;
};

std::string now_utc() {
  return format_utc(std::chrono::duration_cast<std::chrono::seconds>(
                        std::chrono::system_clock::now().time_since_epoch())
                        .count());
}

Json tool_json() { return {{"name", "ledgernet"}, {"version", LEDGERNET_VERSION}}; }

void write_report(const fs::path& path, const Json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file_atomic(path, doc.dump(2) + "\n");
}

std::string fmt_opt(const std::optional<double>& v, int precision = 6) {
  if (!v) return "undefined";
  std::ostringstream s;
  s << std::setprecision(precision) << *v;
  return s.str();
}

std::string fmt_ratio(double r) {
  if (std::isnan(r)) return "undefined";
  if (std::isinf(r)) return "inf";
  std::ostringstream s;
  s << std::setprecision(6) << r;
  return s.str();
}

void print_metrics(std::ostream& out, const metrics::MetricsReport& r) {
  out << "  nodes                    " << r.node_count << "\n"
      << "  edges                    " << r.edge_count << "\n"
      << "  avg degree               " << std::setprecision(4) << r.avg_degree << "\n"
      << "  components               " << r.components.count << "\n"
      << "  main component           " << r.components.main_component_size << " nodes ("
      << std::setprecision(4) << 100.0 * r.components.main_component_fraction << "%), avg degree "
      << r.main_component_avg_degree << "\n"
      << "  max degree               " << r.degrees.max_degree << "\n";
  if (r.degrees.directed_available && r.node_count > 0) {
    out << "  never sent / received    " << fmt_opt(r.degrees.zero_out_fraction, 4) << " / "
        << fmt_opt(r.degrees.zero_in_fraction, 4) << " of nodes\n";
  }
  out << "  graph ACC                " << fmt_opt(r.graph_acc) << "\n"
      << "  main component ACC       " << fmt_opt(r.main_component_acc) << "\n"
      << "  main component ASPL      " << fmt_opt(r.main_component_aspl)
      << (r.aspl_sampled ? " (estimate, " + std::to_string(r.aspl_sources) + " sources)" : "") << "\n";
}

void print_verdict(std::ostream& out, const baseline::SmallWorldVerdict& v) {
  out << "  ACC ratio                " << fmt_ratio(v.acc_ratio) << " (threshold >= " << v.thresholds.acc << ")\n"
      << "  ASPL ratio               " << fmt_ratio(v.aspl_ratio) << " (threshold <= " << v.thresholds.aspl
      << ")\n"
      << "  small world              " << (v.is_small_world ? "yes" : "no") << "\n";
}

std::unique_ptr<ingest::BlockProvider> make_provider(const RunConfig& cfg) {
  const auto& p = cfg.provider;
  if (p.fixture_dir && p.endpoint) throw UsageError("give either --fixture or --endpoint, not both");
  if (p.fixture_dir) return std::make_unique<ingest::FixtureProvider>(*p.fixture_dir);
  if (!p.endpoint) throw UsageError("download needs --fixture DIR or --endpoint URL");
  ingest::HttpSettings settings{*p.endpoint, p.api_key};
  if (cfg.chain == Chain::ethereum) return std::make_unique<ingest::EthereumRpcProvider>(settings);
  return std::make_unique<ingest::BitcoinExplorerProvider>(settings);
}

fs::file_time_type newest_chunk_time(const std::vector<ingest::ChunkFile>& chunks) {
  auto newest = fs::file_time_type::min();
  for (const auto& c : chunks) newest = std::max(newest, fs::last_write_time(c.path));
  return newest;
}

// ---------------------------------------------------------------------------

int cmd_download(const RunConfig& cfg, const Switches& sw, const Runtime& rt, std::ostream& out) {
  if (!cfg.blocks && !cfg.interval) {
    throw UsageError("download needs --from-block/--to-block or --from-time/--to-time");
  }
  auto provider = make_provider(cfg);
  if (provider->chain() != cfg.chain) {
    throw UsageError("provider serves " + std::string(chain_name(provider->chain())) + ", --chain is " +
                     std::string(chain_name(cfg.chain)));
  }

  const bool network = !cfg.provider.fixture_dir.has_value();
  std::optional<ingest::RateLimiter> limiter;
  double rate = cfg.provider.rate_limit.value_or(network ? 10.0 : 0.0);
  if (rate > 0) limiter.emplace(rate);

  ingest::RetryPolicy policy;
  policy.max_attempts = cfg.provider.retry_cap;
  policy.base_delay = ingest::Millis(cfg.provider.backoff_ms);
  ingest::RetryContext ctx{policy, limiter ? &*limiter : nullptr, rt.abort};

  ingest::BlockRange range;
  if (cfg.blocks) {
    range = *cfg.blocks;
  } else {
    range = ingest::resolve_block_range(*cfg.interval, *provider, ctx, cfg.resolve_slack);
    out << "interval " << format_utc(cfg.interval->start) << " .. " << format_utc(cfg.interval->end) << " -> blocks "
        << range.first << ".." << range.last << "\n";
  }

  Paths paths{cfg.output_dir};
  fs::create_directories(paths.out);
  if (sw.force) {
    for (const auto& c : ingest::list_chunk_files(paths.chunks())) fs::remove(c.path);
    fs::remove(paths.checkpoint());
  }

  auto existing = ingest::try_load_checkpoint(paths.checkpoint());
  auto tasks = ingest::plan_tasks(cfg.chain, range, cfg.chunk_size, existing ? &*existing : nullptr);
  ingest::Checkpoint cp = existing ? *existing : ingest::Checkpoint{cfg.chain, range, cfg.chunk_size, {}};
  const std::size_t planned = cp.planned_chunks().size();
  if (tasks.empty()) {
    out << "download already complete (" << planned << " chunks in " << paths.chunks().string()
        << "); use --force to redo\n";
    return kOk;
  }
  if (existing) out << "resuming: " << existing->done.size() << "/" << planned << " chunks already done\n";
  ingest::save_checkpoint(cp, paths.checkpoint());
  write_file_atomic(paths.out / "download.config.json", to_json(cfg).dump(2) + "\n");

  ingest::DownloadOptions opts;
  opts.worker_count = cfg.workers;
  opts.chunk_dir = paths.chunks();
  opts.checkpoint_path = paths.checkpoint();
  opts.retry = policy;
  opts.limiter = limiter ? &*limiter : nullptr;
  opts.stop = rt.stop;
  opts.abort = rt.abort;

  auto summary = ingest::run_download(std::move(tasks), *provider, cp, opts);
  out << "fetched " << summary.blocks_fetched << " blocks, wrote " << summary.transactions_written
      << " transactions in " << summary.chunks_completed << " chunks (" << summary.retries << " retries); "
      << cp.done.size() << "/" << planned << " chunks done\n";
  if (summary.interrupted) {
    out << "interrupted; checkpoint saved, rerun the same command to resume\n";
    return kRuntime;
  }
  return kOk;
}

int cmd_build(const RunConfig& cfg, const Switches& sw, std::ostream& out) {
  Paths paths{cfg.output_dir};
  fs::path chunk_dir = sw.chunks ? fs::path(*sw.chunks) : paths.chunks();
  Chain chain = cfg.chain;
  if (auto cp = ingest::try_load_checkpoint(paths.checkpoint())) {
    chain = cp->chain;
    if (!cp->complete() && !sw.allow_partial) {
      throw Error("download is incomplete (" + std::to_string(cp->done.size()) + "/" +
                  std::to_string(cp->planned_chunks().size()) +
                  " chunks); finish it or pass --allow-partial");
    }
  }
  auto chunks = ingest::list_chunk_files(chunk_dir);
  if (chunks.empty()) throw Error("no chunk files in " + chunk_dir.string());

  std::vector<fs::path> targets;
  if (cfg.write_json) targets.push_back(paths.graph_json());
  if (cfg.write_pajek) targets.push_back(paths.graph_pajek());
  if (!sw.force) {
    const auto newest = newest_chunk_time(chunks);
    bool fresh = std::all_of(targets.begin(), targets.end(),
                             [&](const fs::path& p) { return fs::exists(p) && fs::last_write_time(p) >= newest; });
    if (fresh) {
      out << "graph files are up to date; use --force to rebuild\n";
      return kOk;
    }
  }

  InteractionGraph g = ingest::build_graph_from_chunks(chunk_dir, chain);
  fs::create_directories(paths.out);
  if (cfg.write_json && cfg.write_pajek) {
    export_both(g, paths.graph_json(), paths.graph_pajek());
  } else if (cfg.write_json) {
    export_json(g, paths.graph_json());
  } else {
    export_pajek(g, paths.graph_pajek());
  }
  write_file_atomic(paths.out / "build.config.json", to_json(cfg).dump(2) + "\n");
  out << "built " << chain_name(chain) << " graph from " << g.transaction_count() << " transactions: "
      << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
  for (const auto& t : targets) out << "  " << t.string() << "\n";
  return kOk;
}

struct LoadedGraph {
  InteractionGraph graph;
  fs::path path;
  GraphFormat format;
  std::string sha256;
};

fs::path graph_path(const RunConfig& cfg, const Switches& sw) {
  if (sw.graph) return *sw.graph;
  Paths paths{cfg.output_dir};
  if (fs::exists(paths.graph_pajek())) return paths.graph_pajek();
  if (fs::exists(paths.graph_json())) return paths.graph_json();
  throw Error("no graph in " + paths.out.string() + "; run build first or pass --graph");
}

GraphFormat graph_format(const fs::path& path, const Switches& sw) {
  if (sw.graph_format) {
    auto f = parse_graph_format(*sw.graph_format);
    if (!f) throw UsageError("unknown graph format '" + *sw.graph_format + "'");
    return *f;
  }
  return format_from_extension(path);
}

Json graph_json(const fs::path& path, GraphFormat format, const std::string& sha) {
  return {{"path", path.generic_string()},
          {"format", format == GraphFormat::json ? "json" : "pajek"},
          {"sha256", sha}};
}

LoadedGraph load_graph(const fs::path& path, GraphFormat format, const Switches& sw) {
  if (!fs::exists(path)) throw IoError("graph file not found: " + path.string());
  LoadedGraph lg{import_graph(path, format), path, format, sha256_file(path)};
  if (sw.chunks) ingest::restore_counters_from_chunks(lg.graph, *sw.chunks);
  return lg;
}

// Existing report for the same input and options: skip unless --force.
bool up_to_date(const fs::path& report, const std::string& sha, const Json& options) {
  if (!fs::exists(report)) return false;
  try {
    Json doc = parse_json(read_file(report));
    return doc.at("graph").at("sha256") == sha && doc.at("options") == options;
  } catch (const std::exception&) {
    return false;
  }
}

int cmd_analyze(const RunConfig& cfg, const Switches& sw, std::ostream& out) {
  const fs::path path = graph_path(cfg, sw);
  const GraphFormat format = graph_format(path, sw);
  if (!fs::exists(path)) throw IoError("graph file not found: " + path.string());
  const fs::path report_path = Paths{cfg.output_dir}.metrics();
  Json options = {{"sample_sources", cfg.sample_sources ? Json(*cfg.sample_sources) : Json(nullptr)},
                  {"sample_seed", cfg.seed},
                  {"counters_from", sw.chunks ? Json(*sw.chunks) : Json(nullptr)}};
  const std::string sha = sha256_file(path);
  if (!sw.force && up_to_date(report_path, sha, options)) {
    out << report_path.string() << " is up to date for " << path.string() << "; use --force to recompute\n";
    return kOk;
  }

  LoadedGraph lg = load_graph(path, format, sw);
  auto report = metrics::analyze(lg.graph, {cfg.workers, cfg.sample_sources, cfg.seed});

  Json doc = {{"tool", tool_json()},
              {"graph", graph_json(path, format, lg.sha256)},
              {"chain", chain_name(lg.graph.chain())},
              {"options", options},
              {"config", to_json(cfg)},
              {"metrics", metrics::to_json(report, !sw.reproducible)}};
  if (!sw.reproducible) doc["generated_at"] = now_utc();
  write_report(report_path, doc);

  out << "metrics for " << path.string() << "\n";
  print_metrics(out, report);
  out << "wrote " << report_path.string() << "\n";
  return kOk;
}

int cmd_compare(const RunConfig& cfg, const Switches& sw, std::ostream& out) {
  const fs::path path = graph_path(cfg, sw);
  const GraphFormat format = graph_format(path, sw);
  if (!fs::exists(path)) throw IoError("graph file not found: " + path.string());
  const fs::path report_path = Paths{cfg.output_dir}.comparison();
  Json options = {{"seed", cfg.seed},
                  {"samples", cfg.samples},
                  {"acc_threshold", cfg.thresholds.acc},
                  {"aspl_threshold", cfg.thresholds.aspl},
                  {"sample_sources", cfg.sample_sources ? Json(*cfg.sample_sources) : Json(nullptr)},
                  {"counters_from", sw.chunks ? Json(*sw.chunks) : Json(nullptr)}};
  const std::string sha = sha256_file(path);
  if (!sw.force && up_to_date(report_path, sha, options)) {
    out << report_path.string() << " is up to date for " << path.string() << "; use --force to recompute\n";
    return kOk;
  }

  LoadedGraph lg = load_graph(path, format, sw);
  baseline::CompareOptions opts{cfg.seed, cfg.samples, cfg.workers, cfg.thresholds, cfg.sample_sources};
  auto report = baseline::compare(lg.graph, opts);

  Json doc = {{"tool", tool_json()},
              {"graph", graph_json(path, format, lg.sha256)},
              {"chain", chain_name(lg.graph.chain())},
              {"options", options},
              {"config", to_json(cfg)},
              {"comparison", baseline::to_json(report, !sw.reproducible)}};
  if (!sw.reproducible) doc["generated_at"] = now_utc();
  write_report(report_path, doc);

  out << "subject " << path.string() << "\n";
  print_metrics(out, report.subject);
  out << "baseline G(" << report.spec.n << ", " << report.spec.m << "), seed " << report.spec.seed << ", "
      << report.spec.samples << " sample(s)\n";
  if (report.baselines.size() == 1) print_metrics(out, report.baselines.front().metrics);
  print_verdict(out, report.verdict);
  out << "wrote " << report_path.string() << "\n";
  return kOk;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  Paths paths{cfg.output_dir};
  bool any = false;
  if (auto cp = ingest::try_load_checkpoint(paths.checkpoint())) {
    any = true;
    out << "download: " << chain_name(cp->chain) << " blocks " << cp->range.first << ".." << cp->range.last << ", "
        << cp->done.size() << "/" << cp->planned_chunks().size() << " chunks done"
        << (cp->complete() ? "" : " (incomplete)") << "\n";
  }
  for (const auto& g : {paths.graph_json(), paths.graph_pajek()}) {
    if (fs::exists(g)) {
      any = true;
      out << "graph: " << g.string() << " (" << fs::file_size(g) << " bytes)\n";
    }
  }
  if (fs::exists(paths.metrics())) {
    any = true;
    Json doc = parse_json(read_file(paths.metrics()));
    out << "metrics (" << doc.at("graph").at("path").get<std::string>() << "):\n";
    print_metrics(out, metrics::metrics_from_json(doc.at("metrics")));
  }
  if (fs::exists(paths.comparison())) {
    any = true;
    Json doc = parse_json(read_file(paths.comparison()));
    const Json& c = doc.at("comparison");
    const Json& v = c.at("verdict");
    auto ratio = [](const Json& j) { return j.is_null() ? std::string("undefined") : j.is_string() ? j.get<std::string>() : fmt_ratio(j.get<double>()); };
    out << "comparison against G(" << c.at("baseline").at("spec").at("n") << ", "
        << c.at("baseline").at("spec").at("m") << "), seed " << c.at("baseline").at("spec").at("seed") << ":\n"
        << "  ACC ratio                " << ratio(v.at("acc_ratio")) << " (threshold >= " << v.at("acc_threshold")
        << ")\n"
        << "  ASPL ratio               " << ratio(v.at("aspl_ratio")) << " (threshold <= " << v.at("aspl_threshold")
        << ")\n"
        << "  small world              " << (v.at("is_small_world").get<bool>() ? "yes" : "no") << "\n";
  }
  if (!any) throw Error("nothing to report in " + paths.out.string());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Runtime& runtime) {
  CLI::App app{"Ledger interaction-graph toolkit: download, build, analyze, compare", "ledgernet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LEDGERNET_VERSION);

  Layer flags;
  Switches sw;
  auto bind = [&flags](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    return sub->add_option_function<std::string>(
        name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", sw.config_file, "JSON config file (flags > LEDGERNET_* env > file)");
    bind(sub, "--output-dir,-o", "output_dir", "Directory for chunks, graphs and reports");
    bind(sub, "--workers,-j", "workers", "Worker threads (default: logical cores)");
    bind(sub, "--chain", "chain", "bitcoin or ethereum");
    sub->add_flag("--force", sw.force, "Redo the step even if its outputs exist");
  };
  auto analysis = [&](CLI::App* sub) {
    sub->add_option("--graph,-g", sw.graph, "Graph file (.json, .pajek, .net)");
    sub->add_option("--graph-format", sw.graph_format, "json or pajek (default: from extension)");
    sub->add_option("--chunks", sw.chunks, "Chunk directory to restore in/out transaction counters from");
    bind(sub, "--sample-sources", "sample_sources", "Estimate ASPL from K BFS sources (0 = exact)");
    bind(sub, "--seed", "seed", "Seed for baselines and source sampling");
    sub->add_flag("--reproducible", sw.reproducible, "Omit timestamps and wall times from the report");
  };

  auto* download = app.add_subcommand("download", "Fetch block transactions into chunk files");
  common(download);
  bind(download, "--fixture", "fixture", "Directory of per-block fixture files");
  bind(download, "--endpoint", "endpoint", "Provider URL ({api_key} is substituted)");
  bind(download, "--api-key", "api_key", "Provider API key");
  bind(download, "--from-block", "from_block", "First block height");
  bind(download, "--to-block", "to_block", "Last block height");
  bind(download, "--from-time", "from_time", "Interval start (unix seconds or ISO date)");
  bind(download, "--to-time", "to_time", "Interval end (unix seconds or ISO date)");
  bind(download, "--chunk-size", "chunk_size", "Blocks per chunk file");
  bind(download, "--rate-limit", "rate_limit", "Requests per second, all workers together");
  bind(download, "--retry-cap", "retry_cap", "Give up after N attempts per request (0 = never)");
  bind(download, "--backoff-ms", "backoff_ms", "First retry delay in milliseconds");
  bind(download, "--slack", "slack", "Blocks scanned linearly around interval bounds");

  auto* build = app.add_subcommand("build", "Build JSON and Pajek graphs from chunk files");
  common(build);
  build->add_option("--chunks", sw.chunks, "Chunk directory (default: <output-dir>/chunks)");
  bind(build, "--format", "format", "json, pajek or both");
  build->add_flag("--allow-partial", sw.allow_partial, "Build even if the download is incomplete");

  auto* analyze = app.add_subcommand("analyze", "Compute degree, component, clustering and path metrics");
  common(analyze);
  analysis(analyze);

  auto* compare = app.add_subcommand("compare", "Compare a graph against Erdos-Renyi baselines");
  common(compare);
  analysis(compare);
  bind(compare, "--samples", "samples", "Number of baseline graphs");
  bind(compare, "--acc-threshold", "acc_threshold", "Minimum ACC ratio for a small world");
  bind(compare, "--aspl-threshold", "aspl_threshold", "Maximum ASPL ratio for a small world");

  auto* report = app.add_subcommand("report", "Summarize existing artifacts");
  bind(report, "--output-dir,-o", "output_dir", "Directory holding the artifacts");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    std::vector<Layer> layers;
    if (sw.config_file) layers.push_back(load_config_file(*sw.config_file));
    layers.push_back(environment_layer());
    layers.push_back(flags);
    RunConfig cfg = resolve_config(layers);

    if (download->parsed()) return cmd_download(cfg, sw, runtime, out);
    if (build->parsed()) return cmd_build(cfg, sw, out);
    if (analyze->parsed()) return cmd_analyze(cfg, sw, out);
    if (compare->parsed()) return cmd_compare(cfg, sw, out);
    return cmd_report(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
}

}  // namespace ledgernet::cli
