#include "ledgernet/metrics/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ledgernet/errors.hpp"
#include "ledgernet/parallel.hpp"
#include "ledgernet/random.hpp"

namespace ledgernet::metrics {

namespace {

constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();

class Stopwatch {
 public:
  double lap_ms() {
    auto now = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Per-worker scratch for counting links among a node's neighbours.
class ClusteringScratch {
 public:
  explicit ClusteringScratch(std::size_t n) : mark_(n, 0) {}

  double coefficient(const InteractionGraph& g, NodeIndex v) {
    auto nbrs = g.neighbors(v);
    const std::uint64_t d = nbrs.size();
    if (d < 2) return 0.0;
    const NodeIndex stamp = v + 1;
    for (NodeIndex u : nbrs) mark_[u] = stamp;
    // Each link among neighbours is seen from both of its ends.
    std::uint64_t seen = 0;
    for (NodeIndex u : nbrs) {
      for (NodeIndex w : g.neighbors(u)) {
        if (mark_[w] == stamp) ++seen;
      }
    }
    for (NodeIndex u : nbrs) mark_[u] = 0;
    return static_cast<double>(seen) / static_cast<double>(d * (d - 1));
  }

 private:
  std::vector<NodeIndex> mark_;
};

std::vector<double> local_coefficients(const InteractionGraph& g, std::span<const NodeIndex> nodes, unsigned workers) {
  std::vector<double> out(nodes.size(), 0.0);
  std::vector<ClusteringScratch> scratch;
  const unsigned w = std::max(1u, workers);
  scratch.reserve(w);
  for (unsigned i = 0; i < w; ++i) scratch.emplace_back(g.node_count());
  parallel_for(nodes.size(), w, [&](unsigned worker, std::size_t i) {
    out[i] = scratch[worker].coefficient(g, nodes[i]);
  });
  return out;
}

double ordered_mean(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

struct BfsResult {
  std::uint64_t distance_sum = 0;
  std::uint64_t reached = 0;  // including the source
  std::uint64_t eccentricity = 0;
};

class BfsScratch {
 public:
  explicit BfsScratch(std::size_t n) : dist_(n, kUnvisited) { queue_.reserve(n); }

  BfsResult run(const InteractionGraph& g, NodeIndex source) {
    BfsResult r;
    queue_.clear();
    queue_.push_back(source);
    dist_[source] = 0;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      NodeIndex v = queue_[head];
      std::uint32_t dv = dist_[v];
      r.distance_sum += dv;
      r.eccentricity = std::max<std::uint64_t>(r.eccentricity, dv);
      for (NodeIndex u : g.neighbors(v)) {
        if (dist_[u] == kUnvisited) {
          dist_[u] = dv + 1;
          queue_.push_back(u);
        }
      }
    }
    r.reached = queue_.size();
    for (NodeIndex v : queue_) dist_[v] = kUnvisited;
    return r;
  }

 private:
  std::vector<std::uint32_t> dist_;
  std::vector<NodeIndex> queue_;
};

}  // namespace

std::vector<NodeIndex> Components::main_nodes() const {
  std::vector<NodeIndex> out;
  if (labels.empty()) return out;
  out.reserve(census.main_component_size);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == main_label) out.push_back(static_cast<NodeIndex>(i));
  }
  return out;
}

DegreeReport degree_distributions(const InteractionGraph& g, std::optional<std::uint64_t> main_component_size) {
  DegreeReport r;
  const std::size_t n = g.node_count();
  r.directed_available = n == 0 || g.transaction_count() > 0;
  std::uint64_t zero_in = 0;
  std::uint64_t zero_out = 0;
  for (NodeIndex v = 0; v < n; ++v) {
    const std::uint64_t d = g.degree(v);
    ++r.total_degree[d];
    r.max_degree = std::max(r.max_degree, d);
    if (r.directed_available) {
      ++r.in_degree[g.in_tx(v)];
      ++r.out_degree[g.out_tx(v)];
      zero_in += g.in_tx(v) == 0;
      zero_out += g.out_tx(v) == 0;
    }
  }
  if (n > 0) {
    const double dn = static_cast<double>(n);
    if (r.directed_available) {
      r.zero_in_fraction = static_cast<double>(zero_in) / dn;
      r.zero_out_fraction = static_cast<double>(zero_out) / dn;
    }
    r.max_degree_fraction_of_nodes = static_cast<double>(r.max_degree) / dn;
    if (main_component_size && *main_component_size > 0) {
      r.max_degree_fraction_of_main_component =
          std::min(1.0, static_cast<double>(r.max_degree) / static_cast<double>(*main_component_size));
    }
  }
  return r;
}

Components connected_components(const InteractionGraph& g) {
  const std::size_t n = g.node_count();
  Components c;
  c.labels.assign(n, kUnvisited);
  std::vector<std::uint64_t> sizes_by_label;
  std::vector<NodeIndex> queue;
  queue.reserve(n);
  for (NodeIndex s = 0; s < n; ++s) {
    if (c.labels[s] != kUnvisited) continue;
    const auto label = static_cast<std::uint32_t>(sizes_by_label.size());
    queue.clear();
    queue.push_back(s);
    c.labels[s] = label;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeIndex u : g.neighbors(queue[head])) {
        if (c.labels[u] == kUnvisited) {
          c.labels[u] = label;
          queue.push_back(u);
        }
      }
    }
    sizes_by_label.push_back(queue.size());
  }

  c.census.count = sizes_by_label.size();
  if (!sizes_by_label.empty()) {
    auto it = std::max_element(sizes_by_label.begin(), sizes_by_label.end());
    c.main_label = static_cast<std::uint32_t>(it - sizes_by_label.begin());
    c.census.main_component_size = *it;
    c.census.main_component_fraction = static_cast<double>(*it) / static_cast<double>(n);
  }
  c.census.sizes = std::move(sizes_by_label);
  std::sort(c.census.sizes.begin(), c.census.sizes.end(), std::greater<>());
  return c;
}

double local_clustering(const InteractionGraph& g, NodeIndex node) {
  if (node >= g.node_count()) throw LookupError("node " + std::to_string(node) + " is not in the graph");
  ClusteringScratch scratch(g.node_count());
  return scratch.coefficient(g, node);
}

double average_clustering(const InteractionGraph& g, std::span<const NodeIndex> nodes, unsigned workers) {
  if (nodes.empty()) throw UndefinedMetric("average clustering of an empty node set");
  for (NodeIndex v : nodes) {
    if (v >= g.node_count()) throw LookupError("node " + std::to_string(v) + " is not in the graph");
  }
  auto coeffs = local_coefficients(g, nodes, workers);
  return ordered_mean(coeffs);
}

double average_clustering(const InteractionGraph& g, unsigned workers) {
  std::vector<NodeIndex> all(g.node_count());
  std::iota(all.begin(), all.end(), NodeIndex{0});
  return average_clustering(g, all, workers);
}

PathStats path_stats(const InteractionGraph& g, std::span<const NodeIndex> component_nodes,
                     const PathOptions& options) {
  const std::uint64_t n = component_nodes.size();
  if (n < 2) throw UndefinedMetric("shortest path length needs a component with at least two nodes");

  std::vector<NodeIndex> sources(component_nodes.begin(), component_nodes.end());
  PathStats stats;
  if (options.sample_sources && *options.sample_sources < n) {
    // Partial Fisher-Yates: the first k entries become a uniform sample.
    std::mt19937_64 rng(options.sample_seed);
    const std::uint64_t k = std::max<std::uint64_t>(1, *options.sample_sources);
    for (std::uint64_t i = 0; i < k; ++i) {
      std::swap(sources[i], sources[i + uniform_below(rng, n - i)]);
    }
    sources.resize(k);
    stats.sampled = true;
  }

  const unsigned w = std::max(1u, options.workers);
  std::vector<BfsScratch> scratch;
  scratch.reserve(w);
  for (unsigned i = 0; i < w; ++i) scratch.emplace_back(g.node_count());
  std::vector<BfsResult> results(sources.size());
  parallel_for(
      sources.size(), w, [&](unsigned worker, std::size_t i) { results[i] = scratch[worker].run(g, sources[i]); }, 8);

  std::uint64_t total = 0;
  for (const BfsResult& r : results) {
    if (r.reached != n) throw std::invalid_argument("node set is not exactly one connected component");
    total += r.distance_sum;
    stats.diameter = std::max(stats.diameter, r.eccentricity);
  }
  stats.sources = sources.size();
  stats.aspl = static_cast<double>(total) / (static_cast<double>(sources.size()) * static_cast<double>(n - 1));
  return stats;
}

double aspl(const InteractionGraph& g, std::span<const NodeIndex> component_nodes, const PathOptions& options) {
  return path_stats(g, component_nodes, options).aspl;
}

bool same_metrics(const MetricsReport& a, const MetricsReport& b) {
  return a.node_count == b.node_count && a.edge_count == b.edge_count && a.avg_degree == b.avg_degree &&
         a.degrees == b.degrees && a.components == b.components && a.main_component_edges == b.main_component_edges &&
         a.main_component_avg_degree == b.main_component_avg_degree && a.graph_acc == b.graph_acc &&
         a.main_component_acc == b.main_component_acc && a.main_component_aspl == b.main_component_aspl &&
         a.main_component_diameter == b.main_component_diameter && a.aspl_sampled == b.aspl_sampled &&
         a.aspl_sources == b.aspl_sources && a.aspl_sample_seed == b.aspl_sample_seed;
}

MetricsReport analyze(const InteractionGraph& g, const AnalyzeOptions& options) {
  MetricsReport r;
  Stopwatch clock;
  r.node_count = g.node_count();
  r.edge_count = g.edge_count();
  r.avg_degree = r.node_count == 0 ? 0.0 : 2.0 * static_cast<double>(r.edge_count) / static_cast<double>(r.node_count);

  Components comps = connected_components(g);
  r.components = comps.census;
  r.wall_time_ms["components"] = clock.lap_ms();

  r.degrees = degree_distributions(g, comps.census.main_component_size);
  r.wall_time_ms["degrees"] = clock.lap_ms();

  if (r.node_count == 0) return r;

  const std::vector<NodeIndex> main = comps.main_nodes();
  std::uint64_t main_degree_sum = 0;
  for (NodeIndex v : main) main_degree_sum += g.degree(v);
  r.main_component_edges = main_degree_sum / 2;
  r.main_component_avg_degree = static_cast<double>(main_degree_sum) / static_cast<double>(main.size());

  std::vector<NodeIndex> all(g.node_count());
  std::iota(all.begin(), all.end(), NodeIndex{0});
  const std::vector<double> coeffs = local_coefficients(g, all, options.workers);
  r.graph_acc = ordered_mean(coeffs);
  double main_sum = 0.0;
  for (NodeIndex v : main) main_sum += coeffs[v];
  r.main_component_acc = main_sum / static_cast<double>(main.size());
  r.wall_time_ms["clustering"] = clock.lap_ms();

  if (main.size() >= 2) {
    PathStats ps = path_stats(g, main, {options.workers, options.sample_sources, options.sample_seed});
    r.main_component_aspl = ps.aspl;
    r.aspl_sampled = ps.sampled;
    r.aspl_sources = ps.sources;
    if (ps.sampled) r.aspl_sample_seed = options.sample_seed;
    else r.main_component_diameter = ps.diameter;
  }
  r.wall_time_ms["aspl"] = clock.lap_ms();
  return r;
}

}  // namespace ledgernet::metrics
