#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ledgernet/graph.hpp"

namespace ledgernet::metrics {

/// degree -> number of nodes with that degree
using Histogram = std::map<std::uint64_t, std::uint64_t>;

struct DegreeReport {
  // In/out count transactions received/sent; they are only meaningful when
  // the graph was built from transactions (or had its counters restored).
  bool directed_available = false;
  Histogram in_degree;
  Histogram out_degree;
  Histogram total_degree;  // undirected simple degree
  std::optional<double> zero_in_fraction;
  std::optional<double> zero_out_fraction;
  std::uint64_t max_degree = 0;
  std::optional<double> max_degree_fraction_of_nodes;
  std::optional<double> max_degree_fraction_of_main_component;

  friend bool operator==(const DegreeReport&, const DegreeReport&) = default;
};

struct ComponentCensus {
  std::uint64_t count = 0;
  std::vector<std::uint64_t> sizes;  // descending
  std::uint64_t main_component_size = 0;
  double main_component_fraction = 0.0;

  friend bool operator==(const ComponentCensus&, const ComponentCensus&) = default;
};

struct Components {
  ComponentCensus census;
  /// Component label per node; labels are numbered in order of each
  /// component's lowest node index.
  std::vector<std::uint32_t> labels;
  /// Largest component; ties go to the lower label.
  std::uint32_t main_label = 0;

  /// Nodes of the main component in index order (empty for an empty graph).
  std::vector<NodeIndex> main_nodes() const;
};

DegreeReport degree_distributions(const InteractionGraph& graph,
                                  std::optional<std::uint64_t> main_component_size = std::nullopt);

Components connected_components(const InteractionGraph& graph);

/// Fraction of linked neighbour pairs; 0 for degree < 2. LookupError for an
/// unknown node.
double local_clustering(const InteractionGraph& graph, NodeIndex node);

/// Mean local clustering over `nodes`, summed in the given order.
/// UndefinedMetric when `nodes` is empty.
double average_clustering(const InteractionGraph& graph, std::span<const NodeIndex> nodes, unsigned workers = 1);
double average_clustering(const InteractionGraph& graph, unsigned workers = 1);

struct PathOptions {
  unsigned workers = 1;
  /// Estimate from this many BFS sources instead of all of them.
  std::optional<std::uint64_t> sample_sources;
  std::uint64_t sample_seed = 0;
};

struct PathStats {
  double aspl = 0.0;
  /// Exact mode only; in sampled mode it is the largest eccentricity seen.
  std::uint64_t diameter = 0;
  std::uint64_t sources = 0;
  bool sampled = false;
};

/// Average hop distance over all pairs of `component_nodes`, one BFS per
/// source. Edges are unweighted. UndefinedMetric for fewer than two nodes;
/// std::invalid_argument if the nodes are not exactly one connected
/// component.
PathStats path_stats(const InteractionGraph& graph, std::span<const NodeIndex> component_nodes,
                     const PathOptions& options = {});
double aspl(const InteractionGraph& graph, std::span<const NodeIndex> component_nodes, const PathOptions& options = {});

struct AnalyzeOptions {
  unsigned workers = 1;
  std::optional<std::uint64_t> sample_sources;
  std::uint64_t sample_seed = 0;
};

struct MetricsReport {
  std::uint64_t node_count = 0;
  std::uint64_t edge_count = 0;
  double avg_degree = 0.0;
  DegreeReport degrees;
  ComponentCensus components;
  std::uint64_t main_component_edges = 0;
  double main_component_avg_degree = 0.0;
  std::optional<double> graph_acc;
  std::optional<double> main_component_acc;
  std::optional<double> main_component_aspl;
  std::optional<std::uint64_t> main_component_diameter;
  bool aspl_sampled = false;
  std::uint64_t aspl_sources = 0;
  std::uint64_t aspl_sample_seed = 0;
  /// Wall time per phase in milliseconds. Not part of same_metrics().
  std::map<std::string, double> wall_time_ms;
};

/// Field-by-field equality of everything except wall times.
bool same_metrics(const MetricsReport& a, const MetricsReport& b);

/// Every metric for one graph. Clustering and BFS sources are spread over
/// `workers`; results do not depend on the worker count.
MetricsReport analyze(const InteractionGraph& graph, const AnalyzeOptions& options = {});

}  // namespace ledgernet::metrics
