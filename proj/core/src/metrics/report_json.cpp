#include "ledgernet/metrics/report_json.hpp"

#include "ledgernet/errors.hpp"

namespace ledgernet::metrics {

namespace {

Json histogram_json(const Histogram& h) {
  Json out = Json::array();
  for (const auto& [degree, count] : h) out.push_back({degree, count});
  return out;
}

Histogram histogram_from(const Json& j) {
  Histogram h;
  for (const Json& pair : j) h[pair.at(0).get<std::uint64_t>()] = pair.at(1).get<std::uint64_t>();
  return h;
}

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> opt_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

Json to_json(const MetricsReport& r, bool with_timing) {
  Json degrees = {
      {"directed_available", r.degrees.directed_available},
      {"in", histogram_json(r.degrees.in_degree)},
      {"out", histogram_json(r.degrees.out_degree)},
      {"total", histogram_json(r.degrees.total_degree)},
      {"zero_in_fraction", opt(r.degrees.zero_in_fraction)},
      {"zero_out_fraction", opt(r.degrees.zero_out_fraction)},
      {"max_degree", r.degrees.max_degree},
      {"max_degree_fraction_of_nodes", opt(r.degrees.max_degree_fraction_of_nodes)},
      {"max_degree_fraction_of_main_component", opt(r.degrees.max_degree_fraction_of_main_component)},
  };
  Json components = {
      {"count", r.components.count},
      {"sizes", r.components.sizes},
      {"main_component_size", r.components.main_component_size},
      {"main_component_fraction", r.components.main_component_fraction},
  };
  Json aspl = {
      {"value", opt(r.main_component_aspl)},
      {"mode", r.aspl_sampled ? "sampled_estimate" : "exact"},
      {"sources", r.aspl_sources},
      {"diameter", opt(r.main_component_diameter)},
  };
  if (r.aspl_sampled) aspl["sample_seed"] = r.aspl_sample_seed;

  Json out = {
      {"node_count", r.node_count},
      {"edge_count", r.edge_count},
      {"avg_degree", r.avg_degree},
      {"degrees", std::move(degrees)},
      {"components", std::move(components)},
      {"main_component_edges", r.main_component_edges},
      {"main_component_avg_degree", r.main_component_avg_degree},
      {"graph_acc", opt(r.graph_acc)},
      {"main_component_acc", opt(r.main_component_acc)},
      {"main_component_aspl", std::move(aspl)},
  };
  if (with_timing) out["wall_time_ms"] = r.wall_time_ms;
  return out;
}

MetricsReport metrics_from_json(const Json& j) {
  MetricsReport r;
  try {
    r.node_count = j.at("node_count").get<std::uint64_t>();
    r.edge_count = j.at("edge_count").get<std::uint64_t>();
    r.avg_degree = j.at("avg_degree").get<double>();

    const Json& d = j.at("degrees");
    r.degrees.directed_available = d.at("directed_available").get<bool>();
    r.degrees.in_degree = histogram_from(d.at("in"));
    r.degrees.out_degree = histogram_from(d.at("out"));
    r.degrees.total_degree = histogram_from(d.at("total"));
    r.degrees.zero_in_fraction = opt_from<double>(d, "zero_in_fraction");
    r.degrees.zero_out_fraction = opt_from<double>(d, "zero_out_fraction");
    r.degrees.max_degree = d.at("max_degree").get<std::uint64_t>();
    r.degrees.max_degree_fraction_of_nodes = opt_from<double>(d, "max_degree_fraction_of_nodes");
    r.degrees.max_degree_fraction_of_main_component = opt_from<double>(d, "max_degree_fraction_of_main_component");

    const Json& c = j.at("components");
    r.components.count = c.at("count").get<std::uint64_t>();
    r.components.sizes = c.at("sizes").get<std::vector<std::uint64_t>>();
    r.components.main_component_size = c.at("main_component_size").get<std::uint64_t>();
    r.components.main_component_fraction = c.at("main_component_fraction").get<double>();

    r.main_component_edges = j.at("main_component_edges").get<std::uint64_t>();
    r.main_component_avg_degree = j.at("main_component_avg_degree").get<double>();
    r.graph_acc = opt_from<double>(j, "graph_acc");
    r.main_component_acc = opt_from<double>(j, "main_component_acc");

    const Json& a = j.at("main_component_aspl");
    r.main_component_aspl = opt_from<double>(a, "value");
    r.aspl_sampled = a.at("mode").get<std::string>() == "sampled_estimate";
    r.aspl_sources = a.at("sources").get<std::uint64_t>();
    r.main_component_diameter = opt_from<std::uint64_t>(a, "diameter");
    if (r.aspl_sampled) r.aspl_sample_seed = a.at("sample_seed").get<std::uint64_t>();

    if (j.contains("wall_time_ms")) r.wall_time_ms = j.at("wall_time_ms").get<std::map<std::string, double>>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed metrics report: ") + e.what());
  }
  return r;
}

}  // namespace ledgernet::metrics
