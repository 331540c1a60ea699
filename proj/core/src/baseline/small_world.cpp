#include "ledgernet/baseline/small_world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ledgernet/errors.hpp"
#include "ledgernet/metrics/report_json.hpp"

namespace ledgernet::baseline {

namespace {

SampleStats stats_of(const std::vector<double>& values) {
  SampleStats s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

double require(const std::optional<double>& v, const char* what) {
  if (!v) throw UndefinedMetric(std::string(what) + " is undefined");
  return *v;
}

// JSON has no infinities or NaN.
Json ratio_json(double r) {
  if (std::isnan(r)) return nullptr;
  if (std::isinf(r)) return r > 0 ? "inf" : "-inf";
  return r;
}

}  // namespace

SmallWorldVerdict small_world_verdict(const metrics::MetricsReport& subject,
                                      std::span<const metrics::MetricsReport> baselines,
                                      const Thresholds& thresholds) {
  if (baselines.empty()) throw UndefinedMetric("no baseline sample");
  SmallWorldVerdict v;
  v.thresholds = thresholds;
  v.samples = static_cast<unsigned>(baselines.size());
  v.subject_acc = require(subject.main_component_acc, "subject main-component ACC");
  v.subject_aspl = require(subject.main_component_aspl, "subject main-component ASPL");

  std::vector<double> accs;
  std::vector<double> aspls;
  for (const auto& b : baselines) {
    accs.push_back(require(b.main_component_acc, "baseline main-component ACC"));
    aspls.push_back(require(b.main_component_aspl, "baseline main-component ASPL"));
  }
  v.baseline_acc = stats_of(accs);
  v.baseline_aspl = stats_of(aspls);

  if (v.baseline_acc.mean > 0.0) {
    v.acc_ratio = v.subject_acc / v.baseline_acc.mean;
  } else {
    v.acc_ratio = v.subject_acc > 0.0 ? std::numeric_limits<double>::infinity()
                                      : std::numeric_limits<double>::quiet_NaN();
  }
  v.aspl_ratio = v.subject_aspl / v.baseline_aspl.mean;
  // NaN compares false, so a graph without any triangles never qualifies.
  v.is_small_world = v.acc_ratio >= thresholds.acc && v.aspl_ratio <= thresholds.aspl;
  return v;
}

ComparisonReport compare(const InteractionGraph& subject, const CompareOptions& options) {
  return compare(subject, metrics::analyze(subject, {options.workers, options.sample_sources, options.seed}), options);
}

ComparisonReport compare(const InteractionGraph& subject, metrics::MetricsReport subject_report,
                         const CompareOptions& options) {
  ComparisonReport report;
  report.subject = std::move(subject_report);
  report.spec = ErSpec{subject.node_count(), subject.edge_count(), options.seed, options.samples};
  validate(report.spec);

  std::vector<metrics::MetricsReport> sample_metrics;
  for (unsigned i = 0; i < options.samples; ++i) {
    ErSpec one = report.spec;
    one.seed = sample_seed(options.seed, i);
    one.samples = 1;
    InteractionGraph g = generate_er_gnm(one, subject.chain());
    auto m = metrics::analyze(g, {options.workers, options.sample_sources, one.seed});
    report.baselines.push_back({one.seed, m});
    sample_metrics.push_back(std::move(m));
  }
  report.verdict = small_world_verdict(report.subject, sample_metrics, options.thresholds);
  return report;
}

Json to_json(const SmallWorldVerdict& v) {
  return Json{
      {"subject_main_component_acc", v.subject_acc},
      {"subject_main_component_aspl", v.subject_aspl},
      {"acc_ratio", ratio_json(v.acc_ratio)},
      {"aspl_ratio", ratio_json(v.aspl_ratio)},
      {"acc_threshold", v.thresholds.acc},
      {"aspl_threshold", v.thresholds.aspl},
      {"is_small_world", v.is_small_world},
      {"samples", v.samples},
      {"baseline_acc", {{"mean", v.baseline_acc.mean}, {"min", v.baseline_acc.min}, {"max", v.baseline_acc.max}}},
      {"baseline_aspl", {{"mean", v.baseline_aspl.mean}, {"min", v.baseline_aspl.min}, {"max", v.baseline_aspl.max}}},
  };
}

Json to_json(const ComparisonReport& r, bool with_timing) {
  Json samples = Json::array();
  for (const auto& s : r.baselines) {
    samples.push_back({{"seed", s.seed}, {"metrics", metrics::to_json(s.metrics, with_timing)}});
  }
  return Json{
      {"subject", metrics::to_json(r.subject, with_timing)},
      {"baseline",
       {{"model", "erdos_renyi_gnm"},
        {"spec", {{"n", r.spec.n}, {"m", r.spec.m}, {"seed", r.spec.seed}, {"samples", r.spec.samples}}},
        {"samples", std::move(samples)}}},
      {"verdict", to_json(r.verdict)},
  };
}

}  // namespace ledgernet::baseline
