#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ledgernet/baseline/erdos_renyi.hpp"
#include "ledgernet/json_io.hpp"
#include "ledgernet/metrics/metrics.hpp"

namespace ledgernet::baseline {

/// A graph is small-world when its clustering is far above the random
/// baseline and its path length is not above it:
///   acc_ratio >= acc  and  aspl_ratio <= aspl
struct Thresholds {
  double acc = 10.0;
  double aspl = 1.1;
};

struct SampleStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct SmallWorldVerdict {
  double subject_acc = 0.0;
  double subject_aspl = 0.0;
  /// subject ACC / mean baseline ACC, both over the main component.
  /// +inf when the baseline has no triangles but the subject does; NaN when
  /// neither has any.
  double acc_ratio = 0.0;
  double aspl_ratio = 0.0;
  Thresholds thresholds;
  bool is_small_world = false;
  unsigned samples = 0;
  SampleStats baseline_acc;
  SampleStats baseline_aspl;
};

/// Ratios use main-component ACC and ASPL. With several baseline samples the
/// sample means are used. UndefinedMetric if any ASPL or ACC is missing.
SmallWorldVerdict small_world_verdict(const metrics::MetricsReport& subject,
                                      std::span<const metrics::MetricsReport> baselines,
                                      const Thresholds& thresholds = {});

struct CompareOptions {
  std::uint64_t seed = 0;
  unsigned samples = 1;
  unsigned workers = 1;
  Thresholds thresholds;
  std::optional<std::uint64_t> sample_sources;
};

struct BaselineSample {
  std::uint64_t seed = 0;
  metrics::MetricsReport metrics;
};

struct ComparisonReport {
  metrics::MetricsReport subject;
  ErSpec spec;
  std::vector<BaselineSample> baselines;
  SmallWorldVerdict verdict;
};

/// Analyzes `subject`, builds size-matched G(n, m) baselines
/// (n = nodes, m = edges) and classifies the subject.
ComparisonReport compare(const InteractionGraph& subject, const CompareOptions& options);

/// Same, reusing an existing analysis of the subject.
ComparisonReport compare(const InteractionGraph& subject, metrics::MetricsReport subject_report,
                         const CompareOptions& options);

Json to_json(const SmallWorldVerdict& verdict);
Json to_json(const ComparisonReport& report, bool with_timing = true);

}  // namespace ledgernet::baseline
