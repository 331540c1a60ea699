#pragma once

#include "ledgernet/json_io.hpp"
#include "ledgernet/metrics/metrics.hpp"

namespace ledgernet::metrics {

/// Histograms are written as sorted [degree, count] pairs; undefined metrics
/// as null. Wall times go under "wall_time_ms" unless `with_timing` is false.
Json to_json(const MetricsReport& report, bool with_timing = true);

/// Inverse of to_json. Throws ParseError.
MetricsReport metrics_from_json(const Json& doc);

}  // namespace ledgernet::metrics
