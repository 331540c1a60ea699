#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "ledgernet/address.hpp"
#include "ledgernet/baseline/small_world.hpp"
#include "ledgernet/graph_io.hpp"
#include "ledgernet/ingest/block_range.hpp"
#include "ledgernet/json_io.hpp"

namespace ledgernet::cli {

/// Raw key/value settings from one source (file, environment or flags).
using Layer = std::map<std::string, std::string>;

struct ProviderSettings {
  std::optional<std::string> endpoint;
  std::optional<std::filesystem::path> fixture_dir;
  std::string api_key;
  /// Requests per second across all workers. Unset: 10 for network
  /// providers, unlimited for fixtures.
  std::optional<double> rate_limit;
  std::optional<unsigned> retry_cap;
  std::uint64_t backoff_ms = 250;
};

struct RunConfig {
  Chain chain = Chain::ethereum;
  ProviderSettings provider;
  std::optional<ingest::TimeInterval> interval;
  std::optional<ingest::BlockRange> blocks;
  std::uint64_t chunk_size = 100;
  std::uint64_t resolve_slack = 128;
  unsigned workers = 1;
  std::filesystem::path output_dir = "ledgernet-data";
  std::uint64_t seed = 0;
  unsigned samples = 1;
  baseline::Thresholds thresholds;
  std::optional<std::uint64_t> sample_sources;
  bool write_json = true;
  bool write_pajek = true;
};

/// Every key a layer may set. Environment variables are LEDGERNET_<KEY> in
/// upper case; config files are flat JSON objects with the same keys.
const std::vector<std::string>& config_keys();

/// Reads a flat JSON object. Throws UsageError on unknown keys.
Layer load_config_file(const std::filesystem::path& path);
/// LEDGERNET_* variables from the process environment.
Layer environment_layer();

/// Applies layers in order, later ones winning. Throws UsageError on bad
/// values or when both a time interval and a block range end up set.
RunConfig resolve_config(const std::vector<Layer>& layers);

/// Parses unix seconds or an ISO-8601 UTC date/time
/// (YYYY-MM-DD, YYYY-MM-DDTHH:MM:SS[Z]).
std::int64_t parse_time(const std::string& text);
std::string format_utc(std::int64_t unix_seconds);

/// Effective configuration for provenance. The API key is redacted.
Json to_json(const RunConfig& config);

}  // namespace ledgernet::cli
