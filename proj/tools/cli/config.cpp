#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "ledgernet/errors.hpp"
#include "ledgernet/parallel.hpp"

namespace ledgernet::cli {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "chain",      "endpoint",    "fixture",   "api_key",        "rate_limit",     "retry_cap",
      "backoff_ms", "from_block",  "to_block",  "from_time",      "to_time",        "chunk_size",
      "slack",      "workers",     "output_dir", "seed",          "samples",        "acc_threshold",
      "aspl_threshold", "sample_sources", "format"};
  return keys;
}

namespace {

bool known_key(const std::string& key) {
  const auto& keys = config_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("invalid value for " + key + ": '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw UsageError("invalid value for " + key + ": '" + text + "'");
  }
  return v;
}

}  // namespace

Layer load_config_file(const std::filesystem::path& path) {
  Json doc = parse_json(read_file(path));
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object: " + path.string());
  Layer layer;
  for (const auto& [key, value] : doc.items()) {
    if (!known_key(key)) throw UsageError("unknown config key '" + key + "' in " + path.string());
    layer[key] = value.is_string() ? value.get<std::string>() : value.dump();
  }
  return layer;
}

Layer environment_layer() {
  Layer layer;
  for (const auto& key : config_keys()) {
    std::string name = "LEDGERNET_" + key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    if (const char* v = std::getenv(name.c_str()); v != nullptr && *v != '\0') layer[key] = v;
  }
  return layer;
}

std::int64_t parse_time(const std::string& text) {
  if (!text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return parse_number<std::int64_t>("time", text);
  }
  std::tm tm{};
  std::istringstream in(text);
  if (text.size() == 10) {
    in >> std::get_time(&tm, "%Y-%m-%d");
  } else {
    in >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%S");
    if (!in.fail() && in.peek() == 'Z') in.get();
  }
  if (in.fail() || in.peek() != std::char_traits<char>::eof()) {
    throw UsageError("invalid time '" + text + "' (unix seconds or YYYY-MM-DD[THH:MM:SS[Z]])");
  }
  return static_cast<std::int64_t>(timegm(&tm));
}

std::string format_utc(std::int64_t unix_seconds) {
  std::time_t t = static_cast<std::time_t>(unix_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunConfig resolve_config(const std::vector<Layer>& layers) {
  Layer merged;
  for (const auto& layer : layers) {
    for (const auto& [k, v] : layer) merged[k] = v;
  }

  RunConfig c;
  c.workers = default_worker_count();
  std::optional<std::uint64_t> from_block;
  std::optional<std::uint64_t> to_block;
  std::optional<std::int64_t> from_time;
  std::optional<std::int64_t> to_time;

  for (const auto& [key, v] : merged) {
    if (key == "chain") {
      auto chain = parse_chain(v);
      if (!chain) throw UsageError("unknown chain '" + v + "' (bitcoin or ethereum)");
      c.chain = *chain;
    } else if (key == "endpoint") {
      c.provider.endpoint = v;
    } else if (key == "fixture") {
      c.provider.fixture_dir = v;
    } else if (key == "api_key") {
      c.provider.api_key = v;
    } else if (key == "rate_limit") {
      c.provider.rate_limit = parse_real(key, v);
    } else if (key == "retry_cap") {
      auto cap = parse_number<unsigned>(key, v);
      if (cap == 0) c.provider.retry_cap.reset();
      else c.provider.retry_cap = cap;
    } else if (key == "backoff_ms") {
      c.provider.backoff_ms = parse_number<std::uint64_t>(key, v);
    } else if (key == "from_block") {
      from_block = parse_number<std::uint64_t>(key, v);
    } else if (key == "to_block") {
      to_block = parse_number<std::uint64_t>(key, v);
    } else if (key == "from_time") {
      from_time = parse_time(v);
    } else if (key == "to_time") {
      to_time = parse_time(v);
    } else if (key == "chunk_size") {
      c.chunk_size = parse_number<std::uint64_t>(key, v);
      if (c.chunk_size == 0) throw UsageError("chunk_size must be at least 1");
    } else if (key == "slack") {
      c.resolve_slack = parse_number<std::uint64_t>(key, v);
    } else if (key == "workers") {
      c.workers = parse_number<unsigned>(key, v);
      if (c.workers == 0) throw UsageError("workers must be at least 1");
    } else if (key == "output_dir") {
      c.output_dir = v;
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, v);
    } else if (key == "samples") {
      c.samples = parse_number<unsigned>(key, v);
      if (c.samples == 0) throw UsageError("samples must be at least 1");
    } else if (key == "acc_threshold") {
      c.thresholds.acc = parse_real(key, v);
    } else if (key == "aspl_threshold") {
      c.thresholds.aspl = parse_real(key, v);
    } else if (key == "sample_sources") {
      auto k = parse_number<std::uint64_t>(key, v);
      if (k == 0) c.sample_sources.reset();
      else c.sample_sources = k;
    } else if (key == "format") {
      if (v == "both") {
        c.write_json = c.write_pajek = true;
      } else if (auto f = parse_graph_format(v)) {
        c.write_json = *f == GraphFormat::json;
        c.write_pajek = *f == GraphFormat::pajek;
      } else {
        throw UsageError("unknown format '" + v + "' (json, pajek or both)");
      }
    } else {
      throw UsageError("unknown setting '" + key + "'");
    }
  }

  if (from_block || to_block) {
    if (!from_block || !to_block) throw UsageError("--from-block and --to-block go together");
    if (*from_block > *to_block) throw UsageError("--from-block is after --to-block");
    c.blocks = ingest::BlockRange{*from_block, *to_block};
  }
  if (from_time || to_time) {
    if (!from_time || !to_time) throw UsageError("--from-time and --to-time go together");
    if (*from_time > *to_time) throw UsageError("--from-time is after --to-time");
    c.interval = ingest::TimeInterval{*from_time, *to_time};
  }
  if (c.blocks && c.interval) throw UsageError("give either a block range or a time interval, not both");
  return c;
}

Json to_json(const RunConfig& c) {
  Json provider = {
      {"endpoint", c.provider.endpoint ? Json(*c.provider.endpoint) : Json(nullptr)},
      {"fixture", c.provider.fixture_dir ? Json(c.provider.fixture_dir->generic_string()) : Json(nullptr)},
      {"api_key", c.provider.api_key.empty() ? Json(nullptr) : Json("<redacted>")},
      {"rate_limit", c.provider.rate_limit ? Json(*c.provider.rate_limit) : Json(nullptr)},
      {"retry_cap", c.provider.retry_cap ? Json(*c.provider.retry_cap) : Json(nullptr)},
      {"backoff_ms", c.provider.backoff_ms},
  };
  Json out = {
      {"chain", chain_name(c.chain)},
      {"provider", std::move(provider)},
      {"chunk_size", c.chunk_size},
      {"slack", c.resolve_slack},
      {"workers", c.workers},
      {"output_dir", c.output_dir.generic_string()},
      {"seed", c.seed},
      {"samples", c.samples},
      {"acc_threshold", c.thresholds.acc},
      {"aspl_threshold", c.thresholds.aspl},
      {"sample_sources", c.sample_sources ? Json(*c.sample_sources) : Json(nullptr)},
      {"format", c.write_json && c.write_pajek ? "both" : (c.write_json ? "json" : "pajek")},
  };
  if (c.blocks) out["blocks"] = {{"first", c.blocks->first}, {"last", c.blocks->last}};
  if (c.interval) out["interval"] = {{"start", c.interval->start}, {"end", c.interval->end}};
  return out;
}

}  // namespace ledgernet::cli
