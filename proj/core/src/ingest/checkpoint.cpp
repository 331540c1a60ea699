#include "ledgernet/ingest/checkpoint.hpp"

#include <string>

#include "ledgernet/errors.hpp"
#include "ledgernet/json_io.hpp"

namespace ledgernet::ingest {

std::vector<BlockRange> partition_range(const BlockRange& range, std::uint64_t chunk_size) {
  if (chunk_size == 0) throw CheckpointError("chunk size must be positive");
  if (range.first > range.last) throw CheckpointError("block range is empty");
  std::vector<BlockRange> chunks;
  for (std::uint64_t lo = range.first;; lo += chunk_size) {
    std::uint64_t hi = range.last - lo < chunk_size ? range.last : lo + chunk_size - 1;
    chunks.push_back({lo, hi});
    if (hi == range.last) break;
  }
  return chunks;
}

std::vector<BlockRange> Checkpoint::planned_chunks() const { return partition_range(range, chunk_size); }

bool Checkpoint::complete() const { return done.size() == planned_chunks().size(); }

namespace {

void validate(const Checkpoint& cp) {
  std::set<std::uint64_t> planned;
  for (const auto& c : cp.planned_chunks()) planned.insert(c.first);
  for (auto d : cp.done) {
    if (!planned.contains(d)) throw CheckpointError("checkpoint lists unknown chunk " + std::to_string(d));
  }
}

}  // namespace

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = parse_json(read_file(path));
  } catch (const ParseError& e) {
    throw CheckpointError(path.string() + " is corrupt: " + e.what());
  }
  Checkpoint cp;
  try {
    if (doc.at("version").get<int>() != Checkpoint::kFormatVersion) {
      throw CheckpointError("unsupported checkpoint version in " + path.string());
    }
    auto chain = parse_chain(doc.at("chain").get<std::string>());
    if (!chain) throw CheckpointError("unknown chain in " + path.string());
    cp.chain = *chain;
    cp.range = {doc.at("first").get<std::uint64_t>(), doc.at("last").get<std::uint64_t>()};
    cp.chunk_size = doc.at("chunk_size").get<std::uint64_t>();
    for (const Json& d : doc.at("done")) cp.done.insert(d.get<std::uint64_t>());
  } catch (const Json::exception& e) {
    throw CheckpointError(path.string() + " is malformed: " + e.what());
  }
  validate(cp);
  return cp;
}

std::optional<Checkpoint> try_load_checkpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  return load_checkpoint(path);
}

void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path) {
  std::string out = "{\"version\":" + std::to_string(Checkpoint::kFormatVersion) +
                    ",\"chain\":" + quote_json(chain_name(cp.chain)) + ",\"first\":" + std::to_string(cp.range.first) +
                    ",\"last\":" + std::to_string(cp.range.last) + ",\"chunk_size\":" + std::to_string(cp.chunk_size) +
                    ",\"done\":[";
  bool first = true;
  for (auto d : cp.done) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(d);
  }
  out += "]}\n";
  write_file_atomic(path, out);
}

std::vector<DownloadTask> plan_tasks(Chain chain, const BlockRange& range, std::uint64_t chunk_size,
                                     const Checkpoint* checkpoint) {
  if (checkpoint != nullptr) {
    if (checkpoint->chain != chain || checkpoint->range != range || checkpoint->chunk_size != chunk_size) {
      throw CheckpointError("checkpoint belongs to a different job (" + std::string(chain_name(checkpoint->chain)) +
                            " " + std::to_string(checkpoint->range.first) + ".." +
                            std::to_string(checkpoint->range.last) + ", chunk " +
                            std::to_string(checkpoint->chunk_size) + ")");
    }
    validate(*checkpoint);
  }
  std::vector<DownloadTask> tasks;
  for (const auto& chunk : partition_range(range, chunk_size)) {
    if (checkpoint != nullptr && checkpoint->done.contains(chunk.first)) continue;
    tasks.push_back(DownloadTask{chunk});
  }
  return tasks;
}

}  // namespace ledgernet::ingest
