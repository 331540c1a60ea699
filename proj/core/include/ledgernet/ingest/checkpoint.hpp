#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <vector>

#include "ledgernet/address.hpp"
#include "ledgernet/ingest/block_range.hpp"

namespace ledgernet::ingest {

enum class TaskState { pending, in_flight, done, failed };

struct DownloadTask {
  BlockRange heights;
  unsigned attempt_count = 0;
  TaskState state = TaskState::pending;
};

/// Durable download progress: which chunks of a planned range are on disk.
///
///   {"version":1,"chain":"ethereum","first":0,"last":99,"chunk_size":10,"done":[0,10,...]}
struct Checkpoint {
  static constexpr int kFormatVersion = 1;

  Chain chain = Chain::ethereum;
  BlockRange range;
  std::uint64_t chunk_size = 100;
  std::set<std::uint64_t> done;  // first heights of completed chunks

  /// Contiguous spans of `chunk_size` blocks starting at range.first; the
  /// last one may be short.
  std::vector<BlockRange> planned_chunks() const;
  bool complete() const;
};

std::vector<BlockRange> partition_range(const BlockRange& range, std::uint64_t chunk_size);

/// Throws IoError / CheckpointError.
Checkpoint load_checkpoint(const std::filesystem::path& path);
std::optional<Checkpoint> try_load_checkpoint(const std::filesystem::path& path);
/// Atomic: temp file + rename.
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);

/// Tasks covering `range` minus the checkpoint's completed chunks, ascending.
/// Throws CheckpointError when the checkpoint describes another job.
std::vector<DownloadTask> plan_tasks(Chain chain, const BlockRange& range, std::uint64_t chunk_size,
                                     const Checkpoint* checkpoint = nullptr);

}  // namespace ledgernet::ingest
