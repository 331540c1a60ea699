#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stop_token>
#include <vector>

#include "ledgernet/ingest/checkpoint.hpp"
#include "ledgernet/ingest/provider.hpp"
#include "ledgernet/ingest/retry.hpp"

namespace ledgernet::ingest {

struct DownloadOptions {
  unsigned worker_count = 1;
  std::filesystem::path chunk_dir;
  std::filesystem::path checkpoint_path;
  RetryPolicy retry;
  RateLimiter* limiter = nullptr;
  /// Graceful shutdown: in-flight chunks finish, no new chunk starts.
  std::stop_token stop;
  /// Hard shutdown: in-flight chunks are abandoned at their next wait
  /// (backoff, rate limit) or block boundary; their temp files are removed.
  std::stop_token abort;
  SleepFn sleep = interruptible_sleep;
  /// Called by the coordinator after a chunk is durable (file renamed and
  /// checkpoint saved). Runs under the coordinator lock.
  std::function<void(const DownloadTask&)> on_chunk_done;
};

struct DownloadSummary {
  std::uint64_t blocks_fetched = 0;
  std::uint64_t transactions_written = 0;
  std::uint64_t chunks_completed = 0;
  std::uint64_t retries = 0;
  bool interrupted = false;

  friend bool operator==(const DownloadSummary&, const DownloadSummary&) = default;
};

/// Downloads `tasks` with a pool of workers.
///
/// Each worker takes the next pending chunk, fetches its blocks, and writes
/// them to a private temp file. The coordinator then renames the temp file
/// to `chunk_<first>_<last>.ndjson` and saves `checkpoint` with the chunk
/// marked done. Chunk contents depend only on the blocks, never on the
/// worker count. On error or stop the checkpoint lists exactly the chunks
/// already on disk.
///
/// A non-retryable provider error or I/O error stops handing out work and is
/// rethrown once all workers have returned.
DownloadSummary run_download(std::vector<DownloadTask> tasks, BlockProvider& provider, Checkpoint& checkpoint,
                             const DownloadOptions& options);

}  // namespace ledgernet::ingest
