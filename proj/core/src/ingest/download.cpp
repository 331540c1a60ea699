#include "ledgernet/ingest/download.hpp"

#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "ledgernet/errors.hpp"
#include "ledgernet/ingest/chunk_file.hpp"

namespace ledgernet::ingest {

namespace fs = std::filesystem;

namespace {

void remove_stale_temp_files(const fs::path& dir) {
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with(".chunk_") && name.ends_with(".tmp")) {
      std::error_code ignored;
      fs::remove(entry.path(), ignored);
    }
  }
}

struct ChunkStats {
  std::uint64_t blocks = 0;
  std::uint64_t transactions = 0;
  std::uint64_t retries = 0;
};

ChunkStats write_chunk(BlockProvider& provider, const BlockRange& heights, const fs::path& tmp,
                       const RetryContext& ctx) {
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + tmp.string());
  ChunkStats stats;
  for (std::uint64_t h = heights.first;; ++h) {
    if (ctx.stop.stop_requested()) throw Interrupted();
    FetchResult r = fetch_block_transactions(provider, h, ctx);
    stats.retries += r.attempts - 1;
    for (const Transaction& tx : r.transactions) {
      out << format_chunk_line(tx) << '\n';
      ++stats.transactions;
    }
    ++stats.blocks;
    if (h == heights.last) break;
  }
  out.flush();
  if (!out) throw IoError("write failed: " + tmp.string());
  return stats;
}

}  // namespace

DownloadSummary run_download(std::vector<DownloadTask> tasks, BlockProvider& provider, Checkpoint& checkpoint,
                             const DownloadOptions& options) {
  if (options.worker_count == 0) throw UsageError("worker count must be at least 1");
  if (provider.chain() != checkpoint.chain) throw CheckpointError("provider and checkpoint disagree on the chain");

  DownloadSummary summary;
  if (tasks.empty()) return summary;

  std::error_code ec;
  fs::create_directories(options.chunk_dir, ec);
  if (ec) throw IoError("cannot create " + options.chunk_dir.string() + ": " + ec.message());
  remove_stale_temp_files(options.chunk_dir);

  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr first_error;

  // Workers give up in-flight chunks when either a peer failed or the caller
  // asked for a hard stop.
  std::stop_source abort;
  std::optional<std::stop_callback<std::function<void()>>> forward_abort;
  if (options.abort.stop_possible()) {
    forward_abort.emplace(options.abort, std::function<void()>([&abort] { abort.request_stop(); }));
  }

  auto worker = [&] {
    for (;;) {
      DownloadTask* task = nullptr;
      {
        std::lock_guard lock(mu);
        if (next >= tasks.size()) return;
        if (abort.stop_requested() || options.stop.stop_requested()) {
          if (!first_error) summary.interrupted = true;
          return;
        }
        task = &tasks[next++];
        task->state = TaskState::in_flight;
        ++task->attempt_count;
      }

      const fs::path final_path = options.chunk_dir / chunk_file_name(task->heights);
      const fs::path tmp_path = options.chunk_dir / ("." + chunk_file_name(task->heights) + ".tmp");
      RetryContext ctx{options.retry, options.limiter, abort.get_token(), options.sleep, task->heights.first};

      try {
        ChunkStats stats = write_chunk(provider, task->heights, tmp_path, ctx);

        std::lock_guard lock(mu);
        std::error_code rename_ec;
        fs::rename(tmp_path, final_path, rename_ec);
        if (rename_ec) throw IoError("cannot rename into " + final_path.string() + ": " + rename_ec.message());
        checkpoint.done.insert(task->heights.first);
        try {
          save_checkpoint(checkpoint, options.checkpoint_path);
        } catch (...) {
          // Keep the in-memory checkpoint equal to the one on disk.
          checkpoint.done.erase(task->heights.first);
          throw;
        }
        task->state = TaskState::done;
        summary.blocks_fetched += stats.blocks;
        summary.transactions_written += stats.transactions;
        summary.retries += stats.retries;
        ++summary.chunks_completed;
        if (options.on_chunk_done) options.on_chunk_done(*task);
      } catch (const Interrupted&) {
        std::error_code ignored;
        fs::remove(tmp_path, ignored);
        std::lock_guard lock(mu);
        task->state = TaskState::pending;
        if (!first_error) summary.interrupted = true;
        return;
      } catch (...) {
        std::error_code ignored;
        fs::remove(tmp_path, ignored);
        std::lock_guard lock(mu);
        task->state = TaskState::pending;
        if (!first_error) first_error = std::current_exception();
        abort.request_stop();
        return;
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    unsigned n = static_cast<unsigned>(std::min<std::size_t>(options.worker_count, tasks.size()));
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }

  if (first_error) std::rethrow_exception(first_error);
  return summary;
}

}  // namespace ledgernet::ingest
