#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <thread>

#include "ledgernet/errors.hpp"
#include "ledgernet/ingest/block_range.hpp"
#include "ledgernet/ingest/checkpoint.hpp"
#include "ledgernet/ingest/chunk_file.hpp"
#include "ledgernet/ingest/download.hpp"
#include "ledgernet/ingest/fixture_provider.hpp"
#include "ledgernet/ingest/http_providers.hpp"
#include "ledgernet/ingest/retry.hpp"
#include "test_support.hpp"

using namespace ledgernet;
using namespace ledgernet::ingest;
using namespace testing_support;

namespace {

void no_sleep(Millis, std::stop_token) {}

RetryContext fast_ctx(std::optional<unsigned> cap = std::nullopt) {
  RetryContext ctx;
  ctx.policy.max_attempts = cap;
  ctx.sleep = no_sleep;
  return ctx;
}

/// In-memory chain with given timestamps; each block carries one transfer.
class MemoryProvider : public BlockProvider {
 public:
  explicit MemoryProvider(std::vector<std::int64_t> ts) : ts_(std::move(ts)) {}
  Chain chain() const override { return Chain::bitcoin; }
  std::uint64_t latest_height() override { return ts_.size() - 1; }
  std::int64_t block_timestamp(std::uint64_t h) override {
    ++timestamp_calls;
    return ts_.at(h);
  }
  std::vector<Transaction> block_transactions(std::uint64_t h) override {
    return {Transaction{btc("s" + std::to_string(h % 7)), btc("r" + std::to_string(h % 5)), Amount(h), h, ts_.at(h)}};
  }
  std::atomic<int> timestamp_calls{0};

 private:
  std::vector<std::int64_t> ts_;
};

/// Fails retryably `failures` times before each success (or forever).
class FlakyProvider : public MemoryProvider {
 public:
  FlakyProvider(int failures, bool retryable = true)
      : MemoryProvider(std::vector<std::int64_t>(10, 0)), failures_(failures), retryable_(retryable) {}
  std::vector<Transaction> block_transactions(std::uint64_t h) override {
    ++calls;
    if (failures_ < 0 || calls <= failures_) throw ProviderError("flaky", retryable_);
    return MemoryProvider::block_transactions(h);
  }
  int calls = 0;

 private:
  int failures_;
  bool retryable_;
};

std::vector<std::int64_t> hundreds() {
  std::vector<std::int64_t> ts;
  for (int i = 0; i < 10; ++i) ts.push_back(i * 100);
  return ts;
}

BlockRange scan_oracle(const std::vector<std::int64_t>& ts, std::int64_t start, std::int64_t end) {
  std::optional<std::uint64_t> first;
  std::optional<std::uint64_t> last;
  for (std::uint64_t h = 0; h < ts.size(); ++h) {
    if (ts[h] >= start && ts[h] <= end) {
      if (!first) first = h;
      last = h;
    }
  }
  if (!first) throw EmptyRange("oracle: empty");
  return {*first, *last};
}

}  // namespace

// --- block range ------------------------------------------------------------

TEST(Resolver, InteriorInterval) {
  MemoryProvider p(hundreds());
  EXPECT_EQ(resolve_block_range({250, 650}, p, fast_ctx()), (BlockRange{3, 6}));
}

TEST(Resolver, FullCover) {
  MemoryProvider p(hundreds());
  EXPECT_EQ(resolve_block_range({0, 900}, p, fast_ctx()), (BlockRange{0, 9}));
}

TEST(Resolver, BeyondTipIsEmpty) {
  MemoryProvider p(hundreds());
  EXPECT_THROW(resolve_block_range({950, 999}, p, fast_ctx()), EmptyRange);
  EXPECT_THROW(resolve_block_range({-50, -1}, p, fast_ctx()), EmptyRange);
  EXPECT_THROW(resolve_block_range({120, 180}, p, fast_ctx()), EmptyRange);
  EXPECT_THROW(resolve_block_range({500, 400}, p, fast_ctx()), EmptyRange);
}

TEST(Resolver, MatchesLinearScanOnMonotoneChains) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::int64_t> ts;
    std::int64_t t = static_cast<std::int64_t>(rng() % 50);
    const std::size_t n = 1 + rng() % 400;
    for (std::size_t i = 0; i < n; ++i) {
      ts.push_back(t);
      t += static_cast<std::int64_t>(rng() % 4);  // includes equal timestamps
    }
    const std::int64_t a = static_cast<std::int64_t>(rng() % (t + 60)) - 30;
    const std::int64_t b = a + static_cast<std::int64_t>(rng() % 200);
    MemoryProvider p(ts);
    std::optional<BlockRange> expected;
    try {
      expected = scan_oracle(ts, a, b);
    } catch (const EmptyRange&) {
    }
    const std::uint64_t slack = trial % 2 ? 0 : 8;
    if (expected) {
      ASSERT_EQ(resolve_block_range({a, b}, p, fast_ctx(), slack), *expected) << "trial " << trial;
    } else {
      ASSERT_THROW(resolve_block_range({a, b}, p, fast_ctx(), slack), EmptyRange) << "trial " << trial;
    }
  }
}

TEST(Resolver, UsesLogarithmicLookups) {
  std::vector<std::int64_t> ts(100000);
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<std::int64_t>(i) * 10;
  MemoryProvider p(ts);
  EXPECT_EQ(resolve_block_range({123455, 555555}, p, fast_ctx(), 0), (BlockRange{12346, 55555}));
  EXPECT_LT(p.timestamp_calls.load(), 60);
}

TEST(Resolver, SlackRecoversSlightlyUnorderedTimestamps) {
  // Block 5 is stamped before block 4, as bitcoin miners may do.
  std::vector<std::int64_t> ts{0, 100, 200, 300, 420, 380, 500, 600, 700};
  MemoryProvider p(ts);
  EXPECT_EQ(resolve_block_range({390, 650}, p, fast_ctx(), 4), (BlockRange{4, 7}));
}

// --- retry ------------------------------------------------------------------

TEST(Retry, RecoversAfterTwoFailures) {
  FlakyProvider p(2);
  auto r = fetch_block_transactions(p, 3, fast_ctx());
  EXPECT_EQ(r.attempts, 3u);
  EXPECT_EQ(r.transactions.size(), 1u);
}

TEST(Retry, CapIsEnforced) {
  FlakyProvider p(-1);
  try {
    fetch_block_transactions(p, 3, fast_ctx(5));
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.attempts(), 5u);
    EXPECT_FALSE(e.retryable());
  }
  EXPECT_EQ(p.calls, 5);
}

TEST(Retry, HealthyProviderSucceedsFirstTime) {
  FlakyProvider p(0);
  EXPECT_EQ(fetch_block_transactions(p, 1, fast_ctx()).attempts, 1u);
}

TEST(RetryProperty, EventualSuccessNeverFailsWithoutCap) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    const int failures = static_cast<int>(rng() % 40);
    FlakyProvider p(failures);
    auto r = fetch_block_transactions(p, 1, fast_ctx());
    ASSERT_EQ(r.attempts, static_cast<unsigned>(failures + 1));
  }
}

TEST(Retry, PermanentErrorsAreNotRetried) {
  FlakyProvider p(-1, false);
  EXPECT_THROW(fetch_block_transactions(p, 1, fast_ctx()), ProviderError);
  EXPECT_EQ(p.calls, 1);
}

TEST(Retry, BackoffGrowsAndIsBounded) {
  RetryPolicy policy;
  policy.jitter = 0.0;
  std::mt19937_64 rng(1);
  EXPECT_EQ(backoff_delay(policy, 1, rng), Millis(250));
  EXPECT_EQ(backoff_delay(policy, 2, rng), Millis(500));
  EXPECT_EQ(backoff_delay(policy, 3, rng), Millis(1000));
  EXPECT_EQ(backoff_delay(policy, 40, rng), Millis(30000));
  policy.jitter = 0.2;
  for (int i = 0; i < 100; ++i) {
    auto d = backoff_delay(policy, 2, rng);
    EXPECT_GE(d, Millis(400));
    EXPECT_LE(d, Millis(600));
  }
}

TEST(Retry, SleepIsInterruptible) {
  std::stop_source stop;
  std::jthread t([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    stop.request_stop();
  });
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_THROW(interruptible_sleep(Millis(10'000), stop.get_token()), Interrupted);
  EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(5));
}

TEST(Retry, StopBeforeAttemptThrowsInterrupted) {
  std::stop_source stop;
  stop.request_stop();
  RetryContext ctx = fast_ctx();
  ctx.stop = stop.get_token();
  FlakyProvider p(0);
  EXPECT_THROW(fetch_block_transactions(p, 0, ctx), Interrupted);
  EXPECT_EQ(p.calls, 0);
}

TEST(RateLimiter, SpacesRequests) {
  RateLimiter limiter(100.0);
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 11; ++i) limiter.acquire();
  EXPECT_GE(std::chrono::steady_clock::now() - t0, std::chrono::milliseconds(90));
  RateLimiter unlimited(0.0);
  for (int i = 0; i < 10000; ++i) unlimited.acquire();
}

// --- checkpoint -------------------------------------------------------------

TEST(Checkpoint, PlansEveryChunkWithoutCheckpoint) {
  auto tasks = plan_tasks(Chain::bitcoin, {0, 99}, 10);
  ASSERT_EQ(tasks.size(), 10u);
  EXPECT_EQ(tasks.front().heights, (BlockRange{0, 9}));
  EXPECT_EQ(tasks.back().heights, (BlockRange{90, 99}));
  for (const auto& t : tasks) EXPECT_EQ(t.state, TaskState::pending);
}

TEST(Checkpoint, SkipsDoneChunks) {
  Checkpoint cp{Chain::bitcoin, {0, 99}, 10, {0, 10, 20, 30, 40}};
  auto tasks = plan_tasks(Chain::bitcoin, {0, 99}, 10, &cp);
  ASSERT_EQ(tasks.size(), 5u);
  EXPECT_EQ(tasks.front().heights, (BlockRange{50, 59}));
  EXPECT_EQ(tasks.back().heights, (BlockRange{90, 99}));
}

TEST(Checkpoint, FinishedJobPlansNothing) {
  Checkpoint cp{Chain::bitcoin, {0, 99}, 10, {0, 10, 20, 30, 40, 50, 60, 70, 80, 90}};
  EXPECT_TRUE(cp.complete());
  EXPECT_TRUE(plan_tasks(Chain::bitcoin, {0, 99}, 10, &cp).empty());
}

TEST(Checkpoint, PartialLastChunk) {
  auto chunks = partition_range({5, 27}, 10);
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[2], (BlockRange{25, 27}));
  EXPECT_THROW(partition_range({0, 9}, 0), std::exception);
}

TEST(Checkpoint, MismatchIsRejected) {
  Checkpoint cp{Chain::bitcoin, {0, 99}, 10, {}};
  EXPECT_THROW(plan_tasks(Chain::ethereum, {0, 99}, 10, &cp), CheckpointError);
  EXPECT_THROW(plan_tasks(Chain::bitcoin, {0, 98}, 10, &cp), CheckpointError);
  EXPECT_THROW(plan_tasks(Chain::bitcoin, {0, 99}, 20, &cp), CheckpointError);
}

TEST(Checkpoint, SaveLoadRoundTrip) {
  TempDir dir("cp");
  Checkpoint cp{Chain::ethereum, {100, 349}, 50, {100, 200}};
  save_checkpoint(cp, dir / "cp.json");
  auto back = load_checkpoint(dir / "cp.json");
  EXPECT_EQ(back.chain, cp.chain);
  EXPECT_EQ(back.range, cp.range);
  EXPECT_EQ(back.chunk_size, cp.chunk_size);
  EXPECT_EQ(back.done, cp.done);
  EXPECT_FALSE(try_load_checkpoint(dir / "absent.json"));
  std::ofstream(dir / "bad.json") << "{\"version\":1,";
  EXPECT_THROW(load_checkpoint(dir / "bad.json"), CheckpointError);
  std::ofstream(dir / "stray.json") << R"({"version":1,"chain":"ethereum","first":0,"last":9,"chunk_size":5,"done":[3]})";
  EXPECT_THROW(load_checkpoint(dir / "stray.json"), CheckpointError);
}

// --- chunk files --------------------------------------------------------------

TEST(ChunkFile, LineRoundTrip) {
  Transaction with_sender{btc("a"), btc("b"), *Amount::parse_decimal("98765432109876543210987"), 17, 1234};
  Transaction coinbase{std::nullopt, btc("miner"), Amount(5000000000), 18, 1300};
  for (const auto& tx : {with_sender, coinbase}) {
    EXPECT_EQ(parse_chunk_line(format_chunk_line(tx), Chain::bitcoin), tx);
  }
  EXPECT_EQ(format_chunk_line(coinbase), R"({"h":18,"t":1300,"s":null,"r":"miner","v":5000000000})");
  EXPECT_EQ(chunk_file_name({0, 24}), "chunk_0_24.ndjson");
  EXPECT_THROW(parse_chunk_line("{\"h\":1}", Chain::bitcoin), ParseError);
}

// --- fixture provider ---------------------------------------------------------

TEST(FixtureProvider, ServesTheMiniChain) {
  FixtureProvider p(fixture_dir() / "mini");
  EXPECT_EQ(p.chain(), Chain::ethereum);
  EXPECT_EQ(p.latest_height(), 99u);
  std::int64_t prev = p.block_timestamp(0);
  for (std::uint64_t h = 1; h <= 99; ++h) {
    const std::int64_t t = p.block_timestamp(h);
    EXPECT_GT(t, prev);
    prev = t;
  }
  bool saw_big = false;
  bool saw_senderless = false;
  for (std::uint64_t h = 0; h <= 99; ++h) {
    for (const auto& tx : p.block_transactions(h)) {
      saw_big |= !tx.amount.fits_u64();
      saw_senderless |= !tx.sender;
      EXPECT_EQ(tx.block_height, h);
    }
  }
  EXPECT_TRUE(saw_big);
  EXPECT_TRUE(saw_senderless);
  try {
    p.block_transactions(100);
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_FALSE(e.retryable());
  }
}

TEST(FixtureProvider, IntervalResolution) {
  FixtureProvider p(fixture_dir() / "mini");
  std::vector<std::int64_t> ts;
  for (std::uint64_t h = 0; h <= 99; ++h) ts.push_back(p.block_timestamp(h));
  const std::int64_t a = ts[20] + 1;
  const std::int64_t b = ts[60];
  EXPECT_EQ(resolve_block_range({a, b}, p, fast_ctx()), scan_oracle(ts, a, b));
}

// --- download -----------------------------------------------------------------

namespace {

struct DownloadRun {
  DownloadSummary summary;
  Checkpoint checkpoint;
};

DownloadRun download(const fs::path& out, unsigned workers, std::uint64_t chunk_size, std::stop_source* stop = nullptr,
                     std::function<void(const DownloadTask&)> on_done = nullptr) {
  FixtureProvider p(fixture_dir() / "mini");
  const fs::path cp_path = out / "checkpoint.json";
  auto existing = try_load_checkpoint(cp_path);
  auto tasks = plan_tasks(Chain::ethereum, {0, 99}, chunk_size, existing ? &*existing : nullptr);
  Checkpoint cp = existing ? *existing : Checkpoint{Chain::ethereum, {0, 99}, chunk_size, {}};
  DownloadOptions opts;
  opts.worker_count = workers;
  opts.chunk_dir = out / "chunks";
  opts.checkpoint_path = cp_path;
  opts.sleep = no_sleep;
  if (stop) opts.stop = stop->get_token();
  opts.on_chunk_done = std::move(on_done);
  auto summary = run_download(std::move(tasks), p, cp, opts);
  return {summary, cp};
}

}  // namespace

TEST(Download, InterruptAndResumeMatchesSingleShot) {
  TempDir ref("ref");
  auto full = download(ref.path(), 1, 10);
  EXPECT_EQ(full.summary.chunks_completed, 10u);
  EXPECT_EQ(full.summary.blocks_fetched, 100u);
  EXPECT_TRUE(full.checkpoint.complete());

  TempDir run("resume");
  std::stop_source stop;
  std::atomic<int> done{0};
  auto first = download(run.path(), 1, 10, &stop, [&](const DownloadTask&) {
    if (++done == 4) stop.request_stop();
  });
  EXPECT_TRUE(first.summary.interrupted);
  EXPECT_EQ(first.summary.chunks_completed, 4u);
  EXPECT_EQ(load_checkpoint(run / "checkpoint.json").done.size(), 4u);

  auto second = download(run.path(), 2, 10);
  EXPECT_FALSE(second.summary.interrupted);
  EXPECT_EQ(second.summary.chunks_completed, 6u);
  EXPECT_EQ(dir_contents(run / "chunks"), dir_contents(ref / "chunks"));
  EXPECT_EQ(slurp(run / "checkpoint.json"), slurp(ref / "checkpoint.json"));
}

TEST(Download, WorkerCountDoesNotChangeChunks) {
  TempDir one("w1");
  TempDir four("w4");
  auto a = download(one.path(), 1, 7);
  auto b = download(four.path(), 4, 7);
  EXPECT_EQ(a.summary, b.summary);
  EXPECT_EQ(dir_contents(one / "chunks"), dir_contents(four / "chunks"));
}

TEST(Download, EmptyTaskListIsANoOp) {
  TempDir dir("empty");
  FixtureProvider p(fixture_dir() / "mini");
  Checkpoint cp{Chain::ethereum, {0, 99}, 10, {}};
  DownloadOptions opts;
  opts.chunk_dir = dir / "chunks";
  opts.checkpoint_path = dir / "checkpoint.json";
  EXPECT_EQ(run_download({}, p, cp, opts), DownloadSummary{});
  EXPECT_FALSE(fs::exists(dir / "chunks"));
  EXPECT_FALSE(fs::exists(dir / "checkpoint.json"));
}

TEST(Download, FailureKeepsCompletedChunksOnly) {
  TempDir dir("fail");
  FlakyProvider p(-1, false);
  Checkpoint cp{Chain::bitcoin, {0, 9}, 5, {}};
  DownloadOptions opts;
  opts.worker_count = 2;
  opts.chunk_dir = dir / "chunks";
  opts.checkpoint_path = dir / "checkpoint.json";
  EXPECT_THROW(run_download(plan_tasks(Chain::bitcoin, {0, 9}, 5), p, cp, opts), ProviderError);
  EXPECT_TRUE(cp.done.empty());
  EXPECT_TRUE(dir_contents(dir / "chunks").empty());  // no partial or temp files
}

TEST(Download, AbortCutsRetriesShort) {
  TempDir dir("abort");
  FlakyProvider p(-1, true);
  Checkpoint cp{Chain::bitcoin, {0, 9}, 5, {}};
  std::stop_source abort;
  DownloadOptions opts;
  opts.chunk_dir = dir / "chunks";
  opts.checkpoint_path = dir / "checkpoint.json";
  opts.abort = abort.get_token();
  opts.retry.base_delay = Millis(50);
  std::jthread t([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    abort.request_stop();
  });
  auto s = run_download(plan_tasks(Chain::bitcoin, {0, 9}, 5), p, cp, opts);
  EXPECT_TRUE(s.interrupted);
  EXPECT_EQ(s.chunks_completed, 0u);
}

TEST(Download, ChunksRebuildTheSameGraph) {
  TempDir dir("graph");
  download(dir.path(), 3, 13);
  InteractionGraph from_chunks = build_graph_from_chunks(dir / "chunks", Chain::ethereum);

  FixtureProvider p(fixture_dir() / "mini");
  InteractionGraph direct(Chain::ethereum);
  for (std::uint64_t h = 0; h <= 99; ++h)
    for (const auto& tx : p.block_transactions(h)) direct.add_transaction(tx);
  ASSERT_TRUE(same_structure(from_chunks, direct));
  for (NodeIndex v = 0; v < direct.node_count(); ++v) {
    EXPECT_EQ(from_chunks.in_tx(v), direct.in_tx(v));
    EXPECT_EQ(from_chunks.out_tx(v), direct.out_tx(v));
  }
}

// --- UTXO expansion -------------------------------------------------------------

TEST(Utxo, InputsTimesOutputs) {
  auto txs = expand_utxo_transaction({"in1", "in2", "in1"}, {{"out1", Amount(10)}, {"out2", Amount(5)}}, 7, 99);
  ASSERT_EQ(txs.size(), 4u);  // duplicate input collapses
  EXPECT_EQ(txs[0].sender->str(), "in1");
  EXPECT_EQ(txs[0].recipient.str(), "out1");
  EXPECT_EQ(txs[0].amount, Amount(5));
  EXPECT_EQ(txs[1].recipient.str(), "out2");
  EXPECT_EQ(txs[1].amount, Amount(3));  // 5 split 3 + 2
  EXPECT_EQ(txs[3].amount, Amount(2));
  EXPECT_EQ(txs[0].block_height, 7u);
}

TEST(Utxo, CoinbaseAndNonAddressOutputs) {
  auto txs = expand_utxo_transaction({}, {{"miner", Amount(50)}, {std::nullopt, Amount(0)}}, 1, 2);
  ASSERT_EQ(txs.size(), 1u);
  EXPECT_FALSE(txs[0].sender);
  EXPECT_EQ(txs[0].amount, Amount(50));
}
