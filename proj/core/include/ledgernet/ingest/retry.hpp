#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <stop_token>
#include <utility>
#include <vector>

#include "ledgernet/errors.hpp"
#include "ledgernet/ingest/provider.hpp"

namespace ledgernet::ingest {

using Millis = std::chrono::milliseconds;

/// Exponential backoff: attempt k (1-based) failing waits
/// min(max_delay, base_delay * factor^(k-1)) scaled by a uniform factor in
/// [1 - jitter, 1 + jitter]. Without `max_attempts` a retryable failure is
/// retried until it succeeds.
struct RetryPolicy {
  std::optional<unsigned> max_attempts;
  Millis base_delay{250};
  double factor = 2.0;
  Millis max_delay{30'000};
  double jitter = 0.2;
};

Millis backoff_delay(const RetryPolicy& policy, unsigned failed_attempt, std::mt19937_64& rng);

/// Sleeps for the given time or until stop is requested, whichever is first.
void interruptible_sleep(Millis delay, std::stop_token stop);

using SleepFn = std::function<void(Millis, std::stop_token)>;

/// Global token bucket shared by all workers. A non-positive rate disables
/// limiting.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second, double burst = 1.0);

  /// Blocks until a token is available. Throws Interrupted on stop.
  void acquire(std::stop_token stop = {});

  double rate() const { return rate_; }

 private:
  using Clock = std::chrono::steady_clock;

  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mu_;
};

struct RetryContext {
  RetryPolicy policy;
  RateLimiter* limiter = nullptr;
  std::stop_token stop;
  SleepFn sleep = interruptible_sleep;
  std::uint64_t jitter_seed = 0x5eed;
};

/// Runs `op` until it succeeds, retrying retryable ProviderErrors per the
/// policy. Returns the result and the number of attempts made. Throws
/// ProviderError (with attempts filled in) once the cap is hit, the original
/// error if it is not retryable, or Interrupted on stop.
template <typename Op>
auto with_retry(const RetryContext& ctx, Op&& op) -> std::pair<decltype(op()), unsigned> {
  std::mt19937_64 rng(ctx.jitter_seed);
  for (unsigned attempt = 1;; ++attempt) {
    if (ctx.stop.stop_requested()) throw Interrupted();
    if (ctx.limiter != nullptr) ctx.limiter->acquire(ctx.stop);
    try {
      return {op(), attempt};
    } catch (const ProviderError& e) {
      if (!e.retryable()) throw;
      if (ctx.policy.max_attempts && attempt >= *ctx.policy.max_attempts) {
        throw ProviderError(std::string(e.what()) + " (gave up after " + std::to_string(attempt) + " attempts)",
                            false, attempt);
      }
    }
    ctx.sleep(backoff_delay(ctx.policy, attempt, rng), ctx.stop);
  }
}

struct FetchResult {
  std::vector<Transaction> transactions;
  unsigned attempts = 0;
};

FetchResult fetch_block_transactions(BlockProvider& provider, std::uint64_t height, const RetryContext& ctx);

}  // namespace ledgernet::ingest
