#include "ledgernet/ingest/retry.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <thread>

namespace ledgernet::ingest {

Millis backoff_delay(const RetryPolicy& policy, unsigned failed_attempt, std::mt19937_64& rng) {
  double base = static_cast<double>(policy.base_delay.count());
  double exp = std::pow(policy.factor, static_cast<double>(failed_attempt > 0 ? failed_attempt - 1 : 0));
  double delay = std::min(static_cast<double>(policy.max_delay.count()), base * exp);
  if (policy.jitter > 0) {
    std::uniform_real_distribution<double> u(1.0 - policy.jitter, 1.0 + policy.jitter);
    delay *= u(rng);
  }
  return Millis(static_cast<Millis::rep>(std::max(0.0, delay)));
}

void interruptible_sleep(Millis delay, std::stop_token stop) {
  std::mutex mu;
  std::condition_variable_any cv;
  std::unique_lock lock(mu);
  cv.wait_for(lock, stop, delay, [] { return false; });
  if (stop.stop_requested()) throw Interrupted();
}

RateLimiter::RateLimiter(double requests_per_second, double burst)
    : rate_(requests_per_second), burst_(std::max(1.0, burst)), tokens_(burst_), last_(Clock::now()) {}

void RateLimiter::acquire(std::stop_token stop) {
  if (rate_ <= 0) return;
  for (;;) {
    Millis wait{0};
    {
      std::lock_guard lock(mu_);
      auto now = Clock::now();
      std::chrono::duration<double> elapsed = now - last_;
      last_ = now;
      tokens_ = std::min(burst_, tokens_ + elapsed.count() * rate_);
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = Millis(static_cast<Millis::rep>(std::ceil((1.0 - tokens_) / rate_ * 1000.0)));
    }
    interruptible_sleep(std::max(wait, Millis(1)), stop);
  }
}

FetchResult fetch_block_transactions(BlockProvider& provider, std::uint64_t height, const RetryContext& ctx) {
  auto [txs, attempts] = with_retry(ctx, [&] { return provider.block_transactions(height); });
  return FetchResult{std::move(txs), attempts};
}

}  // namespace ledgernet::ingest
