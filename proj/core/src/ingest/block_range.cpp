#include "ledgernet/ingest/block_range.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace ledgernet::ingest {

BlockRange resolve_block_range(const TimeInterval& interval, BlockProvider& provider, const RetryContext& ctx,
                               std::uint64_t slack) {
  if (interval.start > interval.end) throw EmptyRange("interval start is after its end");

  const std::uint64_t tip = with_retry(ctx, [&] { return provider.latest_height(); }).first;
  std::unordered_map<std::uint64_t, std::int64_t> seen;
  auto ts = [&](std::uint64_t h) {
    if (auto it = seen.find(h); it != seen.end()) return it->second;
    auto t = with_retry(ctx, [&] { return provider.block_timestamp(h); }).first;
    seen.emplace(h, t);
    return t;
  };

  // First height in [0, tip + 1) for which `pred` is false.
  auto partition_point = [&](auto pred) {
    std::uint64_t lo = 0;
    std::uint64_t hi = tip + 1;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if (pred(ts(mid))) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo;
  };

  std::uint64_t first = partition_point([&](std::int64_t t) { return t < interval.start; });
  for (std::uint64_t h = first > slack ? first - slack : 0; h < first; ++h) {
    if (ts(h) >= interval.start) {
      first = h;
      break;
    }
  }

  // Candidate one past the last block not after `end`.
  std::uint64_t after = partition_point([&](std::int64_t t) { return t <= interval.end; });
  std::optional<std::uint64_t> last;
  std::uint64_t scan_top = std::min(tip, after + slack);
  for (std::uint64_t h = scan_top + 1; h-- > after;) {
    if (ts(h) <= interval.end) {
      last = h;
      break;
    }
  }
  if (!last && after > 0) last = after - 1;

  if (first > tip || !last || first > *last) {
    throw EmptyRange("no block between " + std::to_string(interval.start) + " and " + std::to_string(interval.end));
  }
  return BlockRange{first, *last};
}

}  // namespace ledgernet::ingest
