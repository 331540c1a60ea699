#pragma once

#include <cstdint>

#include "ledgernet/ingest/provider.hpp"
#include "ledgernet/ingest/retry.hpp"

namespace ledgernet::ingest {

/// Inclusive on both ends, unix seconds.
struct TimeInterval {
  std::int64_t start = 0;
  std::int64_t end = 0;
};

/// Inclusive block-height span.
struct BlockRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;

  std::uint64_t size() const { return last - first + 1; }
  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

/// Blocks whose timestamps fall in `interval`: first is the smallest height
/// with timestamp >= start, last the largest with timestamp <= end.
///
/// Binary search over headers assumes non-decreasing timestamps. Real chains
/// have small local inversions, so each bound is then refined by a linear
/// scan of `slack` blocks beyond the binary-search answer.
///
/// Throws EmptyRange when no block lies in the interval.
BlockRange resolve_block_range(const TimeInterval& interval, BlockProvider& provider, const RetryContext& ctx,
                               std::uint64_t slack = 128);

}  // namespace ledgernet::ingest
