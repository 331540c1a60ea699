#pragma once

#include <cstdint>
#include <vector>

#include "ledgernet/address.hpp"
#include "ledgernet/transaction.hpp"

namespace ledgernet::ingest {

/// Read access to a ledger's settled history.
///
/// A height always yields the same data. Implementations must tolerate
/// concurrent calls from several download workers. Transient failures
/// (timeouts, HTTP 429/5xx) are reported as retryable ProviderError.
class BlockProvider {
 public:
  virtual ~BlockProvider() = default;

  virtual Chain chain() const = 0;
  virtual std::uint64_t latest_height() = 0;
  /// Unix seconds.
  virtual std::int64_t block_timestamp(std::uint64_t height) = 0;
  /// Transactions in intra-block order, with block_height and timestamp set.
  virtual std::vector<Transaction> block_transactions(std::uint64_t height) = 0;
};

}  // namespace ledgernet::ingest
