#pragma once

#include <cstdint>
#include <optional>

#include "ledgernet/address.hpp"
#include "ledgernet/amount.hpp"

namespace ledgernet {

/// One directed value transfer. `sender` is empty for coinbase rewards and
/// other senderless records.
struct Transaction {
  std::optional<AddressKey> sender;
  AddressKey recipient;
  Amount amount;
  std::uint64_t block_height = 0;
  std::int64_t timestamp = 0;

  bool is_self_transfer() const { return sender && *sender == recipient; }

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

}  // namespace ledgernet
