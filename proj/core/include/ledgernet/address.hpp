#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace ledgernet {

enum class Chain : std::uint8_t { bitcoin, ethereum };

std::string_view chain_name(Chain chain);
std::optional<Chain> parse_chain(std::string_view name);

/// Canonical account identifier. One ledger account maps to exactly one key:
/// Ethereum keys are `0x` + 40 lowercase hex digits, Bitcoin keys are the
/// address string as published (base58 or bech32), trimmed.
class AddressKey {
 public:
  /// Throws AddressError on empty or malformed input.
  static AddressKey canonicalize(std::string_view raw, Chain chain);

  Chain chain() const noexcept { return chain_; }
  const std::string& str() const noexcept { return key_; }

  friend bool operator==(const AddressKey&, const AddressKey&) = default;
  friend auto operator<=>(const AddressKey&, const AddressKey&) = default;

 private:
  AddressKey(Chain chain, std::string key) : chain_(chain), key_(std::move(key)) {}

  Chain chain_;
  std::string key_;
};

bool is_canonical_ethereum_key(std::string_view key);

}  // namespace ledgernet

template <>
struct std::hash<ledgernet::AddressKey> {
  std::size_t operator()(const ledgernet::AddressKey& k) const noexcept {
    return std::hash<std::string>{}(k.str()) ^ static_cast<std::size_t>(k.chain());
  }
};
