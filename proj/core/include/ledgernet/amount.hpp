#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ledgernet {

/// Non-negative quantity in a chain's base unit (wei or satoshi).
///
/// Wei amounts overflow 64 bits (1 ETH = 1e18 wei), so the value is held in
/// 128 bits. Addition throws std::overflow_error instead of wrapping.
class Amount {
 public:
  using value_type = unsigned __int128;

  constexpr Amount() = default;
  constexpr explicit Amount(std::uint64_t v) : value_(v) {}

  static constexpr Amount from_raw(value_type v) {
    Amount a;
    a.value_ = v;
    return a;
  }

  /// Plain decimal digits, no sign, no exponent.
  static std::optional<Amount> parse_decimal(std::string_view text);
  /// `0x`-prefixed hex quantity as returned by Ethereum JSON-RPC.
  static std::optional<Amount> parse_hex(std::string_view text);

  std::string to_string() const;

  constexpr value_type raw() const { return value_; }
  bool fits_u64() const { return value_ <= UINT64_MAX; }
  double to_double() const { return static_cast<double>(value_); }

  Amount& operator+=(Amount other);
  friend Amount operator+(Amount a, Amount b) { return a += b; }

  /// Splits the amount into `parts` shares that differ by at most one unit;
  /// the first `remainder` shares get the extra unit.
  Amount share(std::uint64_t parts, std::uint64_t index) const;

  friend constexpr bool operator==(Amount, Amount) = default;
  friend constexpr std::strong_ordering operator<=>(Amount a, Amount b) {
    return a.value_ <=> b.value_;
  }

 private:
  value_type value_ = 0;
};

}  // namespace ledgernet
