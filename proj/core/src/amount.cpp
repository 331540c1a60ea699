#include "ledgernet/amount.hpp"

#include <algorithm>
#include <stdexcept>

namespace ledgernet {

namespace {
constexpr Amount::value_type kMax = ~Amount::value_type{0};
}

std::optional<Amount> Amount::parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  value_type v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    auto digit = static_cast<value_type>(c - '0');
    if (v > (kMax - digit) / 10) return std::nullopt;
    v = v * 10 + digit;
  }
  return from_raw(v);
}

std::optional<Amount> Amount::parse_hex(std::string_view text) {
  if (text.size() < 3 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) return std::nullopt;
  text.remove_prefix(2);
  value_type v = 0;
  for (char c : text) {
    unsigned digit;
    if (c >= '0' && c <= '9') {
      digit = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      digit = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      digit = static_cast<unsigned>(c - 'A' + 10);
    } else {
      return std::nullopt;
    }
    if (v >> 124) return std::nullopt;
    v = (v << 4) | digit;
  }
  return from_raw(v);
}

std::string Amount::to_string() const {
  if (value_ == 0) return "0";
  std::string out;
  value_type v = value_;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Amount& Amount::operator+=(Amount other) {
  if (value_ > kMax - other.value_) throw std::overflow_error("amount overflow");
  value_ += other.value_;
  return *this;
}

Amount Amount::share(std::uint64_t parts, std::uint64_t index) const {
  if (parts == 0 || index >= parts) throw std::invalid_argument("bad share index");
  value_type q = value_ / parts;
  value_type r = value_ % parts;
  return from_raw(q + (index < r ? 1 : 0));
}

}  // namespace ledgernet
