#include "ledgernet/address.hpp"

#include <algorithm>

#include "ledgernet/errors.hpp"

namespace ledgernet {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_hex(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

}  // namespace

std::string_view chain_name(Chain chain) {
  switch (chain) {
    case Chain::bitcoin:
      return "bitcoin";
    case Chain::ethereum:
      return "ethereum";
  }
  return "unknown";
}

std::optional<Chain> parse_chain(std::string_view name) {
  if (name == "bitcoin" || name == "btc") return Chain::bitcoin;
  if (name == "ethereum" || name == "eth") return Chain::ethereum;
  return std::nullopt;
}

bool is_canonical_ethereum_key(std::string_view key) {
  if (key.size() != 42 || key[0] != '0' || key[1] != 'x') return false;
  return std::all_of(key.begin() + 2, key.end(),
                     [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

AddressKey AddressKey::canonicalize(std::string_view raw, Chain chain) {
  std::string_view s = trim(raw);
  if (s.empty()) throw AddressError("empty address");

  if (chain == Chain::ethereum) {
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
    if (s.size() != 40 || !std::all_of(s.begin(), s.end(), is_hex)) {
      throw AddressError("malformed ethereum address: '" + std::string(raw) + "'");
    }
    std::string key = "0x";
    key.reserve(42);
    for (char c : s) key.push_back(static_cast<char>(c >= 'A' && c <= 'F' ? c - 'A' + 'a' : c));
    return AddressKey(chain, std::move(key));
  }

  // Quotes and control characters would break the Pajek vertex line.
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (is_space(c) || c == '"' || u < 0x20 || u == 0x7f) {
      throw AddressError("malformed bitcoin address: '" + std::string(raw) + "'");
    }
  }
  return AddressKey(chain, std::string(s));
}

}  // namespace ledgernet
