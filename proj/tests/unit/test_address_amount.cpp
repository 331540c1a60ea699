#include <gtest/gtest.h>

#include "ledgernet/address.hpp"
#include "ledgernet/amount.hpp"
#include "ledgernet/errors.hpp"
#include "ledgernet/json_io.hpp"

using namespace ledgernet;

TEST(Address, EthereumIsLowercased) {
  auto k = AddressKey::canonicalize("0xAbCdEF0123456789aBcDeF0123456789ABCDEF00", Chain::ethereum);
  EXPECT_EQ(k.str(), "0xabcdef0123456789abcdef0123456789abcdef00");
  EXPECT_EQ(k.chain(), Chain::ethereum);
}

TEST(Address, EthereumPrefixIsOptional) {
  auto a = AddressKey::canonicalize("ABCDEF0123456789abcdef0123456789abcdef00", Chain::ethereum);
  auto b = AddressKey::canonicalize("0XABCDEF0123456789abcdef0123456789abcdef00", Chain::ethereum);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.str().substr(0, 2), "0x");
}

TEST(Address, BitcoinPassesThrough) {
  auto k = AddressKey::canonicalize("1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa", Chain::bitcoin);
  EXPECT_EQ(k.str(), "1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa");
  auto bech = AddressKey::canonicalize("bc1qar0srrr7xfkvy5l643lydnw9re59gtzzwf5mdq", Chain::bitcoin);
  EXPECT_EQ(bech.str(), "bc1qar0srrr7xfkvy5l643lydnw9re59gtzzwf5mdq");
}

TEST(Address, RejectsMalformedInput) {
  EXPECT_THROW(AddressKey::canonicalize("", Chain::ethereum), AddressError);
  EXPECT_THROW(AddressKey::canonicalize("", Chain::bitcoin), AddressError);
  EXPECT_THROW(AddressKey::canonicalize("0x1234", Chain::ethereum), AddressError);
  EXPECT_THROW(AddressKey::canonicalize("0xzz23456789abcdef0123456789abcdef01234567", Chain::ethereum), AddressError);
  EXPECT_THROW(AddressKey::canonicalize("1A1z P1", Chain::bitcoin), AddressError);
  EXPECT_THROW(AddressKey::canonicalize("a\"b", Chain::bitcoin), AddressError);
}

TEST(Address, CanonicalizationIsIdempotent) {
  const char* raw = "0xAbCdEF0123456789aBcDeF0123456789ABCDEF00";
  auto once = AddressKey::canonicalize(raw, Chain::ethereum);
  EXPECT_EQ(AddressKey::canonicalize(once.str(), Chain::ethereum), once);
  EXPECT_TRUE(is_canonical_ethereum_key(once.str()));
  EXPECT_FALSE(is_canonical_ethereum_key(raw));
}

TEST(Address, ChainNames) {
  EXPECT_EQ(parse_chain("eth"), Chain::ethereum);
  EXPECT_EQ(parse_chain("bitcoin"), Chain::bitcoin);
  EXPECT_FALSE(parse_chain("ripple"));
  EXPECT_EQ(chain_name(Chain::ethereum), "ethereum");
}

TEST(Amount, DecimalRoundTripBeyond64Bits) {
  const std::string big = "340282366920938463463374607431768211455";  // 2^128 - 1
  auto a = Amount::parse_decimal(big);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->to_string(), big);
  EXPECT_FALSE(a->fits_u64());
  EXPECT_FALSE(Amount::parse_decimal("340282366920938463463374607431768211456"));
  EXPECT_FALSE(Amount::parse_decimal(""));
  EXPECT_FALSE(Amount::parse_decimal("-1"));
  EXPECT_EQ(Amount::parse_decimal("0")->to_string(), "0");
}

TEST(Amount, HexParsing) {
  EXPECT_EQ(Amount::parse_hex("0x0")->to_string(), "0");
  EXPECT_EQ(Amount::parse_hex("0xde0b6b3a7640000")->to_string(), "1000000000000000000");
  EXPECT_EQ(Amount::parse_hex("0x10000000000000000")->to_string(), "18446744073709551616");
  EXPECT_FALSE(Amount::parse_hex("0xg"));
}

TEST(Amount, AdditionOverflowThrows) {
  auto max = Amount::from_raw(~static_cast<Amount::value_type>(0));
  EXPECT_THROW(max += Amount(1), std::overflow_error);
  EXPECT_EQ(Amount(5) + Amount(3), Amount(8));
}

TEST(Amount, SharesSumToWhole) {
  const Amount total(100);
  Amount sum;
  for (std::uint64_t i = 0; i < 7; ++i) sum += total.share(7, i);
  EXPECT_EQ(sum, total);
  EXPECT_EQ(total.share(7, 0), Amount(15));  // remainder to the first shares
  EXPECT_EQ(total.share(7, 6), Amount(14));
}

TEST(JsonIo, OversizedIntegerLiteralsSurviveParsing) {
  Json doc = parse_json(R"({"v":123456789012345678901234567890,"w":42})");
  auto v = amount_from_json(doc["v"]);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->to_string(), "123456789012345678901234567890");
  EXPECT_EQ(amount_from_json(doc["w"])->to_string(), "42");
  EXPECT_FALSE(amount_from_json(Json(-3)));
  EXPECT_FALSE(amount_from_json(Json(1.5)));
}

TEST(JsonIo, ParseErrorCarriesOffset) {
  try {
    parse_json("{\"a\": tru}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GT(e.offset(), 0u);
  }
}
