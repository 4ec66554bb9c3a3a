#include <gtest/gtest.h>

#include <bit>
#include <random>
#include <set>

#include "oamcrypt/codec/alphabet.hpp"

namespace oc = oamcrypt;

namespace {

// Oracle: bits read straight off the ASCII code, MSB first.
std::vector<int> reference_charges(unsigned byte) {
  std::vector<int> out;
  for (int k = 1; k <= 8; ++k)
    if (byte & (0x80u >> (k - 1))) out.push_back(k);
  return out;
}

// A perfect receiver: every record's charges are identified correctly.
std::string perfect_bitwise_channel(const oc::SymbolSequence& seq) {
  std::vector<oc::ChargeDetection> det;
  for (const auto& r : seq.records) det.push_back({r.char_index, r.charges.at(0)});
  auto out = oc::decode_bitwise(det, seq.char_count);
  EXPECT_TRUE(out.warnings.empty());
  return out.text;
}

std::string perfect_bytewise_channel(const oc::SymbolSequence& seq) {
  std::string out;
  for (const auto& r : seq.records)
    out.push_back(static_cast<char>(r.kind == oc::SymbolKind::null_symbol ? 0 : oc::charges_to_char(r.charges)));
  return out;
}

std::string random_bytes(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::string s(n, '\0');
  for (auto& c : s) c = static_cast<char>(byte(rng));
  return s;
}

}  // namespace

TEST(Alphabet, DigitNineAndZero) {
  EXPECT_EQ(oc::char_to_charges('9'), (std::vector<int>{3, 4, 5, 8}));
  EXPECT_EQ(oc::char_to_charges('0'), (std::vector<int>{3, 4}));
  EXPECT_TRUE(oc::char_to_charges(0).empty());
  for (char d = '0'; d <= '9'; ++d) {
    const auto n = oc::char_to_charges(static_cast<std::uint8_t>(d)).size();
    EXPECT_GE(n, 2u);
    EXPECT_LE(n, 5u);
  }
}

TEST(Alphabet, MatchesAsciiOracleAndPopcount) {
  for (unsigned b = 0; b < 256; ++b) {
    const auto ch = oc::char_to_charges(static_cast<std::uint8_t>(b));
    EXPECT_EQ(ch, reference_charges(b));
    EXPECT_EQ(static_cast<int>(ch.size()), std::popcount(b));
    EXPECT_EQ(oc::charges_to_char(ch), b);
  }
}

TEST(Alphabet, Injective) {
  std::set<std::vector<int>> seen;
  for (unsigned b = 0; b < 256; ++b) seen.insert(oc::char_to_charges(static_cast<std::uint8_t>(b)));
  EXPECT_EQ(seen.size(), 256u);
}

TEST(Alphabet, ChargesOutsideAlphabetRejected) {
  const std::vector<int> bad{9};
  EXPECT_THROW(oc::charges_to_char(bad), std::out_of_range);
}

TEST(EncodeBitwise, Examples) {
  const auto t = oc::encode_bitwise("T");
  ASSERT_EQ(t.records.size(), 3u);
  EXPECT_EQ(t.records[0].charges, std::vector<int>{2});
  EXPECT_EQ(t.records[1].charges, std::vector<int>{4});
  EXPECT_EQ(t.records[2].charges, std::vector<int>{6});
  const auto bang = oc::encode_bitwise("!");
  ASSERT_EQ(bang.records.size(), 2u);
  EXPECT_EQ(bang.records[0].charges, std::vector<int>{3});
  EXPECT_EQ(bang.records[1].charges, std::vector<int>{8});
  EXPECT_TRUE(oc::encode_bitwise("").empty());
}

TEST(EncodeBitwise, RecordsCarryCharacterIndexAndSlot) {
  const auto s = oc::encode_bitwise("AB");  // 01000001, 01000010
  ASSERT_EQ(s.records.size(), 4u);
  EXPECT_EQ(s.char_count, 2u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(s.records[k].slot, k);
  EXPECT_EQ(s.records[1].char_index, 0u);
  EXPECT_EQ(s.records[2].char_index, 1u);
  EXPECT_EQ(s.records[2].kind, oc::SymbolKind::single_mode);
}

TEST(EncodeBitwise, ExplicitZeroBitsFillEverySlot) {
  const auto s = oc::encode_bitwise("T", oc::ZeroBits::explicit_);
  ASSERT_EQ(s.records.size(), 8u);
  EXPECT_EQ(s.records[0].charges, std::vector<int>{0});
  EXPECT_EQ(s.records[1].charges, std::vector<int>{2});
  EXPECT_EQ(perfect_bitwise_channel(s), "T");
  EXPECT_THROW(oc::zero_bits_from("sometimes"), std::invalid_argument);
}

TEST(EncodeBytewise, Examples) {
  const auto nine = oc::encode_bytewise("9");
  ASSERT_EQ(nine.records.size(), 1u);
  EXPECT_EQ(nine.records[0].kind, oc::SymbolKind::superposition);
  EXPECT_EQ(nine.records[0].charges, (std::vector<int>{3, 4, 5, 8}));
  EXPECT_EQ(oc::encode_bytewise("10").records.size(), 2u);
  const auto px = oc::encode_bytewise(oc::pixels_to_text(std::vector<std::uint8_t>{255, 0}));
  EXPECT_EQ(px.records[0].byte, '1');
  EXPECT_EQ(px.records[1].byte, '0');
}

TEST(EncodeBytewise, NullByteIsReservedSymbol) {
  const auto s = oc::encode_bytewise(std::string_view("a\0", 2));
  ASSERT_EQ(s.records.size(), 2u);
  EXPECT_EQ(s.records[1].kind, oc::SymbolKind::null_symbol);
  EXPECT_TRUE(s.records[1].charges.empty());
}

TEST(DecodeBitwise, Examples) {
  const std::vector<oc::ChargeDetection> t{{0, 2}, {0, 4}, {0, 6}};
  EXPECT_EQ(oc::decode_bitwise(t, 1).text, "T");
  EXPECT_EQ(oc::decode_bitwise({}, 2).text, std::string(2, '\0'));
  const std::string msg = "This is my first message!";
  EXPECT_EQ(perfect_bitwise_channel(oc::encode_bitwise(msg)), msg);
}

TEST(DecodeBitwise, DuplicateChargeWarns) {
  const std::vector<oc::ChargeDetection> det{{0, 2}, {0, 2}};
  const auto out = oc::decode_bitwise(det, 1);
  EXPECT_EQ(out.text, "@");
  ASSERT_EQ(out.warnings.size(), 1u);
  EXPECT_NE(out.warnings[0].find("already set"), std::string::npos);
}

TEST(DecodeBitwise, BadDetectionsRejected) {
  const std::vector<oc::ChargeDetection> far{{3, 2}};
  EXPECT_THROW(oc::decode_bitwise(far, 1), std::out_of_range);
  const std::vector<oc::ChargeDetection> big{{0, 9}};
  EXPECT_THROW(oc::decode_bitwise(big, 1), std::out_of_range);
}

TEST(DecodeBytewise, AlphabetLookupAndImage) {
  const std::vector<std::uint8_t> alphabet{'0', '1'};
  const std::vector<int> ids{1, 0, 0, 1};
  const auto text = oc::decode_bytewise(ids, alphabet);
  EXPECT_EQ(text, "1001");
  EXPECT_EQ(oc::text_to_pixels(text), (std::vector<std::uint8_t>{255, 0, 0, 255}));
  EXPECT_EQ(oc::decode_bytewise({}, alphabet), "");
  const std::vector<int> bad{2};
  EXPECT_THROW(oc::decode_bytewise(bad, alphabet), std::out_of_range);
}

TEST(RoundTrip, RandomByteStringsBothModes) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_bytes(rng, static_cast<std::size_t>(trial % 40));
    EXPECT_EQ(perfect_bitwise_channel(oc::encode_bitwise(s)), s);
    EXPECT_EQ(perfect_bitwise_channel(oc::encode_bitwise(s, oc::ZeroBits::explicit_)), s);
    EXPECT_EQ(perfect_bytewise_channel(oc::encode_bytewise(s)), s);
    if (!s.empty()) {
      EXPECT_EQ(oc::mse(oc::as_bytes(perfect_bitwise_channel(oc::encode_bitwise(s))), oc::as_bytes(s)), 0.0);
    }
  }
}

TEST(RoundTrip, SymbolSequenceJson) {
  const auto seq = oc::encode_bytewise(std::string_view("9\0!", 3));
  EXPECT_EQ(oc::symbol_sequence_from_json(nlohmann::json::parse(oc::to_json(seq).dump())), seq);
  const auto bits = oc::encode_bitwise("Hi");
  EXPECT_EQ(oc::symbol_sequence_from_json(nlohmann::json::parse(oc::to_json(bits).dump())), bits);
}

TEST(Pixels, ThresholdAt128) {
  const std::vector<std::uint8_t> px{0, 127, 128, 255};
  EXPECT_EQ(oc::pixels_to_text(px), "0011");
  EXPECT_EQ(oc::pixels_to_text(std::vector<std::uint8_t>(5, 255)), "11111");
  EXPECT_EQ(oc::text_to_pixels("1x0"), (std::vector<std::uint8_t>{255, 128, 0}));
}

TEST(Mse, Examples) {
  const std::vector<std::uint8_t> y{48, 57}, yhat{48, 49};
  EXPECT_DOUBLE_EQ(oc::mse(y, y), 0.0);
  EXPECT_DOUBLE_EQ(oc::mse(yhat, y), 32.0);
  EXPECT_DOUBLE_EQ(oc::mse(std::vector<std::uint8_t>{7}, std::vector<std::uint8_t>{8}), 1.0);
}

TEST(Mse, Errors) {
  const std::vector<std::uint8_t> a{1}, b{1, 2}, e{};
  EXPECT_THROW(oc::mse(a, b), std::invalid_argument);
  EXPECT_THROW(oc::mse(e, e), std::invalid_argument);
}

TEST(Mse, NonNegativeAndZeroOnlyForEquality) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_bytes(rng, 8), b = random_bytes(rng, 8);
    const double m = oc::mse(oc::as_bytes(a), oc::as_bytes(b));
    EXPECT_GE(m, 0.0);
    EXPECT_EQ(m == 0.0, a == b);
  }
}
