#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace oamcrypt {

/// Bit position k (1 = MSB, 8 = LSB) is carried by LG charge +k.
inline constexpr int kBitsPerSymbol = 8;

inline constexpr int charge_for_bit(int bit_position) { return bit_position; }

/// Charges {+k : bit k of ch is set}, ascending.
inline std::vector<int> char_to_charges(std::uint8_t ch) {
  std::vector<int> out;
  for (int k = 1; k <= kBitsPerSymbol; ++k)
    if ((ch >> (kBitsPerSymbol - k)) & 1u) out.push_back(charge_for_bit(k));
  return out;
}

/// Inverse of char_to_charges. Throws on charges outside +1..+8.
inline std::uint8_t charges_to_char(std::span<const int> charges) {
  unsigned v = 0;
  for (int l : charges) {
    if (l < 1 || l > kBitsPerSymbol)
      throw std::out_of_range("charge " + std::to_string(l) + " is not in the +1..+8 alphabet");
    v |= 1u << (kBitsPerSymbol - l);
  }
  return static_cast<std::uint8_t>(v);
}

enum class SymbolKind { single_mode, superposition, null_symbol };

inline std::string_view to_string(SymbolKind k) {
  switch (k) {
    case SymbolKind::single_mode: return "single";
    case SymbolKind::superposition: return "superposition";
    case SymbolKind::null_symbol: return "null";
  }
  return "?";
}

inline SymbolKind symbol_kind_from(std::string_view s) {
  if (s == "single") return SymbolKind::single_mode;
  if (s == "superposition") return SymbolKind::superposition;
  if (s == "null") return SymbolKind::null_symbol;
  throw std::invalid_argument("unknown symbol kind '" + std::string(s) + "'");
}

struct SymbolRecord {
  SymbolKind kind = SymbolKind::single_mode;
  std::vector<int> charges;
  std::size_t char_index = 0;
  std::size_t slot = 0;
  std::uint8_t byte = 0;  // the character this record belongs to

  friend bool operator==(const SymbolRecord&, const SymbolRecord&) = default;
};

/// Transmission records plus the number of characters they describe (a
/// character with no set bits emits no records in bit-by-bit mode).
struct SymbolSequence {
  std::vector<SymbolRecord> records;
  std::size_t char_count = 0;

  bool empty() const { return records.empty() && char_count == 0; }
  friend bool operator==(const SymbolSequence&, const SymbolSequence&) = default;
};

/// What a 0-bit puts on the air in bit-by-bit mode.
enum class ZeroBits {
  silent,    // nothing; character boundaries travel in the record metadata
  explicit_  // one l = 0 frame per 0-bit
};

inline constexpr int kZeroBitCharge = 0;

inline ZeroBits zero_bits_from(std::string_view s) {
  if (s == "silent") return ZeroBits::silent;
  if (s == "explicit") return ZeroBits::explicit_;
  throw std::invalid_argument("zero-bit policy must be silent or explicit, got '" + std::string(s) + "'");
}

/// One single-mode record per 1-bit, charges ascending. With
/// ZeroBits::explicit_ every 0-bit also emits an l = 0 record in its bit slot.
inline SymbolSequence encode_bitwise(std::string_view text, ZeroBits zeros = ZeroBits::silent) {
  SymbolSequence seq;
  seq.char_count = text.size();
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto byte = static_cast<std::uint8_t>(text[i]);
    for (int k = 1; k <= kBitsPerSymbol; ++k) {
      const bool set = (byte >> (kBitsPerSymbol - k)) & 1u;
      if (set)
        seq.records.push_back({SymbolKind::single_mode, {charge_for_bit(k)}, i, seq.records.size(), byte});
      else if (zeros == ZeroBits::explicit_)
        seq.records.push_back({SymbolKind::single_mode, {kZeroBitCharge}, i, seq.records.size(), byte});
    }
  }
  return seq;
}

/// One superposition record per character; 0x00 becomes the null symbol.
inline SymbolSequence encode_bytewise(std::string_view text) {
  SymbolSequence seq;
  seq.char_count = text.size();
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto byte = static_cast<std::uint8_t>(text[i]);
    const auto kind = byte == 0 ? SymbolKind::null_symbol : SymbolKind::superposition;
    seq.records.push_back({kind, char_to_charges(byte), i, i, byte});
  }
  return seq;
}

/// Binary image pixels, row-major: white -> '1', black -> '0'.
inline std::string pixels_to_text(std::span<const std::uint8_t> pixels, int threshold = 128) {
  std::string out;
  out.reserve(pixels.size());
  for (auto p : pixels) out.push_back(p >= threshold ? '1' : '0');
  return out;
}

/// A received single-mode classification: charge identified for a character.
struct ChargeDetection {
  std::size_t char_index = 0;
  int charge = 0;
};

struct BitwiseDecode {
  std::string text;
  std::vector<std::string> warnings;
};

/// Sets the identified bit positions per character; unmentioned characters
/// decode to 0x00. A repeated charge within one character is reported.
inline BitwiseDecode decode_bitwise(std::span<const ChargeDetection> detections,
                                    std::size_t char_count) {
  BitwiseDecode out;
  std::vector<unsigned> bytes(char_count, 0u);
  for (const auto& d : detections) {
    if (d.char_index >= char_count)
      throw std::out_of_range("decode_bitwise: character index beyond message length");
    if (d.charge == kZeroBitCharge) continue;  // explicit 0-bit symbol
    if (d.charge < 1 || d.charge > kBitsPerSymbol)
      throw std::out_of_range("decode_bitwise: charge outside +1..+8");
    const unsigned bit = 1u << (kBitsPerSymbol - d.charge);
    if (bytes[d.char_index] & bit)
      out.warnings.push_back("character " + std::to_string(d.char_index) + ": bit for charge +" +
                             std::to_string(d.charge) + " already set");
    bytes[d.char_index] |= bit;
  }
  out.text.reserve(char_count);
  for (unsigned b : bytes) out.text.push_back(static_cast<char>(b));
  return out;
}

/// Maps classifier class ids back to characters through the class alphabet.
inline std::string decode_bytewise(std::span<const int> class_ids,
                                   std::span<const std::uint8_t> alphabet) {
  std::string out;
  out.reserve(class_ids.size());
  for (int id : class_ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= alphabet.size())
      throw std::out_of_range("decode_bytewise: class id " + std::to_string(id) +
                              " outside alphabet");
    out.push_back(static_cast<char>(alphabet[static_cast<std::size_t>(id)]));
  }
  return out;
}

/// Reassembles '1'/'0' characters into a row-major binary image (255 / 0).
/// Any other character maps to mid-gray 128 so corruption stays visible.
inline std::vector<std::uint8_t> text_to_pixels(std::string_view text) {
  std::vector<std::uint8_t> px;
  px.reserve(text.size());
  for (char c : text) px.push_back(c == '1' ? 255 : c == '0' ? 0 : 128);
  return px;
}

/// (1/n) * sum (received - transmitted)^2 over byte vectors.
inline double mse(std::span<const std::uint8_t> received, std::span<const std::uint8_t> transmitted) {
  if (received.size() != transmitted.size())
    throw std::invalid_argument("mse: byte vectors differ in length");
  if (received.empty()) throw std::invalid_argument("mse: empty byte vectors");
  double acc = 0.0;
  for (std::size_t i = 0; i < received.size(); ++i) {
    const double e = static_cast<double>(received[i]) - static_cast<double>(transmitted[i]);
    acc += e * e;
  }
  return acc / static_cast<double>(received.size());
}

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline nlohmann::ordered_json to_json(const SymbolSequence& seq) {
  nlohmann::ordered_json j;
  j["char_count"] = seq.char_count;
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : seq.records) {
    j["records"].push_back({{"slot", r.slot},
                            {"kind", to_string(r.kind)},
                            {"charges", r.charges},
                            {"char_index", r.char_index},
                            {"byte", r.byte}});
  }
  return j;
}

inline SymbolSequence symbol_sequence_from_json(const nlohmann::json& j) {
  SymbolSequence seq;
  seq.char_count = j.at("char_count").get<std::size_t>();
  for (const auto& r : j.at("records")) {
    seq.records.push_back({symbol_kind_from(r.at("kind").get<std::string>()),
                           r.at("charges").get<std::vector<int>>(),
                           r.at("char_index").get<std::size_t>(), r.at("slot").get<std::size_t>(),
                           r.at("byte").get<std::uint8_t>()});
  }
  return seq;
}

}  // namespace oamcrypt
