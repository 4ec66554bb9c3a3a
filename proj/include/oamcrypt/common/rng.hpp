#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace oamcrypt {

/// splitmix64 finalizer; used to derive independent sub-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over the purpose tag so tags can be plain string literals.
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Identifies one random sub-stream: (purpose, class id, frame index) under a
/// master seed. Streams depend only on the key, never on generation order.
struct StreamKey {
  std::string_view tag;
  std::uint64_t class_id = 0;
  std::uint64_t frame_index = 0;
};

constexpr std::uint64_t derive_seed(std::uint64_t master, const StreamKey& key) noexcept {
  std::uint64_t s = mix64(master ^ tag_hash(key.tag));
  s = mix64(s ^ mix64(key.class_id + 0x51ed2701ULL));
  s = mix64(s ^ mix64(key.frame_index + 0x2545f491ULL));
  return s;
}

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t master, const StreamKey& key) {
  return Rng(derive_seed(master, key));
}

}  // namespace oamcrypt
