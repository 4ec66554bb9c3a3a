#include <gtest/gtest.h>

#include <set>

#include "oamcrypt/common/rng.hpp"

namespace oc = oamcrypt;

TEST(Rng, StreamsDependOnlyOnKey) {
  auto a = oc::make_stream(42, {"dataset", 3, 17});
  auto b = oc::make_stream(42, {"dataset", 3, 17});
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a(), b());
}

TEST(Rng, DistinctKeysGiveDistinctSeeds) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t c = 0; c < 21; ++c)
    for (std::uint64_t f = 0; f < 500; ++f) seen.insert(oc::derive_seed(42, {"dataset", c, f}));
  EXPECT_EQ(seen.size(), 21u * 500u);
  EXPECT_NE(oc::derive_seed(42, {"a", 0, 0}), oc::derive_seed(42, {"b", 0, 0}));
  EXPECT_NE(oc::derive_seed(42, {"a", 1, 0}), oc::derive_seed(42, {"a", 0, 1}));
  EXPECT_NE(oc::derive_seed(42, {"a", 0, 0}), oc::derive_seed(43, {"a", 0, 0}));
}

TEST(Rng, TagHashIsFnv1a) {
  // FNV-1a 64 reference values
  EXPECT_EQ(oc::tag_hash(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(oc::tag_hash("a"), 0xaf63dc4c8601ec8cULL);
}
