#include <gtest/gtest.h>

#include "oamcrypt/decoder/crosstalk.hpp"

namespace oc = oamcrypt;

namespace {

const oc::FiberSpec kFiber{};

}  // namespace

TEST(RawCrosstalk, UnmixedCenteredChannelIsDiagonal) {
  auto spec = oc::ChannelSpec::for_fiber(kFiber);
  spec.lateral_offset = 0.0;
  spec.theta_a = spec.theta_b = spec.jitter = 0.0;
  const oc::FiberChannel ch(spec, oc::CameraSpec::for_fiber(kFiber), 256);
  auto opt = oc::CrosstalkOptions::range(-2, 2, 10.0);
  opt.grid_samples = 256;
  const auto m = oc::raw_crosstalk(ch, opt);
  ASSERT_EQ(m.rows(), 5);
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_GT(m(i, i), 0.999) << i;
}

TEST(RawCrosstalk, DefaultChannelErasesDiagonal) {
  const oc::FiberChannel ch(oc::ChannelSpec::for_fiber(kFiber), oc::CameraSpec::for_fiber(kFiber));
  const auto m = oc::raw_crosstalk(ch, oc::CrosstalkOptions::range(-10, 10, 0.5));
  ASSERT_EQ(m.rows(), 21);
  ASSERT_EQ(m.cols(), 21);
  EXPECT_LE(m.diagonal().mean(), 0.3);
  for (Eigen::Index r = 0; r < 21; ++r) EXPECT_NEAR(m.row(r).sum(), 1.0, 1e-12);
  EXPECT_GE(m.minCoeff(), 0.0);
}

TEST(RawCrosstalk, Deterministic) {
  const oc::FiberChannel ch(oc::ChannelSpec::for_fiber(kFiber), oc::CameraSpec::for_fiber(kFiber), 256);
  auto opt = oc::CrosstalkOptions::range(-3, 3, 5.0);
  opt.grid_samples = 128;
  EXPECT_EQ(oc::raw_crosstalk(ch, opt), oc::raw_crosstalk(ch, opt));
}
