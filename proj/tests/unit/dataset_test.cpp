#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oamcrypt/channel/dataset.hpp"

namespace oc = oamcrypt;
namespace fs = std::filesystem;

namespace {

const oc::FiberSpec kFiber{};

const oc::FiberChannel& channel() {
  static const oc::FiberChannel ch(oc::ChannelSpec::for_fiber(kFiber), oc::CameraSpec::for_fiber(kFiber), 256);
  return ch;
}

fs::path scratch_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("oamcrypt_ds_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Sweep, DefaultStepsGiveFrameCounts) {
  EXPECT_EQ(oc::displacement_sweep(0.10, 50.0).size(), 500u);
  EXPECT_EQ(oc::displacement_sweep(0.25, 50.0).size(), 200u);
  const auto s = oc::displacement_sweep(0.25, 50.0);
  EXPECT_DOUBLE_EQ(s.front(), 0.0);
  EXPECT_DOUBLE_EQ(s.back(), 49.75);
}

TEST(Sweep, StepMustDivideRange) {
  EXPECT_THROW(oc::displacement_sweep(0.3, 50.0), std::invalid_argument);
  EXPECT_THROW(oc::displacement_sweep(0.0, 50.0), std::invalid_argument);
  EXPECT_THROW(oc::displacement_sweep(60.0, 50.0), std::invalid_argument);
}

TEST(Classes, SingleModeRangeNamesAndCount) {
  const auto cls = oc::single_mode_classes(-10, 10);
  ASSERT_EQ(cls.size(), 21u);
  EXPECT_EQ(cls.front().name, "l=-10");
  EXPECT_EQ(cls[10].name, "l=0");
  EXPECT_EQ(cls.back().name, "l=+10");
  EXPECT_EQ(cls.back().charges, std::vector<int>{10});
}

TEST(Classes, DigitsAreSuperpositionsOfTwoToFiveModes) {
  const auto cls = oc::character_classes("0123456789");
  ASSERT_EQ(cls.size(), 10u);
  for (const auto& c : cls) {
    EXPECT_GE(c.charges.size(), 2u) << c.name;
    EXPECT_LE(c.charges.size(), 5u) << c.name;
  }
  EXPECT_EQ(cls[9].charges, (std::vector<int>{3, 4, 5, 8}));
  EXPECT_THROW(oc::character_classes(std::string_view("\0", 1)), std::invalid_argument);
}

TEST(Dataset, CountsLabelsAndBalance) {
  const auto ds = oc::generate_single_mode_dataset(-2, 2, channel(), 10.0);
  EXPECT_EQ(ds.frames.size(), 25u);
  EXPECT_EQ(ds.manifest.classes.size(), 5u);
  EXPECT_NO_THROW(ds.manifest.require_balanced());
  EXPECT_EQ(ds.manifest.samples[7].label, 1);
  EXPECT_EQ(ds.manifest.samples[7].frame_index, 2u);
  EXPECT_DOUBLE_EQ(ds.manifest.samples[7].displacement_mm, 20.0);
  EXPECT_EQ(ds.manifest.samples[7].path, "frames/c01/f00002.pgm");
}

TEST(Dataset, FramesIndependentOfGenerationOrder) {
  const auto all = oc::generate_single_mode_dataset(-2, 2, channel(), 10.0);
  const auto again = oc::generate_single_mode_dataset(-2, 2, channel(), 10.0);
  EXPECT_EQ(all.frames, again.frames);
  // class 3 (l=+1), frame 3 (d=30 mm) rendered on its own from the same key
  const auto c = channel().couple(channel().input_field({1}));
  EXPECT_EQ(channel().transmit_coupled(c, 30.0, {oc::kDatasetDomain, 3, 3}).image, all.frames[3 * 5 + 3]);
}

TEST(Dataset, SuperpositionDatasetIsDeterministic) {
  const auto a = oc::generate_superposition_dataset("09", channel(), 25.0);
  const auto b = oc::generate_superposition_dataset("09", channel(), 25.0);
  EXPECT_EQ(a.frames.size(), 4u);
  EXPECT_EQ(a.frames, b.frames);
  EXPECT_EQ(a.manifest.kind, "characters");
  EXPECT_EQ(a.manifest.class_names(), (std::vector<std::string>{"0", "9"}));
}

TEST(Dataset, WriteLoadRoundTripAndByteIdenticalRegeneration) {
  const auto ds = oc::generate_single_mode_dataset(-1, 1, channel(), 12.5);
  const auto d1 = scratch_dir("w1"), d2 = scratch_dir("w2");
  oc::write_dataset(ds, d1);
  oc::write_dataset(oc::generate_single_mode_dataset(-1, 1, channel(), 12.5), d2);
  EXPECT_EQ(slurp(d1 / "manifest.json"), slurp(d2 / "manifest.json"));
  for (const auto& s : ds.manifest.samples) EXPECT_EQ(slurp(d1 / s.path), slurp(d2 / s.path));

  const auto back = oc::load_dataset(d1);
  EXPECT_EQ(back.frames, ds.frames);
  EXPECT_EQ(back.manifest.classes, ds.manifest.classes);
  EXPECT_EQ(back.manifest.labels(), ds.manifest.labels());
  EXPECT_EQ(back.manifest.channel.lateral_offset, ds.manifest.channel.lateral_offset);  // full precision
  EXPECT_EQ(back.manifest.channel.seed, ds.manifest.channel.seed);
  EXPECT_EQ(back.manifest.camera.extent_y, ds.manifest.camera.extent_y);
  EXPECT_EQ(oc::load_dataset(d1 / "manifest.json").frames.size(), ds.frames.size());
}

TEST(Dataset, ManifestJsonFields) {
  const auto ds = oc::generate_single_mode_dataset(0, 1, channel(), 25.0);
  const auto j = oc::to_json(ds.manifest);
  for (const char* key : {"version", "classes", "samples", "channel", "camera", "seed"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["samples"][0]["path"], "frames/c00/f00000.pgm");
}

TEST(Dataset, MissingFrameFileReported) {
  const auto ds = oc::generate_single_mode_dataset(0, 1, channel(), 25.0);
  const auto d = scratch_dir("missing");
  oc::write_dataset(ds, d);
  fs::remove(d / ds.manifest.samples[1].path);
  EXPECT_THROW(oc::load_dataset(d), std::runtime_error);
  EXPECT_THROW(oc::load_dataset(scratch_dir("nothing")), std::runtime_error);
}

TEST(Dataset, UnwritableDirectoryReported) {
  const auto ds = oc::generate_single_mode_dataset(0, 0, channel(), 25.0);
  const auto file = scratch_dir("blocker");
  std::ofstream(file.string()) << "x";
  EXPECT_THROW(oc::write_dataset(ds, file / "sub"), std::runtime_error);
}

TEST(Dataset, UnbalancedManifestRejected) {
  auto ds = oc::generate_single_mode_dataset(0, 1, channel(), 25.0);
  ds.manifest.samples.pop_back();
  EXPECT_THROW(ds.manifest.require_balanced(), std::invalid_argument);
  ds.manifest.samples.back().label = 5;
  EXPECT_THROW(ds.manifest.require_balanced(), std::invalid_argument);
}
