#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "oamcrypt/io/pgm.hpp"

namespace oamcrypt {

inline constexpr int kFeatureCols = 9;
inline constexpr int kFeatureRows = 7;
inline constexpr int kFeatureDim = kFeatureCols * kFeatureRows;

/// 8-bit interleaved RGB image, row-major.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}
};

/// Rec. 601 luma, rounded.
inline GrayImage to_grayscale(const RgbImage& in) {
  GrayImage out(in.width, in.height);
  for (std::size_t k = 0; k < out.pixels.size(); ++k) {
    const double y = 0.2989 * in.rgb[3 * k] + 0.5870 * in.rgb[3 * k + 1] + 0.1140 * in.rgb[3 * k + 2];
    out.pixels[k] = static_cast<std::uint8_t>(std::lround(std::min(y, 255.0)));
  }
  return out;
}

/// Block-averages a frame onto a 9 (horizontal) x 7 (vertical) grid of tiles
/// with boundaries at round(k W / 9) and round(k H / 7), scales to [0, 1] and
/// stacks the result row-major into a 63-vector.
inline Eigen::VectorXd downsample_9x7(const GrayImage& img) {
  if (img.width < kFeatureCols || img.height < kFeatureRows)
    throw std::invalid_argument("downsample_9x7: frame smaller than 9x7");
  auto edge = [](int k, int n, int parts) {
    return static_cast<int>(std::lround(static_cast<double>(k) * n / parts));
  };
  Eigen::VectorXd out(kFeatureDim);
  for (int ty = 0; ty < kFeatureRows; ++ty) {
    const int y0 = edge(ty, img.height, kFeatureRows), y1 = edge(ty + 1, img.height, kFeatureRows);
    for (int tx = 0; tx < kFeatureCols; ++tx) {
      const int x0 = edge(tx, img.width, kFeatureCols), x1 = edge(tx + 1, img.width, kFeatureCols);
      double sum = 0.0;
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) sum += img.at(x, y);
      out[ty * kFeatureCols + tx] = sum / (255.0 * (x1 - x0) * (y1 - y0));
    }
  }
  return out;
}

/// Features for a batch of frames as columns.
inline Eigen::MatrixXd feature_matrix(const std::vector<GrayImage>& frames) {
  Eigen::MatrixXd x(kFeatureDim, static_cast<Eigen::Index>(frames.size()));
  for (std::size_t n = 0; n < frames.size(); ++n)
    x.col(static_cast<Eigen::Index>(n)) = downsample_9x7(frames[n]);
  return x;
}

}  // namespace oamcrypt
