#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "oamcrypt/common/rng.hpp"
#include "oamcrypt/io/pgm.hpp"
#include "oamcrypt/mode/field.hpp"

namespace oamcrypt {

/// Simulated grayscale sensor looking at the fiber end face.
struct CameraSpec {
  int width = 189;   // 9 x 21
  int height = 147;  // 7 x 21
  int bit_depth = 8;
  double noise_sigma = 0.01;  // fraction of full scale
  double extent_x = 20e-6;    // meters
  double extent_y = 20e-6 * 147.0 / 189.0;

  /// Square pixels spanning four core radii horizontally.
  static CameraSpec for_fiber(const FiberSpec& fiber) {
    CameraSpec cam;
    cam.extent_x = 4.0 * fiber.core_radius;
    cam.extent_y = cam.extent_x * cam.height / cam.width;
    return cam;
  }

  void validate() const {
    if (width <= 0 || height <= 0) throw std::invalid_argument("CameraSpec: sensor size must be > 0");
    if (bit_depth != 8) throw std::invalid_argument("CameraSpec: only 8-bit sensors are supported");
    if (!(noise_sigma >= 0.0) || !(noise_sigma < 1.0))
      throw std::invalid_argument("CameraSpec: noise sigma must be in [0, 1)");
    if (!(extent_x > 0.0) || !(extent_y > 0.0))
      throw std::invalid_argument("CameraSpec: extent must be > 0");
  }

  Grid grid() const { return {width, height, extent_x, extent_y}; }
};

struct FrameMeta {
  int label = -1;
  double displacement_mm = 0.0;
  std::uint64_t frame_index = 0;
  std::uint64_t seed = 0;
};

struct CameraFrame {
  GrayImage image;
  FrameMeta meta;
};

/// Intensity normalized to peak = full scale, plus additive Gaussian noise,
/// clamped and quantized. A zero field yields an all-zero frame.
inline CameraFrame capture(const ComplexField& field, const CameraSpec& cam, Rng& noise) {
  cam.validate();
  if (field.grid.width != cam.width || field.grid.height != cam.height)
    throw std::invalid_argument("capture: field is not sampled on the camera grid");
  CameraFrame frame{GrayImage(cam.width, cam.height), {}};
  double peak = 0.0;
  for (const auto& v : field.values) peak = std::max(peak, std::norm(v));
  if (!(peak > 0.0)) return frame;
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double full = 255.0;
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    double v = std::norm(field.values[k]) / peak;
    if (cam.noise_sigma > 0.0) v += cam.noise_sigma * gauss(noise);
    v = std::clamp(v, 0.0, 1.0);
    frame.image.pixels[k] = static_cast<std::uint8_t>(std::lround(v * full));
  }
  return frame;
}

}  // namespace oamcrypt
