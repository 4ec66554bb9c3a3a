#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "oamcrypt/io/pgm.hpp"
#include "oamcrypt/mode/field.hpp"

namespace oamcrypt {

/// Writes `<stem>.json` (width, height, extents, layout) and `<stem>.bin`
/// holding the real plane followed by the imaginary plane as little-endian
/// float64, row-major.
inline void export_field(const ComplexField& f, const std::string& stem) {
  nlohmann::ordered_json header;
  header["width"] = f.grid.width;
  header["height"] = f.grid.height;
  header["extent_x_m"] = f.grid.extent_x;
  header["extent_y_m"] = f.grid.extent_y;
  header["dtype"] = "float64-le";
  header["planes"] = {"real", "imag"};
  header["data"] = stem.substr(stem.find_last_of('/') + 1) + ".bin";
  std::ofstream hs(stem + ".json");
  if (!hs) throw std::runtime_error("cannot open " + stem + ".json");
  hs << header.dump(2) << '\n';

  std::string buf(f.values.size() * 2 * sizeof(double), '\0');
  auto put = [&buf](std::size_t slot, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) buf[slot * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
  };
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    put(k, f.values[k].real());
    put(f.values.size() + k, f.values[k].imag());
  }
  std::ofstream bs(stem + ".bin", std::ios::binary);
  if (!bs) throw std::runtime_error("cannot open " + stem + ".bin");
  bs.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline ComplexField import_field(const std::string& stem) {
  std::ifstream hs(stem + ".json");
  if (!hs) throw std::runtime_error("cannot open " + stem + ".json");
  const auto header = nlohmann::json::parse(hs);
  Grid g{header.at("width").get<int>(), header.at("height").get<int>(),
         header.at("extent_x_m").get<double>(), header.at("extent_y_m").get<double>()};
  ComplexField f(g);
  std::ifstream bs(stem + ".bin", std::ios::binary);
  std::string buf((std::istreambuf_iterator<char>(bs)), std::istreambuf_iterator<char>());
  if (buf.size() != f.values.size() * 2 * sizeof(double))
    throw std::runtime_error("field data size does not match header");
  auto get = [&buf](std::size_t slot) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[slot * 8 + b])) << (8 * b);
    return std::bit_cast<double>(bits);
  };
  for (std::size_t k = 0; k < f.values.size(); ++k)
    f.values[k] = {get(k), get(f.values.size() + k)};
  return f;
}

/// |psi|^2 scaled so the peak maps to 255.
inline GrayImage intensity_image(const ComplexField& f) {
  GrayImage img(f.grid.width, f.grid.height);
  double peak = 0.0;
  for (const auto& v : f.values) peak = std::max(peak, std::norm(v));
  if (peak <= 0.0) return img;
  for (std::size_t k = 0; k < f.values.size(); ++k)
    img.pixels[k] = static_cast<std::uint8_t>(std::lround(255.0 * std::norm(f.values[k]) / peak));
  return img;
}

}  // namespace oamcrypt
