#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oamcrypt {

/// 8-bit grayscale image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

inline std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  return out;
}

inline void write_pgm(const std::string& path, const GrayImage& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  const auto bytes = encode_pgm(img);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

namespace detail {

inline std::string pgm_token(std::istream& is) {
  std::string tok;
  char c;
  while (is.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(is, skip);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

}  // namespace detail

/// Parses binary (P5) or plain (P2) graymaps with maxval <= 255. Values are
/// rescaled to 0..255 when maxval is smaller.
inline GrayImage decode_pgm(const std::string& bytes) {
  std::istringstream is(bytes);
  const std::string magic = detail::pgm_token(is);
  if (magic != "P5" && magic != "P2") throw std::runtime_error("not a PGM (P5/P2) image");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(detail::pgm_token(is));
    h = std::stoi(detail::pgm_token(is));
    maxval = std::stoi(detail::pgm_token(is));
  } catch (const std::exception&) {
    throw std::runtime_error("malformed PGM header");
  }
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
    throw std::runtime_error("unsupported PGM dimensions or maxval");
  GrayImage img(w, h);
  auto scale = [maxval](int v) {
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  };
  if (magic == "P5") {
    // exactly one whitespace byte follows maxval; pgm_token consumed it
    for (auto& p : img.pixels) {
      char c;
      if (!is.get(c)) throw std::runtime_error("truncated PGM pixel data");
      p = scale(static_cast<unsigned char>(c));
    }
  } else {
    for (auto& p : img.pixels) {
      const auto tok = detail::pgm_token(is);
      if (tok.empty()) throw std::runtime_error("truncated PGM pixel data");
      p = scale(std::min(std::stoi(tok), maxval));
    }
  }
  return img;
}

inline GrayImage read_pgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return decode_pgm(ss.str());
}

}  // namespace oamcrypt
