#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oamcrypt/channel/channel.hpp"
#include "oamcrypt/codec/alphabet.hpp"
#include "oamcrypt/io/pgm.hpp"

namespace oamcrypt {

inline constexpr int kManifestVersion = 1;

/// A transmitted class: its display name and the LG charges superposed.
struct ClassSpec {
  std::string name;
  std::vector<int> charges;
  friend bool operator==(const ClassSpec&, const ClassSpec&) = default;
};

/// "l=+3", "l=0", "l=-7"
inline std::string charge_class_name(int l) {
  return "l=" + std::string(l > 0 ? "+" : "") + std::to_string(l);
}

inline std::vector<ClassSpec> single_mode_classes(int l_min, int l_max) {
  if (l_min > l_max) throw std::invalid_argument("single_mode_classes: empty charge range");
  std::vector<ClassSpec> out;
  for (int l = l_min; l <= l_max; ++l) out.push_back({charge_class_name(l), {l}});
  return out;
}

/// One class per character, named by the character, carrying its alphabet
/// superposition.
inline std::vector<ClassSpec> character_classes(std::string_view chars) {
  std::vector<ClassSpec> out;
  for (char c : chars) {
    const auto byte = static_cast<std::uint8_t>(c);
    if (byte == 0) throw std::invalid_argument("character_classes: null byte has no field");
    out.push_back({std::string(1, c), char_to_charges(byte)});
  }
  return out;
}

struct DatasetSample {
  std::string path;  // relative to the manifest directory
  int label = 0;
  double displacement_mm = 0.0;
  std::uint64_t frame_index = 0;
};

struct DatasetManifest {
  int version = kManifestVersion;
  std::string kind;  // "single" | "characters"
  std::vector<ClassSpec> classes;
  std::vector<DatasetSample> samples;
  ChannelSpec channel;
  CameraSpec camera;
  double step_mm = 0.1;

  std::vector<std::string> class_names() const {
    std::vector<std::string> out;
    for (const auto& c : classes) out.push_back(c.name);
    return out;
  }

  std::vector<int> labels() const {
    std::vector<int> out;
    for (const auto& s : samples) out.push_back(s.label);
    return out;
  }

  /// Labels contiguous from 0 and every class equally represented.
  void require_balanced() const {
    std::vector<std::size_t> counts(classes.size(), 0);
    for (const auto& s : samples) {
      if (s.label < 0 || static_cast<std::size_t>(s.label) >= classes.size())
        throw std::invalid_argument("manifest: label outside the class table");
      ++counts[static_cast<std::size_t>(s.label)];
    }
    for (std::size_t c = 0; c < counts.size(); ++c)
      if (counts[c] == 0 || counts[c] != counts[0])
        throw std::invalid_argument("manifest: unbalanced classes (class '" + classes[c].name +
                                    "' has " + std::to_string(counts[c]) + " samples, class '" +
                                    classes[0].name + "' has " + std::to_string(counts[0]) + ")");
  }
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<GrayImage> frames;  // parallel to manifest.samples
};

/// Displacements {0, step, ..., d_max - step}; step must divide d_max.
inline std::vector<double> displacement_sweep(double step_mm, double max_mm) {
  if (!(step_mm > 0.0)) throw std::invalid_argument("sweep step must be > 0");
  const double ratio = max_mm / step_mm;
  const auto count = std::llround(ratio);
  if (count < 1 || std::abs(ratio - static_cast<double>(count)) > 1e-9 * ratio)
    throw std::invalid_argument("sweep step " + std::to_string(step_mm) +
                                " mm does not divide the maximum displacement");
  std::vector<double> d(static_cast<std::size_t>(count));
  for (long long k = 0; k < count; ++k) d[static_cast<std::size_t>(k)] = static_cast<double>(k) * step_mm;
  return d;
}

inline constexpr std::string_view kDatasetDomain = "dataset";

/// Renders one frame per (class, displacement). Frame streams are keyed by
/// (class id, frame index), so output is independent of generation order.
inline Dataset generate_dataset(const FiberChannel& channel, const std::vector<ClassSpec>& classes,
                                double step_mm, std::string kind) {
  Dataset ds;
  ds.manifest.kind = std::move(kind);
  ds.manifest.classes = classes;
  ds.manifest.channel = channel.spec();
  ds.manifest.camera = channel.camera();
  ds.manifest.step_mm = step_mm;
  const auto sweep = displacement_sweep(step_mm, channel.spec().max_displacement_mm);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const auto coupled = channel.couple(channel.input_field(classes[c].charges));
    for (std::size_t k = 0; k < sweep.size(); ++k) {
      auto frame = channel.transmit_coupled(coupled, sweep[k], {kDatasetDomain, c, k});
      char name[64];
      std::snprintf(name, sizeof name, "frames/c%02zu/f%05zu.pgm", c, k);
      ds.manifest.samples.push_back({name, static_cast<int>(c), sweep[k], k});
      ds.frames.push_back(std::move(frame.image));
    }
  }
  return ds;
}

inline Dataset generate_single_mode_dataset(int l_min, int l_max, const FiberChannel& channel,
                                            double step_mm) {
  return generate_dataset(channel, single_mode_classes(l_min, l_max), step_mm, "single");
}

inline Dataset generate_superposition_dataset(std::string_view chars, const FiberChannel& channel,
                                              double step_mm) {
  return generate_dataset(channel, character_classes(chars), step_mm, "characters");
}

// --- JSON --------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const FiberSpec& f) {
  return {{"core_radius_m", f.core_radius}, {"numerical_aperture", f.numerical_aperture},
          {"wavelength_m", f.wavelength},   {"length_m", f.length},
          {"n_core", f.n_core}};
}

inline FiberSpec fiber_from_json(const nlohmann::json& j) {
  FiberSpec f;
  f.core_radius = j.at("core_radius_m").get<double>();
  f.numerical_aperture = j.at("numerical_aperture").get<double>();
  f.wavelength = j.at("wavelength_m").get<double>();
  f.length = j.at("length_m").get<double>();
  f.n_core = j.at("n_core").get<double>();
  return f;
}

inline nlohmann::ordered_json to_json(const ChannelSpec& c) {
  return {{"fiber", to_json(c.fiber)},
          {"lateral_offset_m", c.lateral_offset},
          {"waist_m", c.waist},
          {"theta_a", c.theta_a},
          {"theta_b", c.theta_b},
          {"jitter", c.jitter},
          {"max_displacement_mm", c.max_displacement_mm},
          {"seed", c.seed}};
}

inline ChannelSpec channel_from_json(const nlohmann::json& j) {
  ChannelSpec c;
  c.fiber = fiber_from_json(j.at("fiber"));
  c.lateral_offset = j.at("lateral_offset_m").get<double>();
  c.waist = j.at("waist_m").get<double>();
  c.theta_a = j.at("theta_a").get<double>();
  c.theta_b = j.at("theta_b").get<double>();
  c.jitter = j.at("jitter").get<double>();
  c.max_displacement_mm = j.at("max_displacement_mm").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

inline nlohmann::ordered_json to_json(const CameraSpec& c) {
  return {{"width", c.width},           {"height", c.height},       {"bit_depth", c.bit_depth},
          {"noise_sigma", c.noise_sigma}, {"extent_x_m", c.extent_x}, {"extent_y_m", c.extent_y}};
}

inline CameraSpec camera_from_json(const nlohmann::json& j) {
  CameraSpec c;
  c.width = j.at("width").get<int>();
  c.height = j.at("height").get<int>();
  c.bit_depth = j.at("bit_depth").get<int>();
  c.noise_sigma = j.at("noise_sigma").get<double>();
  c.extent_x = j.at("extent_x_m").get<double>();
  c.extent_y = j.at("extent_y_m").get<double>();
  return c;
}

inline nlohmann::ordered_json to_json(const std::vector<ClassSpec>& classes) {
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < classes.size(); ++i)
    arr.push_back({{"id", i}, {"name", classes[i].name}, {"charges", classes[i].charges}});
  return arr;
}

inline std::vector<ClassSpec> classes_from_json(const nlohmann::json& j) {
  std::vector<ClassSpec> out;
  for (const auto& c : j) {
    if (c.at("id").get<std::size_t>() != out.size())
      throw std::runtime_error("class ids must be contiguous from 0");
    out.push_back({c.at("name").get<std::string>(), c.at("charges").get<std::vector<int>>()});
  }
  return out;
}

inline nlohmann::ordered_json to_json(const DatasetManifest& m) {
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["kind"] = m.kind;
  j["classes"] = to_json(m.classes);
  j["step_mm"] = m.step_mm;
  j["seed"] = m.channel.seed;
  j["channel"] = to_json(m.channel);
  j["camera"] = to_json(m.camera);
  j["samples"] = nlohmann::ordered_json::array();
  for (const auto& s : m.samples)
    j["samples"].push_back({{"path", s.path},
                            {"label", s.label},
                            {"displacement_mm", s.displacement_mm},
                            {"frame_index", s.frame_index}});
  return j;
}

inline DatasetManifest manifest_from_json(const nlohmann::json& j) {
  DatasetManifest m;
  m.version = j.at("version").get<int>();
  if (m.version != kManifestVersion)
    throw std::runtime_error("unsupported manifest version " + std::to_string(m.version));
  m.kind = j.at("kind").get<std::string>();
  m.classes = classes_from_json(j.at("classes"));
  m.step_mm = j.at("step_mm").get<double>();
  m.channel = channel_from_json(j.at("channel"));
  m.camera = camera_from_json(j.at("camera"));
  for (const auto& s : j.at("samples"))
    m.samples.push_back({s.at("path").get<std::string>(), s.at("label").get<int>(),
                         s.at("displacement_mm").get<double>(),
                         s.at("frame_index").get<std::uint64_t>()});
  return m;
}

/// Writes frames as P5 PGM files and `manifest.json` under dir.
inline void write_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::runtime_error("cannot create dataset directory " + dir.string());
  for (std::size_t i = 0; i < ds.frames.size(); ++i) {
    const fs::path p = dir / ds.manifest.samples[i].path;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create " + p.parent_path().string());
    write_pgm(p.string(), ds.frames[i]);
  }
  std::ofstream os(dir / "manifest.json");
  if (!os) throw std::runtime_error("cannot write manifest in " + dir.string());
  os << to_json(ds.manifest).dump(1) << '\n';
}

/// Loads `manifest.json` (or the given manifest file) and every frame it
/// references.
inline Dataset load_dataset(const std::filesystem::path& where) {
  namespace fs = std::filesystem;
  const fs::path manifest_path = fs::is_directory(where) ? where / "manifest.json" : where;
  std::ifstream is(manifest_path);
  if (!is) throw std::runtime_error("cannot open manifest " + manifest_path.string());
  Dataset ds;
  ds.manifest = manifest_from_json(nlohmann::json::parse(is));
  const fs::path root = manifest_path.parent_path();
  for (const auto& s : ds.manifest.samples) {
    const fs::path p = root / s.path;
    if (!fs::exists(p)) throw std::runtime_error("manifest references missing file " + p.string());
    ds.frames.push_back(read_pgm(p.string()));
  }
  return ds;
}

}  // namespace oamcrypt
