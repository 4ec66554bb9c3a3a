#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oamcrypt/channel/channel.hpp"
#include "oamcrypt/channel/dataset.hpp"
#include "oamcrypt/codec/alphabet.hpp"
#include "oamcrypt/decoder/evaluate.hpp"
#include "oamcrypt/decoder/model_io.hpp"
#include "oamcrypt/decoder/preprocess.hpp"
#include "oamcrypt/decoder/train.hpp"

namespace oamcrypt {

struct TrainOutcome {
  ModelBundle bundle;
  Evaluation test;
  SplitIndices split;
  TrainLog log;
};

/// Preprocess, stratified split, SCG training and test evaluation for a
/// balanced dataset.
inline TrainOutcome train_on_dataset(const Dataset& ds, const TrainConfig& cfg) {
  ds.manifest.require_balanced();
  LabeledSet all{feature_matrix(ds.frames), ds.manifest.labels()};
  auto split = split_dataset(all.labels, static_cast<int>(ds.manifest.classes.size()),
                             cfg.fractions, cfg.seed);
  const auto train = all.subset(split.train);
  const auto val = all.subset(split.validation);
  const auto test = all.subset(split.test);
  auto result = scg_train(train, val, ds.manifest.class_names(), cfg);

  TrainOutcome out;
  out.bundle.model = std::move(result.model);
  out.bundle.classes = ds.manifest.classes;
  out.bundle.channel = ds.manifest.channel;
  out.bundle.camera = ds.manifest.camera;
  out.bundle.training = training_summary(result.log, cfg);
  out.test = test.size() > 0 ? evaluate(out.bundle.model, test.x, test.labels) : Evaluation{};
  out.bundle.training["test_accuracy"] = out.test.accuracy;
  out.bundle.training["test_samples"] = test.size();
  out.split = std::move(split);
  out.log = std::move(result.log);
  return out;
}

/// Displacement applied to each transmitted symbol.
struct StrainSchedule {
  enum class Kind { random, fixed, ramp } kind = Kind::random;
  double fixed_mm = 0.0;

  /// "random", "ramp" or "fixed:<mm>"
  static StrainSchedule parse(const std::string& s) {
    if (s == "random") return {Kind::random, 0.0};
    if (s == "ramp") return {Kind::ramp, 0.0};
    if (s.rfind("fixed:", 0) == 0) {
      try {
        return {Kind::fixed, std::stod(s.substr(6))};
      } catch (const std::exception&) {
      }
    }
    throw std::invalid_argument("strain schedule must be random, ramp or fixed:<mm>, got '" + s + "'");
  }

  double displacement(std::size_t slot, std::size_t slots, double max_mm, std::uint64_t seed) const {
    switch (kind) {
      case Kind::fixed: return fixed_mm;
      case Kind::ramp:
        return slots > 1 ? max_mm * static_cast<double>(slot) / static_cast<double>(slots - 1) : 0.0;
      case Kind::random: {
        auto rng = make_stream(seed, {"schedule/strain", 0, slot});
        return std::uniform_real_distribution<double>(0.0, max_mm)(rng);
      }
    }
    return 0.0;
  }
};

/// Bob's side: preprocessing plus the trained network.
class Receiver {
 public:
  explicit Receiver(ModelBundle bundle) : bundle_(std::move(bundle)) { bundle_.model.validate(); }

  struct Decision {
    int class_id = 0;
    double confidence = 0.0;
  };

  Decision classify(const GrayImage& frame) const {
    const auto p = forward(bundle_.model, downsample_9x7(frame));
    const int c = argmax(p);
    return {c, p[c]};
  }

  const ModelBundle& bundle() const { return bundle_; }
  const std::string& class_name(int id) const {
    return bundle_.model.class_names[static_cast<std::size_t>(id)];
  }

 private:
  ModelBundle bundle_;
};

enum class TransmissionMode { bitwise, bytewise };

inline TransmissionMode transmission_mode_from(const std::string& s) {
  if (s == "bitwise") return TransmissionMode::bitwise;
  if (s == "bytewise") return TransmissionMode::bytewise;
  throw std::invalid_argument("mode must be bitwise or bytewise, got '" + s + "'");
}

struct SymbolOutcome {
  std::size_t slot = 0;
  std::size_t char_index = 0;
  std::string truth;
  std::string predicted;
  double confidence = 0.0;
  double displacement_mm = 0.0;
};

struct TransmissionReport {
  std::string mode;
  std::vector<std::uint8_t> sent;
  std::vector<std::uint8_t> received;
  std::vector<SymbolOutcome> symbols;
  double symbol_accuracy = 0.0;
  std::optional<double> mse;
  std::vector<std::string> warnings;
  int image_width = 0;
  int image_height = 0;
  double elapsed_ms = 0.0;  // not serialized; reports stay byte-identical across runs
};

inline nlohmann::ordered_json to_json(const TransmissionReport& r) {
  nlohmann::ordered_json j;
  j["mode"] = r.mode;
  j["sent_text"] = std::string(r.sent.begin(), r.sent.end());
  j["received_text"] = std::string(r.received.begin(), r.received.end());
  j["sent_bytes"] = r.sent;
  j["received_bytes"] = r.received;
  if (r.image_width > 0) j["image"] = {{"width", r.image_width}, {"height", r.image_height}};
  j["symbol_count"] = r.symbols.size();
  j["symbol_accuracy"] = r.symbol_accuracy;
  j["mse"] = r.mse ? nlohmann::ordered_json(*r.mse) : nlohmann::ordered_json(nullptr);
  j["warnings"] = r.warnings;
  j["symbols"] = nlohmann::ordered_json::array();
  for (const auto& s : r.symbols)
    j["symbols"].push_back({{"slot", s.slot},
                            {"char_index", s.char_index},
                            {"true", s.truth},
                            {"predicted", s.predicted},
                            {"confidence", s.confidence},
                            {"displacement_mm", s.displacement_mm}});
  return j;
}

inline std::string dump_report(const TransmissionReport& r) {
  return to_json(r).dump(1, ' ', false, nlohmann::json::error_handler_t::replace);
}

inline constexpr std::string_view kTransmitDomain = "transmit";

namespace detail {

inline std::string printable(std::uint8_t b) {
  if (b >= 0x20 && b < 0x7f) return std::string(1, static_cast<char>(b));
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02x", b);
  return buf;
}

}  // namespace detail

/// Alice encodes, the channel encrypts each symbol at its scheduled strain,
/// Bob classifies and decodes. Decoding errors are reported, not thrown;
/// configuration problems (model cannot represent the message) throw.
inline TransmissionReport send_text(const FiberChannel& channel, const Receiver& bob,
                                    std::string_view message, TransmissionMode mode,
                                    const StrainSchedule& schedule, std::uint64_t run_seed,
                                    ZeroBits zeros = ZeroBits::silent) {
  const auto start = std::chrono::steady_clock::now();
  const auto& classes = bob.bundle().classes;
  if (classes.size() != static_cast<std::size_t>(bob.bundle().model.class_count()))
    throw std::invalid_argument("model file lacks a class table matching its outputs");

  TransmissionReport rep;
  rep.mode = mode == TransmissionMode::bitwise ? "bitwise" : "bytewise";
  rep.sent.assign(message.begin(), message.end());
  const auto seq =
      mode == TransmissionMode::bitwise ? encode_bitwise(message, zeros) : encode_bytewise(message);

  // class lookup keyed by the charge set a class transmits
  std::map<std::vector<int>, int> class_of;
  for (std::size_t c = 0; c < classes.size(); ++c) class_of[classes[c].charges] = static_cast<int>(c);
  for (const auto& r : seq.records)
    if (r.kind != SymbolKind::null_symbol && !class_of.contains(r.charges))
      throw std::invalid_argument("model cannot classify the symbol for character '" +
                                  detail::printable(r.byte) + "' (" + std::string(to_string(r.kind)) +
                                  ")");

  std::map<std::vector<int>, ModalVector> coupled;
  std::vector<ChargeDetection> detections;
  std::vector<std::uint8_t> bytewise(seq.char_count, 0);
  std::size_t correct = 0, classified = 0;
  const double dmax = channel.spec().max_displacement_mm;
  for (const auto& r : seq.records) {
    SymbolOutcome out;
    out.slot = r.slot;
    out.char_index = r.char_index;
    if (r.kind == SymbolKind::null_symbol) {
      out.truth = out.predicted = "null";
      out.confidence = 1.0;
      rep.symbols.push_back(out);
      continue;
    }
    auto it = coupled.find(r.charges);
    if (it == coupled.end())
      it = coupled.emplace(r.charges, channel.couple(channel.input_field(r.charges))).first;
    out.displacement_mm = schedule.displacement(r.slot, seq.records.size(), dmax, run_seed);
    const auto frame = channel.transmit_coupled(it->second, out.displacement_mm,
                                                {kTransmitDomain, run_seed, r.slot});
    const auto decision = bob.classify(frame.image);
    const int truth = class_of.at(r.charges);
    out.truth = classes[static_cast<std::size_t>(truth)].name;
    out.predicted = classes[static_cast<std::size_t>(decision.class_id)].name;
    out.confidence = decision.confidence;
    ++classified;
    if (decision.class_id == truth) ++correct;

    const auto& predicted_charges = classes[static_cast<std::size_t>(decision.class_id)].charges;
    if (mode == TransmissionMode::bitwise) {
      if (predicted_charges.size() == 1 && predicted_charges[0] >= kZeroBitCharge &&
          predicted_charges[0] <= kBitsPerSymbol)
        detections.push_back({r.char_index, predicted_charges[0]});
      else
        rep.warnings.push_back("slot " + std::to_string(r.slot) + ": predicted class '" +
                               out.predicted + "' is not a bit symbol");
    } else {
      bytewise[r.char_index] = charges_to_char(predicted_charges);
    }
    rep.symbols.push_back(std::move(out));
  }

  if (mode == TransmissionMode::bitwise) {
    auto dec = decode_bitwise(detections, seq.char_count);
    rep.received.assign(dec.text.begin(), dec.text.end());
    for (auto& w : dec.warnings) rep.warnings.push_back(std::move(w));
  } else {
    rep.received = std::move(bytewise);
  }
  rep.symbol_accuracy = classified ? static_cast<double>(correct) / static_cast<double>(classified) : 1.0;
  if (rep.sent.empty())
    rep.warnings.push_back("empty message: MSE undefined");
  else
    rep.mse = mse(rep.received, rep.sent);
  rep.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

struct ImageTransmission {
  TransmissionReport report;
  GrayImage decoded;
};

/// Pixel-by-pixel transmission of a binary image with the '1' / '0'
/// superposition symbols. Non-binary input is thresholded at 128.
inline ImageTransmission send_image(const FiberChannel& channel, const Receiver& bob,
                                    const GrayImage& image, const StrainSchedule& schedule,
                                    std::uint64_t run_seed) {
  bool binary = true;
  for (auto p : image.pixels) binary = binary && (p == 0 || p == 255);
  const auto text = pixels_to_text(image.pixels);
  auto rep = send_text(channel, bob, text, TransmissionMode::bytewise, schedule, run_seed);
  if (!binary) rep.warnings.insert(rep.warnings.begin(), "input image is not binary; thresholded at 128");
  rep.image_width = image.width;
  rep.image_height = image.height;
  GrayImage out(image.width, image.height);
  out.pixels = text_to_pixels(std::string_view(reinterpret_cast<const char*>(rep.received.data()),
                                               rep.received.size()));
  return {std::move(rep), std::move(out)};
}

enum class RenderStage { input, encrypted };

/// Camera view of a symbol before the fiber (centered free-space beam) or
/// after it at displacement d.
inline GrayImage render(const FiberChannel& channel, const std::vector<int>& charges,
                        RenderStage stage, double displacement_mm, std::uint64_t seed) {
  const StreamKey key{"render", seed, 0};
  if (stage == RenderStage::input) {
    const auto field = channel.input_field(charges, channel.camera().grid());
    auto noise = make_stream(derive_seed(channel.spec().seed, key), {FiberChannel::kNoiseTag, 0, 0});
    return capture(field, channel.camera(), noise).image;
  }
  return channel.transmit(channel.input_field(charges), displacement_mm, key).image;
}

}  // namespace oamcrypt
