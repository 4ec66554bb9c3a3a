#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oamcrypt/channel/dataset.hpp"
#include "oamcrypt/decoder/mlp.hpp"
#include "oamcrypt/decoder/train.hpp"

namespace oamcrypt {

inline constexpr int kModelFormatVersion = 1;

/// A trained classifier together with the link it was trained on, so that a
/// receiver can regenerate the same fiber realization.
struct ModelBundle {
  MLPModel model;
  std::vector<ClassSpec> classes;
  std::optional<ChannelSpec> channel;
  std::optional<CameraSpec> camera;
  nlohmann::ordered_json training = nlohmann::ordered_json::object();
};

namespace detail {

inline std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
  return v;
}

inline Eigen::MatrixXd from_row_major(const std::vector<double>& v, Eigen::Index rows,
                                      Eigen::Index cols) {
  if (static_cast<Eigen::Index>(v.size()) != rows * cols)
    throw std::runtime_error("model file: weight array has the wrong size");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = v[static_cast<std::size_t>(r * cols + c)];
  return m;
}

}  // namespace detail

inline nlohmann::ordered_json training_summary(const TrainLog& log, const TrainConfig& cfg) {
  return {{"epochs", log.epochs},
          {"best_epoch", log.best_epoch},
          {"accepted_steps", log.accepted_steps},
          {"stop_reason", std::string(to_string(log.reason))},
          {"train_loss", log.train_loss},
          {"validation_loss", log.validation_loss},
          {"config",
           {{"hidden", cfg.hidden},
            {"max_epochs", cfg.max_epochs},
            {"fractions", {cfg.fractions.train, cfg.fractions.validation, cfg.fractions.test}},
            {"patience", cfg.patience},
            {"scg_sigma", cfg.scg_sigma},
            {"scg_lambda", cfg.scg_lambda},
            {"init_scale", cfg.init_scale},
            {"seed", cfg.seed}}}};
}

inline nlohmann::ordered_json to_json(const ModelBundle& b) {
  const auto& m = b.model;
  nlohmann::ordered_json j;
  j["format_version"] = kModelFormatVersion;
  j["dims"] = {{"input", m.input_dim()}, {"hidden", m.hidden_dim()}, {"classes", m.class_count()}};
  j["class_names"] = m.class_names;
  j["classes"] = to_json(b.classes);
  j["w1"] = detail::row_major(m.w1);
  j["b1"] = std::vector<double>(m.b1.begin(), m.b1.end());
  j["w2"] = detail::row_major(m.w2);
  j["b2"] = std::vector<double>(m.b2.begin(), m.b2.end());
  if (b.channel) j["channel"] = to_json(*b.channel);
  if (b.camera) j["camera"] = to_json(*b.camera);
  j["training"] = b.training;
  return j;
}

inline ModelBundle model_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kModelFormatVersion)
    throw std::runtime_error("unsupported model format version");
  const auto& d = j.at("dims");
  const int in = d.at("input").get<int>(), h = d.at("hidden").get<int>(),
            c = d.at("classes").get<int>();
  ModelBundle b;
  b.model.w1 = detail::from_row_major(j.at("w1").get<std::vector<double>>(), h, in);
  const auto b1 = j.at("b1").get<std::vector<double>>();
  b.model.b1 = Eigen::Map<const Eigen::VectorXd>(b1.data(), static_cast<Eigen::Index>(b1.size()));
  b.model.w2 = detail::from_row_major(j.at("w2").get<std::vector<double>>(), c, h);
  const auto b2 = j.at("b2").get<std::vector<double>>();
  b.model.b2 = Eigen::Map<const Eigen::VectorXd>(b2.data(), static_cast<Eigen::Index>(b2.size()));
  b.model.class_names = j.at("class_names").get<std::vector<std::string>>();
  b.model.validate();
  if (j.contains("classes")) b.classes = classes_from_json(j.at("classes"));
  if (j.contains("channel")) b.channel = channel_from_json(j.at("channel"));
  if (j.contains("camera")) b.camera = camera_from_json(j.at("camera"));
  if (j.contains("training")) b.training = j.at("training");
  return b;
}

inline void save_model(const ModelBundle& b, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write model file " + path);
  os << to_json(b).dump(1) << '\n';
}

inline ModelBundle load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open model file " + path);
  return model_from_json(nlohmann::json::parse(is));
}

}  // namespace oamcrypt
