// Command-line front end: mode census, dataset generation, training,
// cross-talk reports, end-to-end transmission and renders.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oamcrypt/oamcrypt.hpp"

namespace fs = std::filesystem;
using namespace oamcrypt;

namespace {

struct FiberOptions {
  double radius_um = 5.0;
  double na = 0.1;
  double wavelength_nm = 633.0;
  double length_m = 1.0;
  double n_core = 1.457;

  void add(CLI::App* app) {
    app->add_option("--radius-um", radius_um, "core radius [um]")->capture_default_str();
    app->add_option("--na", na, "numerical aperture")->capture_default_str();
    app->add_option("--wavelength-nm", wavelength_nm, "vacuum wavelength [nm]")->capture_default_str();
    app->add_option("--length-m", length_m, "fiber length [m]")->capture_default_str();
    app->add_option("--n-core", n_core, "core refractive index")->capture_default_str();
  }

  FiberSpec spec() const {
    FiberSpec f;
    f.core_radius = radius_um * 1e-6;
    f.numerical_aperture = na;
    f.wavelength = wavelength_nm * 1e-9;
    f.length = length_m;
    f.n_core = n_core;
    f.validate();
    return f;
  }
};

struct ChannelOptions {
  FiberOptions fiber;
  std::optional<double> offset_a, waist_a, theta_a, theta_b, jitter, noise;
  std::uint64_t seed = 42;

  void add(CLI::App* app) {
    fiber.add(app);
    app->add_option("--offset-a", offset_a, "lateral coupling offset in core radii (default 1.6)");
    app->add_option("--waist-a", waist_a, "beam waist in core radii (default 0.6)");
    app->add_option("--theta-a", theta_a, "baseline mixing strength [rad] (default pi)");
    app->add_option("--theta-b", theta_b, "strain mixing strength [rad] (default pi)");
    app->add_option("--jitter", jitter, "per-frame jitter amplitude (default 0.05)");
    app->add_option("--noise", noise, "camera noise sigma, fraction of full scale (default 0.01)");
    app->add_option("--seed", seed, "master seed")->capture_default_str();
  }

  std::pair<ChannelSpec, CameraSpec> specs() const {
    const auto f = fiber.spec();
    auto ch = ChannelSpec::for_fiber(f, seed);
    if (offset_a) ch.lateral_offset = *offset_a * f.core_radius;
    if (waist_a) ch.waist = *waist_a * f.core_radius;
    if (theta_a) ch.theta_a = *theta_a;
    if (theta_b) ch.theta_b = *theta_b;
    if (jitter) ch.jitter = *jitter;
    ch.validate();
    auto cam = CameraSpec::for_fiber(f);
    if (noise) cam.noise_sigma = *noise;
    cam.validate();
    return {ch, cam};
  }
};

/// Errors that are the user's to fix (bad flags, unreadable input).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  if (!os) throw std::runtime_error("error writing " + path.string());
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  write_text(path, j.dump(1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n");
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
  return p.parent_path() / (p.stem().string() + suffix);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Channel the model was trained on; a receiver must see the same fiber.
FiberChannel channel_from_model(const ModelBundle& b) {
  if (!b.channel || !b.camera)
    throw UsageError("model file carries no channel description; retrain with this tool");
  return FiberChannel(*b.channel, *b.camera);
}

std::vector<int> parse_charges(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("--charges expects comma-separated integers, got '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("--charges is empty");
  return out;
}

/// Rows = classes as grayscale cells, 255 = 1.0.
GrayImage heatmap(const Eigen::MatrixXd& m, int cell = 12) {
  GrayImage img(static_cast<int>(m.cols()) * cell, static_cast<int>(m.rows()) * cell);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      img.at(x, y) = static_cast<std::uint8_t>(
          std::lround(255.0 * std::clamp(m(y / cell, x / cell), 0.0, 1.0)));
  return img;
}

nlohmann::ordered_json matrix_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(row);
  }
  return rows;
}

// --- subcommands -------------------------------------------------------------

int cmd_fiber_modes(const FiberOptions& opt, const std::string& json_out) {
  const auto spec = opt.spec();
  const double v = v_number(spec);
  const auto modes = solve_lp_modes(spec);
  std::printf("V = %.6f  (a = %g um, NA = %g, lambda = %g nm)\n", v, opt.radius_um, opt.na,
              opt.wavelength_nm);
  std::printf("%4s %3s %22s %12s %12s\n", "l", "p", "beta [rad/m]", "u", "w");
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& m : modes) {
    std::printf("%+4d %3d %22.10e %12.8f %12.8f  LP%d%d\n", m.azimuthal_index, m.radial_index,
                m.propagation_constant, m.core_argument, m.cladding_argument,
                std::abs(m.azimuthal_index), m.radial_index);
    rows.push_back({{"l", m.azimuthal_index},
                    {"p", m.radial_index},
                    {"beta_rad_per_m", m.propagation_constant},
                    {"u", m.core_argument},
                    {"w", m.cladding_argument}});
  }
  std::printf("%zu guided modes\n", modes.size());
  if (!json_out.empty())
    write_json(json_out, {{"v_number", v}, {"fiber", to_json(spec)}, {"modes", rows}});
  return 0;
}

struct DatasetArgs {
  std::string kind = "single";
  int l_min = -10, l_max = 10;
  std::string chars = "0123456789";
  double step_mm = 0.1;
  std::string out;
};

int cmd_dataset_gen(const DatasetArgs& a, const ChannelOptions& copt) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [chs, cam] = copt.specs();
  std::vector<ClassSpec> classes;
  if (a.kind == "single")
    classes = single_mode_classes(a.l_min, a.l_max);
  else if (a.kind == "digits")
    classes = character_classes("0123456789");
  else if (a.kind == "chars")
    classes = character_classes(a.chars);
  else
    throw UsageError("--kind must be single, digits or chars");
  const FiberChannel channel(chs, cam);
  const auto ds = generate_dataset(channel, classes, a.step_mm, a.kind == "single" ? "single" : "characters");
  write_dataset(ds, a.out);
  std::printf("wrote %zu frames (%zu classes x %zu) to %s in %.1f s\n", ds.frames.size(), classes.size(),
              ds.frames.size() / classes.size(), a.out.c_str(), seconds_since(t0));
  return 0;
}

struct TrainArgs {
  std::string dataset;
  std::string out = "model.json";
  TrainConfig cfg;
};

int cmd_train(const TrainArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto ds = load_dataset(a.dataset);
  try {
    ds.manifest.require_balanced();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("refusing to train on unbalanced data: ") + e.what());
  }
  const auto out = train_on_dataset(ds, a.cfg);
  save_model(out.bundle, a.out);

  const auto names = ds.manifest.class_names();
  const auto rn = out.test.confusion.row_normalized();
  write_text(sibling(a.out, ".confusion.csv"), matrix_csv(rn, names, names));
  nlohmann::ordered_json report;
  report["dataset"] = a.dataset;
  report["model"] = a.out;
  report["classes"] = names;
  report["split"] = {{"train", out.split.train.size()},
                     {"validation", out.split.validation.size()},
                     {"test", out.split.test.size()}};
  report["training"] = out.bundle.training;
  report["test_accuracy"] = out.test.accuracy;
  report["confusion_mean_diagonal"] = out.test.confusion.mean_diagonal();
  report["confusion_counts"] = matrix_json(out.test.confusion.counts());
  write_json(sibling(a.out, ".report.json"), report);

  std::printf("trained %zu-class model: %d epochs (%s), best epoch %d\n", names.size(), out.log.epochs,
              std::string(to_string(out.log.reason)).c_str(), out.log.best_epoch);
  std::printf("test accuracy %.4f  (confusion mean diagonal %.4f, %zu test samples)\n",
              out.test.accuracy, out.test.confusion.mean_diagonal(), out.split.test.size());
  std::printf("model written to %s  (%.1f s)\n", a.out.c_str(), seconds_since(t0));
  return 0;
}

struct CrosstalkArgs {
  std::string mode = "raw";
  int l_min = -10, l_max = 10;
  double step_mm = 0.1;
  std::string model, dataset;
  std::string out = "crosstalk.csv";
  std::string heatmap;
};

int cmd_crosstalk(const CrosstalkArgs& a, const ChannelOptions& copt) {
  Eigen::MatrixXd m;
  std::vector<std::string> names;
  nlohmann::ordered_json report;
  report["mode"] = a.mode;
  if (a.mode == "raw") {
    const auto [chs, cam] = copt.specs();
    const FiberChannel channel(chs, cam);
    m = raw_crosstalk(channel, CrosstalkOptions::range(a.l_min, a.l_max, a.step_mm));
    for (int l = a.l_min; l <= a.l_max; ++l) names.push_back(charge_class_name(l));
    report["channel"] = to_json(chs);
    report["step_mm"] = a.step_mm;
  } else if (a.mode == "nn") {
    if (a.model.empty() || a.dataset.empty()) throw UsageError("--mode nn needs --model and --dataset");
    const auto bundle = load_model(a.model);
    const auto ds = load_dataset(a.dataset);
    if (ds.manifest.class_names() != bundle.model.class_names)
      throw UsageError("dataset classes do not match the model's classes");
    TrainConfig cfg;
    if (bundle.training.contains("config")) cfg.seed = bundle.training["config"].value("seed", cfg.seed);
    LabeledSet all{feature_matrix(ds.frames), ds.manifest.labels()};
    const auto split =
        split_dataset(all.labels, static_cast<int>(ds.manifest.classes.size()), cfg.fractions, cfg.seed);
    const auto test = all.subset(split.test);
    const auto ev = evaluate(bundle.model, test.x, test.labels);
    m = ev.confusion.row_normalized();
    names = bundle.model.class_names;
    report["model"] = a.model;
    report["dataset"] = a.dataset;
    report["test_samples"] = test.size();
    report["accuracy"] = ev.accuracy;
  } else {
    throw UsageError("--mode must be raw or nn");
  }
  write_text(a.out, matrix_csv(m, names, names));
  report["classes"] = names;
  report["mean_diagonal"] = m.diagonal().mean();
  report["matrix"] = matrix_json(m);
  write_json(sibling(a.out, ".json"), report);
  if (!a.heatmap.empty()) write_pgm(a.heatmap, heatmap(m));
  std::printf("%s cross-talk %zux%zu: mean diagonal %.4f -> %s\n", a.mode.c_str(), names.size(),
              names.size(), m.diagonal().mean(), a.out.c_str());
  return 0;
}

struct SendArgs {
  std::string model;
  std::string text;
  std::string mode = "bitwise";
  std::string strain = "random";
  std::string zero_bits = "silent";
  std::uint64_t seed = 1;
  std::string out = "transmission.json";
  std::string in_image;
  std::string out_image = "received.pgm";
};

void print_report(const TransmissionReport& rep) {
  std::size_t wrong = 0;
  for (const auto& s : rep.symbols) wrong += s.truth != s.predicted;
  std::printf("symbols: %zu  misclassified: %zu  accuracy %.4f\n", rep.symbols.size(), wrong,
              rep.symbol_accuracy);
  if (rep.mse)
    std::printf("MSE: %.6g\n", *rep.mse);
  else
    std::printf("MSE: undefined\n");
  for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
  std::printf("elapsed %.3f s\n", rep.elapsed_ms / 1000.0);
}

int cmd_send_text(const SendArgs& a) {
  const auto schedule = StrainSchedule::parse(a.strain);
  const auto mode = transmission_mode_from(a.mode);
  const auto zeros = zero_bits_from(a.zero_bits);
  const auto bundle = load_model(a.model);
  const auto channel = channel_from_model(bundle);
  const Receiver bob(bundle);
  const auto rep = send_text(channel, bob, a.text, mode, schedule, a.seed, zeros);
  write_json(a.out, to_json(rep));
  std::printf("sent:     %s\n", a.text.c_str());
  std::printf("received: %s\n", std::string(rep.received.begin(), rep.received.end()).c_str());
  print_report(rep);
  return 0;
}

int cmd_send_image(const SendArgs& a) {
  const auto schedule = StrainSchedule::parse(a.strain);
  const auto img = read_pgm(a.in_image);
  const auto bundle = load_model(a.model);
  const auto channel = channel_from_model(bundle);
  const Receiver bob(bundle);
  const auto out = send_image(channel, bob, img, schedule, a.seed);
  write_pgm(a.out_image, out.decoded);
  write_json(a.out, to_json(out.report));
  std::printf("%dx%d image -> %s\n", img.width, img.height, a.out_image.c_str());
  print_report(out.report);
  return 0;
}

struct RenderArgs {
  std::string charges;
  std::string symbol;
  std::string stage = "input";
  double d_mm = 0.0;
  std::string model;
  std::string out = "render.pgm";
  std::string field;
  std::uint64_t frame_seed = 0;
};

int cmd_render(const RenderArgs& a, const ChannelOptions& copt) {
  std::vector<int> charges;
  if (!a.symbol.empty()) {
    if (a.symbol.size() != 1) throw UsageError("--symbol takes exactly one character");
    charges = char_to_charges(static_cast<std::uint8_t>(a.symbol[0]));
    if (charges.empty()) throw UsageError("the null character has no field");
  } else {
    charges = parse_charges(a.charges);
  }
  RenderStage stage;
  if (a.stage == "input")
    stage = RenderStage::input;
  else if (a.stage == "encrypted")
    stage = RenderStage::encrypted;
  else
    throw UsageError("--stage must be input or encrypted");
  std::optional<FiberChannel> channel;
  if (!a.model.empty()) {
    channel.emplace(channel_from_model(load_model(a.model)));
  } else {
    const auto [chs, cam] = copt.specs();
    channel.emplace(chs, cam);
  }
  const auto img = render(*channel, charges, stage, a.d_mm, a.frame_seed);
  write_pgm(a.out, img);
  if (!a.field.empty()) {
    const auto field = stage == RenderStage::input
                           ? channel->input_field(charges, channel->camera().grid())
                           : channel->output_field(channel->couple(channel->input_field(charges)), a.d_mm,
                                                   {"render", a.frame_seed, 0});
    export_field(field, a.field);
  }
  std::printf("%s render (%zu charge%s, d = %g mm) -> %s\n", a.stage.c_str(), charges.size(),
              charges.size() == 1 ? "" : "s", a.d_mm, a.out.c_str());
  return 0;
}

int cmd_features(const std::vector<std::string>& inputs, const std::string& dataset, const std::string& out) {
  std::vector<GrayImage> frames;
  std::vector<std::string> names;
  if (!dataset.empty()) {
    auto ds = load_dataset(dataset);
    frames = std::move(ds.frames);
    for (const auto& s : ds.manifest.samples) names.push_back(s.path);
  }
  for (const auto& p : inputs) {
    frames.push_back(read_pgm(p));
    names.push_back(p);
  }
  if (frames.empty()) throw UsageError("features: give --dataset or input PGM files");
  std::ostringstream os;
  os.precision(17);
  os << "source";
  for (int k = 0; k < kFeatureDim; ++k) os << ",f" << k;
  os << '\n';
  for (std::size_t n = 0; n < frames.size(); ++n) {
    const auto f = downsample_9x7(frames[n]);
    os << csv_field(names[n]);
    for (int k = 0; k < kFeatureDim; ++k) os << ',' << f[k];
    os << '\n';
  }
  write_text(out, os.str());
  std::printf("%zu feature vectors (%d columns) -> %s\n", frames.size(), kFeatureDim, out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical encryption over multimode fiber: simulator, trainer and decoder"};
  app.require_subcommand(1);

  FiberOptions fiber_opt;
  std::string modes_json;
  auto* modes = app.add_subcommand("fiber-modes", "solve and print the guided LP modes");
  fiber_opt.add(modes);
  modes->add_option("--json", modes_json, "also write the table as JSON");

  DatasetArgs ds_args;
  ChannelOptions ds_chan;
  auto* dsgen = app.add_subcommand("dataset-gen", "render a labeled frame dataset");
  dsgen->add_option("--kind", ds_args.kind, "single | digits | chars")->capture_default_str();
  dsgen->add_option("--l-min", ds_args.l_min, "lowest charge (single)")->capture_default_str();
  dsgen->add_option("--l-max", ds_args.l_max, "highest charge (single)")->capture_default_str();
  dsgen->add_option("--chars", ds_args.chars, "character set (chars)")->capture_default_str();
  dsgen->add_option("--step-mm", ds_args.step_mm, "displacement step [mm]")->capture_default_str();
  dsgen->add_option("--out", ds_args.out, "output directory")->required();
  ds_chan.add(dsgen);

  TrainArgs tr_args;
  auto* train = app.add_subcommand("train", "train the classifier on a dataset");
  train->add_option("--dataset", tr_args.dataset, "dataset directory or manifest")->required();
  train->add_option("--out", tr_args.out, "model file")->capture_default_str();
  train->add_option("--hidden", tr_args.cfg.hidden, "hidden units")->capture_default_str();
  train->add_option("--epochs", tr_args.cfg.max_epochs, "maximum epochs")->capture_default_str();
  train->add_option("--patience", tr_args.cfg.patience, "validation patience")->capture_default_str();
  train->add_option("--seed", tr_args.cfg.seed, "split and init seed")->capture_default_str();

  CrosstalkArgs xt_args;
  ChannelOptions xt_chan;
  auto* xtalk = app.add_subcommand("crosstalk", "cross-talk matrix: raw modal projection or NN confusion");
  xtalk->add_option("--mode", xt_args.mode, "raw | nn")->capture_default_str();
  xtalk->add_option("--l-min", xt_args.l_min, "lowest charge (raw)")->capture_default_str();
  xtalk->add_option("--l-max", xt_args.l_max, "highest charge (raw)")->capture_default_str();
  xtalk->add_option("--step-mm", xt_args.step_mm, "strain sweep step (raw)")->capture_default_str();
  xtalk->add_option("--model", xt_args.model, "model file (nn)");
  xtalk->add_option("--dataset", xt_args.dataset, "dataset the model was trained on (nn)");
  xtalk->add_option("--out", xt_args.out, "CSV output")->capture_default_str();
  xtalk->add_option("--heatmap", xt_args.heatmap, "optional PGM heatmap");
  xt_chan.add(xtalk);

  SendArgs send_args;
  auto* stext = app.add_subcommand("send-text", "encrypt, transmit and decode a text message");
  stext->add_option("--model", send_args.model, "trained model")->required();
  stext->add_option("--text", send_args.text, "message")->required();
  stext->add_option("--mode", send_args.mode, "bitwise | bytewise")->capture_default_str();
  stext->add_option("--strain", send_args.strain, "random | ramp | fixed:<mm>")->capture_default_str();
  stext->add_option("--zero-bits", send_args.zero_bits, "silent | explicit (bitwise)")->capture_default_str();
  stext->add_option("--seed", send_args.seed, "run seed")->capture_default_str();
  stext->add_option("--out", send_args.out, "JSON report")->capture_default_str();

  auto* simage = app.add_subcommand("send-image", "transmit a binary PGM pixel by pixel");
  simage->add_option("--model", send_args.model, "trained '0'/'1' model")->required();
  simage->add_option("--in", send_args.in_image, "input PGM")->required();
  simage->add_option("--out-image", send_args.out_image, "decoded PGM")->capture_default_str();
  simage->add_option("--strain", send_args.strain, "random | ramp | fixed:<mm>")->capture_default_str();
  simage->add_option("--seed", send_args.seed, "run seed")->capture_default_str();
  simage->add_option("--out", send_args.out, "JSON report")->capture_default_str();

  RenderArgs rd_args;
  ChannelOptions rd_chan;
  auto* rend = app.add_subcommand("render", "camera view of a symbol before or after the fiber");
  auto* charges_opt = rend->add_option("--charges", rd_args.charges, "comma-separated LG charges");
  auto* symbol_opt = rend->add_option("--symbol", rd_args.symbol, "a character (its alphabet superposition)");
  charges_opt->excludes(symbol_opt);
  rend->add_option("--stage", rd_args.stage, "input | encrypted")->capture_default_str();
  rend->add_option("--d-mm", rd_args.d_mm, "strain displacement [mm]")->capture_default_str();
  rend->add_option("--model", rd_args.model, "take the channel from a model file");
  rend->add_option("--frame-seed", rd_args.frame_seed, "frame stream seed")->capture_default_str();
  rend->add_option("--out", rd_args.out, "PGM output")->capture_default_str();
  rend->add_option("--field", rd_args.field, "also export the complex field (<stem>.json/.bin)");
  rd_chan.add(rend);

  std::vector<std::string> feat_in;
  std::string feat_dataset, feat_out = "features.csv";
  auto* feat = app.add_subcommand("features", "dump 63-element feature vectors as CSV");
  feat->add_option("inputs", feat_in, "PGM files");
  feat->add_option("--dataset", feat_dataset, "dataset directory or manifest");
  feat->add_option("--out", feat_out, "CSV output")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*modes) return cmd_fiber_modes(fiber_opt, modes_json);
    if (*dsgen) return cmd_dataset_gen(ds_args, ds_chan);
    if (*train) return cmd_train(tr_args);
    if (*xtalk) return cmd_crosstalk(xt_args, xt_chan);
    if (*stext) return cmd_send_text(send_args);
    if (*simage) return cmd_send_image(send_args);
    if (*rend) {
      if (rd_args.charges.empty() && rd_args.symbol.empty()) throw UsageError("render needs --charges or --symbol");
      return cmd_render(rd_args, rd_chan);
    }
    if (*feat) return cmd_features(feat_in, feat_dataset, feat_out);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
