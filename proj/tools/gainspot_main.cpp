// Copyright 2026 gainspot authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// gainspot: wake-word spotting toolkit with gain-robust delta features.
// Subcommands: synth, sweep, featurize, train, spot, eval, fold, verify.
// Logs go to stderr, data to files or stdout.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gainspot/decode.hpp"
#include "gainspot/errors.hpp"
#include "gainspot/eval.hpp"
#include "gainspot/features.hpp"
#include "gainspot/graph.hpp"
#include "gainspot/pipeline.hpp"
#include "gainspot/rng.hpp"
#include "gainspot/simgen.hpp"
#include "gainspot/toml.hpp"
#include "gainspot/train.hpp"
#include "gainspot/verify.hpp"
#include "gainspot/wav.hpp"

namespace {

namespace fs = std::filesystem;
using namespace gainspot;

// Exit codes: 0 ok, 1 verify failure, 2 config/usage, 3 path/IO,
// 4 any other module error.
constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPath = 3;
constexpr int kExitModule = 4;

void LogLine(const std::string& msg) { std::cerr << msg << std::endl; }

TomlTable LoadConfig(const std::string& path) {
  if (path.empty()) return TomlTable{};
  return TomlTable::ParseFile(path);
}

CorpusSpec CorpusFromConfig(const TomlTable& cfg, uint64_t seed) {
  CorpusSpec spec;
  spec.seed = seed;
  spec.n_positive =
      static_cast<int>(cfg.GetInt("corpus.n_positive", spec.n_positive));
  spec.n_negative =
      static_cast<int>(cfg.GetInt("corpus.n_negative", spec.n_negative));
  spec.stream_seconds =
      cfg.GetDouble("corpus.stream_seconds", spec.stream_seconds);
  spec.noise_dbfs = cfg.GetDouble("corpus.noise_dbfs", spec.noise_dbfs);
  spec.keyword_dbfs = cfg.GetDouble("corpus.keyword_dbfs", spec.keyword_dbfs);
  spec.quiet_keyword_prob =
      cfg.GetDouble("corpus.quiet_keyword_prob", spec.quiet_keyword_prob);
  spec.quiet_drop_db = cfg.GetDouble("corpus.quiet_drop_db", spec.quiet_drop_db);
  return spec;
}

void WriteCorpusDir(const Corpus& corpus, const std::string& out_dir) {
  fs::create_directories(out_dir);
  for (const SimStream& s : corpus.streams) {
    WriteWav(s.audio, (fs::path(out_dir) / (s.id + ".wav")).string());
  }
  WriteLabelsJson(corpus.Labels(), (fs::path(out_dir) / "labels.json").string());
}

// Stacked training windows from a corpus directory; see
// AppendTrainingWindows for the per-stream sampling policy.
std::vector<LabeledExample> ExamplesFromDir(const std::string& dir,
                                            bool apply_hdrc, uint64_t seed) {
  std::vector<LabeledStream> labels =
      ReadLabelsJson((fs::path(dir) / "labels.json").string());
  FrameConfig fc;
  MelFilterbank fb = BuildMelFilterbank(fc, 20, 0.0, 8000.0);
  const StackSpec stack{80, 3, 20};
  const BitDepthParams bp;
  Pcg32 pick_rng(seed, 700);
  std::vector<LabeledExample> examples;
  for (const LabeledStream& l : labels) {
    AudioBuffer buf = ReadWav((fs::path(dir) / (l.id + ".wav")).string());
    if (apply_hdrc) buf = Hdrc(buf, bp);
    auto stacked = StackFrames(Lfbe(buf, fc, fb), stack);
    AppendTrainingWindows(stacked, l, &pick_rng, &examples);
  }
  return examples;
}

int Dispatch(const std::string& cmd, const TomlTable& cfg, uint64_t seed,
             const std::map<std::string, std::string>& str_args,
             const std::map<std::string, double>& num_args,
             const std::vector<std::string>& det_args, bool delta_flag) {
  auto sarg = [&](const std::string& k, const std::string& fallback) {
    auto it = str_args.find(k);
    return it != str_args.end() ? it->second : fallback;
  };
  auto narg = [&](const std::string& k, double fallback) {
    auto it = num_args.find(k);
    return it != num_args.end() ? it->second : fallback;
  };

  if (cmd == "synth") {
    CorpusSpec spec = CorpusFromConfig(cfg, seed);
    std::string out = sarg("out", cfg.GetString("corpus.out_dir", "corpus"));
    LogLine("synthesizing " + std::to_string(spec.n_positive) + "+" +
            std::to_string(spec.n_negative) + " streams into " + out);
    WriteCorpusDir(SynthCorpus(spec), out);
    return kExitOk;
  }

  if (cmd == "sweep") {
    CorpusSpec spec = CorpusFromConfig(cfg, seed);
    SweepSpec sweep;
    auto gains = cfg.GetNumberArray("sweep.gains_db");
    if (!gains.empty()) {
      sweep.gains_db.clear();
      for (double g : gains) sweep.gains_db.push_back(static_cast<int>(g));
    }
    auto variants = cfg.GetStringArray("sweep.variants");
    if (!variants.empty()) sweep.variants = variants;
    std::string out = sarg("out", cfg.GetString("sweep.out_dir", "sweep"));
    LogLine("building sweep into " + out);
    BuildSweep(SynthCorpus(spec), sweep, out);
    return kExitOk;
  }

  if (cmd == "featurize") {
    FeaturePreset preset = GetFeaturePreset(
        sarg("feature-preset", cfg.GetString("features.preset", "lfbe20")));
    FeaturizeDirectory(sarg("in", ""), preset, delta_flag, sarg("out", ""));
    return kExitOk;
  }

  if (cmd == "train") {
    std::string preset =
        sarg("preset", cfg.GetString("train.preset", "dnn-6f"));
    std::string mode = sarg("mode", cfg.GetString("train.mode", "baseline"));
    ModelGraph model = MakePreset(preset, mode, seed);
    TrainConfig tc;
    tc.epochs = static_cast<int>(narg(
        "epochs", static_cast<double>(cfg.GetInt("train.epochs", 30))));
    tc.batch_size =
        static_cast<int>(cfg.GetInt("train.batch_size", tc.batch_size));
    tc.learning_rate =
        cfg.GetDouble("train.learning_rate", tc.learning_rate);
    tc.dropout_prob = cfg.GetDouble("train.dropout", tc.dropout_prob);
    tc.seed = seed;
    if (mode == "zero-sum") {
      tc.first_layer_mode = FirstLayerMode::kZeroSumConstraint;
      tc.zero_sum_spec = PresetDeltaSpec(preset);
    } else if (mode == "frozen-delta") {
      tc.first_layer_mode = FirstLayerMode::kFrozenDelta;
    }
    bool hdrc = cfg.GetBool("train.hdrc", true);
    auto examples = ExamplesFromDir(sarg("corpus", ""), hdrc, seed);
    LogLine("training " + preset + "/" + mode + " on " +
            std::to_string(examples.size()) + " examples");
    auto history = Train(&model, examples, tc);
    std::string model_out = sarg("model-out", "model.json");
    SaveModel(model, model_out);
    WriteLossCsv(history, sarg("loss-out", "loss.csv"));
    LogLine("final loss " + std::to_string(history.back().mean_loss) +
            ", accuracy " + std::to_string(history.back().accuracy));
    return kExitOk;
  }

  if (cmd == "spot") {
    ModelGraph model = LoadModel(sarg("model", ""));
    SmoothingSpec smooth = SmoothingForModel(model);
    PeakConfig peaks;
    peaks.threshold = static_cast<float>(
        narg("threshold", cfg.GetDouble("spot.threshold", 0.5)));
    peaks.lockout = static_cast<int>(
        narg("lockout", static_cast<double>(cfg.GetInt("spot.lockout", 30))));
    auto detections = SpotDirectory(model, sarg("in", ""), smooth, peaks);
    WriteDetectionsCsv(detections, sarg("out", "detections.csv"));
    return kExitOk;
  }

  if (cmd == "eval") {
    std::vector<LabeledStream> labels = ReadLabelsJson(sarg("labels", ""));
    std::string out_dir = sarg("out", "eval");
    fs::create_directories(out_dir);
    // --det entries are "<gain_db>=<detections.csv>".
    std::map<int, DetectionsByStream> per_gain;
    for (const std::string& spec : det_args) {
      size_t eq = spec.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("eval: --det expects <gain_db>=<path>, got " + spec);
      }
      int gain = std::stoi(spec.substr(0, eq));
      per_gain[gain] = ReadDetectionsCsv(spec.substr(eq + 1));
    }
    if (per_gain.find(0) == per_gain.end()) {
      throw ConfigError("eval: a 0 dB detections file is required");
    }
    std::map<std::string, DetCurve> curves;
    for (auto& [gain, det] : per_gain) {
      DetCurve curve = ComputeDetCurve(det, labels);
      std::string tag = std::to_string(gain) + "db";
      WriteDetCsv(curve, (fs::path(out_dir) / ("det_" + tag + ".csv")).string());
      curves[tag] = std::move(curve);
    }
    double target_far = narg("target-far", cfg.GetDouble("eval.target_far", 60.0));
    double op = SelectOperatingPoint(curves[std::string("0db")], target_far);
    for (auto& [tag, curve] : curves) curve.operating_point = op;
    WriteDetSvg(curves, (fs::path(out_dir) / "det.svg").string());
    auto rows = OpShiftReport(per_gain, labels, op);
    WriteOpShiftCsv(rows, (fs::path(out_dir) / "op_shift.csv").string());
    LogLine("operating point " + std::to_string(op) + " (FAR target " +
            std::to_string(target_far) + "/h)");
    return kExitOk;
  }

  if (cmd == "fold") {
    ModelGraph model = LoadModel(sarg("in", ""));
    std::string direction = sarg("direction", "fold");
    if (model.layers.empty()) throw ShapeError("fold: empty model");
    if (direction == "fold") {
      auto* fd = std::get_if<FrozenDeltaLayer>(&model.layers[0]);
      if (!fd || model.layers.size() < 2 ||
          !std::holds_alternative<DenseLayer>(model.layers[1])) {
        throw ShapeError(
            "fold: model must start with a frozen delta followed by a dense "
            "layer");
      }
      DeltaMatrixSpec spec{fd->frames_per_band, fd->bands};
      DenseLayer dense = std::get<DenseLayer>(model.layers[1]);
      dense.weights = FoldDelta(dense.weights, dense.out, spec);
      dense.in = spec.InDim();
      model.layers.erase(model.layers.begin());
      model.layers[0] = dense;
      model.metadata.mode = "zero-sum";
      double residual = MaxBlockSumResidual(
          std::get<DenseLayer>(model.layers[0]).weights,
          std::get<DenseLayer>(model.layers[0]).out, spec);
      std::cout << "max_block_sum_residual " << residual << "\n";
    } else if (direction == "unfold") {
      auto* dense = std::get_if<DenseLayer>(&model.layers[0]);
      if (!dense) throw ShapeError("unfold: first layer must be dense");
      DeltaMatrixSpec spec = PresetDeltaSpec(
          model.metadata.preset.empty() ? "dnn-6f" : model.metadata.preset);
      if (spec.InDim() != dense->in) {
        throw ShapeError("unfold: first layer does not match the delta shape");
      }
      double residual =
          MaxBlockSumResidual(dense->weights, dense->out, spec);
      DenseLayer unfolded = *dense;
      unfolded.weights = UnfoldDelta(dense->weights, dense->out, spec);
      unfolded.in = spec.OutDim();
      model.layers[0] = unfolded;
      model.layers.insert(model.layers.begin(),
                          FrozenDeltaLayer{spec.frames_per_band, spec.bands});
      model.metadata.mode = "frozen-delta";
      std::cout << "max_block_sum_residual " << residual << "\n";
    } else {
      throw ConfigError("fold: direction must be 'fold' or 'unfold'");
    }
    SaveModel(model, sarg("out", ""));
    return kExitOk;
  }

  if (cmd == "verify") {
    VerifyOptions opts;
    opts.seed = seed;
    opts.work_dir = sarg("work-dir", cfg.GetString("verify.work_dir",
                                                   "verify_work"));
    opts.train_per_class = static_cast<int>(
        cfg.GetInt("verify.train_per_class", opts.train_per_class));
    opts.test_per_class = static_cast<int>(
        cfg.GetInt("verify.test_per_class", opts.test_per_class));
    opts.epochs = static_cast<int>(cfg.GetInt("verify.epochs", opts.epochs));
    VerifyReport report = RunAcceptance(opts, &std::cerr);
    std::string json = report.ToJson();
    std::string out = sarg("out", "");
    if (out.empty()) {
      std::cout << json;
    } else {
      std::ofstream f(out, std::ios::trunc | std::ios::binary);
      if (!f) throw IoError("verify: cannot open " + out);
      f << json;
    }
    for (const CriterionResult& c : report.criteria) {
      LogLine((c.passed ? "PASS " : "FAIL ") + std::to_string(c.id) + " " +
              c.name);
    }
    return report.AllPassed() ? kExitOk : kExitVerifyFailed;
  }

  throw ConfigError("unknown subcommand: " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wake-word spotting toolkit with gain-robust delta features"};
  app.require_subcommand(1);

  std::string config_path;
  uint64_t seed = 42;
  bool seed_set = false;
  int jobs = 1;
  app.add_option("--config", config_path, "TOML run configuration");
  app.add_option("--seed", seed, "master seed (overrides config)")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--jobs", jobs,
                 "worker count (current pipeline runs single-threaded)");

  std::map<std::string, std::string> str_args;
  std::map<std::string, double> num_args;
  std::vector<std::string> det_args;
  bool delta_flag = false;

  auto str_opt = [&](CLI::App* sub, const std::string& name,
                     const std::string& desc) {
    sub->add_option_function<std::string>(
        "--" + name, [&str_args, name](const std::string& v) {
          str_args[name] = v;
        },
        desc);
  };
  auto num_opt = [&](CLI::App* sub, const std::string& name,
                     const std::string& desc) {
    sub->add_option_function<double>(
        "--" + name, [&num_args, name](double v) { num_args[name] = v; },
        desc);
  };

  CLI::App* synth = app.add_subcommand("synth", "generate a labeled corpus");
  str_opt(synth, "out", "output directory");

  CLI::App* sweep =
      app.add_subcommand("sweep", "generate a gain/compression sweep");
  str_opt(sweep, "out", "output directory");

  CLI::App* feat = app.add_subcommand("featurize", "extract feature CSVs");
  str_opt(feat, "in", "input wav directory");
  str_opt(feat, "out", "output csv directory");
  str_opt(feat, "feature-preset", "lfbe20 | lfbe64");
  feat->add_flag("--delta", delta_flag, "write delta features");

  CLI::App* train = app.add_subcommand("train", "train a spotter model");
  str_opt(train, "corpus", "corpus directory (wavs + labels.json)");
  str_opt(train, "preset", "dnn-6f | cnn-5c3f");
  str_opt(train, "mode", "baseline | frozen-delta | zero-sum");
  str_opt(train, "model-out", "model file to write");
  str_opt(train, "loss-out", "loss csv to write");
  num_opt(train, "epochs", "training epochs");

  CLI::App* spot = app.add_subcommand("spot", "run the spotter over wavs");
  str_opt(spot, "model", "model file");
  str_opt(spot, "in", "input wav directory");
  str_opt(spot, "out", "detections csv");
  num_opt(spot, "threshold", "peak threshold");
  num_opt(spot, "lockout", "peak lockout in steps");

  CLI::App* eval = app.add_subcommand("eval", "score detections");
  str_opt(eval, "labels", "labels.json");
  str_opt(eval, "out", "output directory");
  num_opt(eval, "target-far", "FAR/h target for the operating point");
  eval->add_option("--det", det_args,
                   "detections as <gain_db>=<csv>, repeatable");

  CLI::App* fold = app.add_subcommand("fold", "fold/unfold the delta layer");
  str_opt(fold, "in", "model file to read");
  str_opt(fold, "out", "model file to write");
  str_opt(fold, "direction", "fold | unfold");

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  str_opt(verify, "work-dir", "scratch directory");
  str_opt(verify, "out", "report json path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    TomlTable cfg = LoadConfig(config_path);
    if (!seed_set) {
      seed = static_cast<uint64_t>(cfg.GetInt("seed", 42));
    }
    std::string cmd = app.get_subcommands().front()->get_name();
    return Dispatch(cmd, cfg, seed, str_args, num_args, det_args, delta_flag);
  } catch (const ConfigError& e) {
    LogLine(std::string("config error: ") + e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    LogLine(std::string("path error: ") + e.what());
    return kExitPath;
  } catch (const Error& e) {
    LogLine(std::string("error: ") + e.what());
    return kExitModule;
  } catch (const std::exception& e) {
    LogLine(std::string("error: ") + e.what());
    return kExitModule;
  }
}
