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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "gainspot/errors.hpp"
#include "gainspot/pipeline.hpp"
#include "gainspot/simgen.hpp"
#include "gainspot/wav.hpp"

using namespace gainspot;
namespace fs = std::filesystem;

namespace {

// A flat model whose posterior for class 1 is a fixed sigmoid of the
// mean input: weights all w, so spotting behavior is easy to predict.
ModelGraph MeanThresholdModel(int dim, float w, float bias) {
  ModelGraph m;
  m.input.kind = InputSpec::Kind::kFlat;
  m.input.dim = dim;
  DenseLayer d;
  d.in = dim;
  d.out = 2;
  d.weights.assign(static_cast<size_t>(dim) * 2, 0.0f);
  for (int i = 0; i < dim; ++i) {
    d.weights[static_cast<size_t>(dim) + i] = w / static_cast<float>(dim);
  }
  d.bias = {0.0f, bias};
  d.act = Activation::kIdentity;
  m.layers.emplace_back(std::move(d));
  m.layers.emplace_back(SoftmaxLayer{});
  m.metadata.feature_preset = "lfbe20";
  m.metadata.smoothing_kind = "wma";
  m.metadata.smoothing_param = 30;
  return m;
}

std::vector<std::vector<float>> SyntheticStacked(int steps, int dim) {
  std::vector<std::vector<float>> out(steps);
  for (int t = 0; t < steps; ++t) {
    out[t].assign(dim, static_cast<float>(t));
  }
  return out;
}

}  // namespace

TEST_CASE("feature presets carry the documented geometry") {
  auto p20 = GetFeaturePreset("lfbe20");
  CHECK(p20.bands == 20);
  CHECK(p20.frame.window_len == 400);
  CHECK(p20.frame.hop == 160);
  CHECK(p20.frame.fft_size == 512);
  CHECK(p20.stack.context_frames == 80);
  CHECK(p20.stack.downsample == 3);
  CHECK(p20.stack.bands == 20);
  CHECK(p20.stack.Dim() == 540);
  CHECK(p20.f_max == doctest::Approx(8000.0));

  auto p64 = GetFeaturePreset("lfbe64");
  CHECK(p64.bands == 64);
  CHECK(p64.grid_frames == 100);

  CHECK_THROWS_AS(GetFeaturePreset("lfbe13"), InvalidArgumentError);
}

TEST_CASE("model metadata selects preset and smoothing") {
  ModelGraph dnn = MakePreset("dnn-6f", "baseline", 1);
  auto preset = PresetForModel(dnn);
  CHECK(preset.name == "lfbe20");
  auto smooth = SmoothingForModel(dnn);
  CHECK(smooth.kind == SmoothingSpec::Kind::kWma);
  CHECK(smooth.window == 30);

  ModelGraph cnn = MakePreset("cnn-5c3f", "baseline", 1);
  CHECK(PresetForModel(cnn).name == "lfbe64");
  auto ema = SmoothingForModel(cnn);
  CHECK(ema.kind == SmoothingSpec::Kind::kEma);
  CHECK(ema.alpha == doctest::Approx(0.1f));
}

TEST_CASE("spotting a synthetic stream finds the keyword once") {
  CorpusSpec spec;
  spec.seed = 7;
  spec.n_positive = 1;
  spec.n_negative = 1;
  auto corpus = SynthCorpus(spec);

  // Train a small model on windows from a few sibling corpora so the
  // spot is a genuine out-of-sample hit.
  CorpusSpec train_spec = spec;
  train_spec.seed = 8;
  train_spec.n_positive = 40;
  train_spec.n_negative = 40;
  auto train_corpus = SynthCorpus(train_spec);

  auto preset = GetFeaturePreset("lfbe20");
  auto fb = BuildMelFilterbank(preset.frame, preset.bands, preset.f_min,
                               preset.f_max);
  Pcg32 pick(9, 0);
  std::vector<LabeledExample> examples;
  for (const SimStream& s : train_corpus.streams) {
    auto feat = Lfbe(s.audio, preset.frame, fb);
    auto stacked = StackFrames(feat, preset.stack);
    AppendTrainingWindows(stacked, s.label, &pick, &examples);
  }
  ModelGraph model = MakePreset("dnn-6f", "baseline", 11);
  TrainConfig cfg;
  cfg.epochs = 60;
  cfg.batch_size = 32;
  cfg.dropout_prob = 0.0;
  cfg.learning_rate = 1e-4;
  cfg.seed = 11;
  auto history = Train(&model, examples, cfg);
  CHECK(history.back().accuracy > 0.75);

  PeakConfig peaks;
  peaks.threshold = 0.5f;
  peaks.lockout = 30;
  PosteriorTrace trace;
  auto dets = SpotBuffer(model, corpus.streams[0].audio,
                         SmoothingForModel(model), peaks, &trace);
  int steps = StackFrames(Lfbe(corpus.streams[0].audio, preset.frame, fb),
                          preset.stack)
                  .size();
  CHECK(static_cast<int>(trace.size()) == steps);
  REQUIRE(dets.size() >= 1);
  const auto& label = corpus.streams[0].label;
  bool in_interval = false;
  for (const Detection& d : dets) {
    CHECK(d.score >= peaks.threshold);
    in_interval |= d.step >= label.interval_begin &&
                   d.step <= label.interval_end;
  }
  CHECK(in_interval);

  auto neg = SpotBuffer(model, corpus.streams[1].audio,
                        SmoothingForModel(model), peaks);
  CHECK(neg.empty());
}

TEST_CASE("training windows follow the sampling policy") {
  const int dim = 12;
  auto stacked = SyntheticStacked(200, dim);
  Pcg32 rng(1, 0);
  std::vector<LabeledExample> out;

  LabeledStream pos;
  pos.label = StreamLabel::kPositive;
  pos.interval_begin = 60;
  pos.interval_end = 100;
  AppendTrainingWindows(stacked, pos, &rng, &out);
  REQUIRE(out.size() == 4);
  // Midpoint window, class 1.
  CHECK(out[0].label == 1);
  CHECK(out[0].input[0] == 80.0f);
  // Two random windows from the middle half of the interval, class 1.
  for (int k = 1; k <= 2; ++k) {
    CHECK(out[k].label == 1);
    CHECK(out[k].input[0] >= 70.0f);
    CHECK(out[k].input[0] <= 90.0f);
  }
  // One window clear of the interval, class 0.
  CHECK(out[3].label == 0);
  CHECK((out[3].input[0] < 60.0f || out[3].input[0] > 100.0f));

  // Marked negative (distractor): same geometry, all class 0.
  out.clear();
  LabeledStream hard = pos;
  hard.label = StreamLabel::kNegative;
  AppendTrainingWindows(stacked, hard, &rng, &out);
  REQUIRE(out.size() == 4);
  for (const auto& ex : out) CHECK(ex.label == 0);

  // Unmarked stream: four noise windows, class 0.
  out.clear();
  LabeledStream noise;
  noise.label = StreamLabel::kNegative;
  AppendTrainingWindows(stacked, noise, &rng, &out);
  REQUIRE(out.size() == 4);
  for (const auto& ex : out) {
    CHECK(ex.label == 0);
    CHECK(ex.input.size() == dim);
  }

  // Deterministic given the RNG state.
  Pcg32 a(5, 0), b(5, 0);
  std::vector<LabeledExample> ea, eb;
  AppendTrainingWindows(stacked, pos, &a, &ea);
  AppendTrainingWindows(stacked, pos, &b, &eb);
  REQUIRE(ea.size() == eb.size());
  for (size_t i = 0; i < ea.size(); ++i) {
    CHECK(ea[i].input == eb[i].input);
  }

  std::vector<std::vector<float>> empty;
  CHECK_THROWS_AS(AppendTrainingWindows(empty, noise, &rng, &out),
                  TooShortError);
}

TEST_CASE("featurize directory round-trips through feature csv") {
  CorpusSpec spec;
  spec.seed = 3;
  spec.n_positive = 1;
  spec.n_negative = 1;
  spec.stream_seconds = 1.5;
  auto corpus = SynthCorpus(spec);

  fs::path root = fs::temp_directory_path() / "gainspot_featurize_test";
  fs::remove_all(root);
  fs::create_directories(root / "wav");
  for (const SimStream& s : corpus.streams) {
    WriteWav(s.audio, (root / "wav" / (s.id + ".wav")).string());
  }

  auto preset = GetFeaturePreset("lfbe20");
  auto fb = BuildMelFilterbank(preset.frame, preset.bands, preset.f_min,
                               preset.f_max);

  FeaturizeDirectory((root / "wav").string(), preset, false,
                     (root / "lfbe").string());
  FeaturizeDirectory((root / "wav").string(), preset, true,
                     (root / "delta").string());

  for (const SimStream& s : corpus.streams) {
    auto lfbe = ReadFeatureCsv((root / "lfbe" / (s.id + ".csv")).string());
    auto want = Lfbe(s.audio, preset.frame, fb);
    CHECK(lfbe.frames == want.frames);
    CHECK(lfbe.bands == want.bands);
    CHECK(lfbe.values == want.values);

    auto delta = ReadFeatureCsv((root / "delta" / (s.id + ".csv")).string());
    auto want_d = DeltaLfbe(want);
    CHECK(delta.frames == want_d.frames);
    CHECK(delta.values == want_d.values);
  }
  fs::remove_all(root);

  CHECK_THROWS_AS(FeaturizeDirectory("/nonexistent/wavs", preset, false,
                                     (root / "x").string()),
                  IoError);
}

TEST_CASE("spot directory keys detections by file stem") {
  CorpusSpec spec;
  spec.seed = 4;
  spec.n_positive = 1;
  spec.n_negative = 2;
  spec.stream_seconds = 1.5;
  auto corpus = SynthCorpus(spec);

  fs::path root = fs::temp_directory_path() / "gainspot_spotdir_test";
  fs::remove_all(root);
  fs::create_directories(root);
  for (const SimStream& s : corpus.streams) {
    WriteWav(s.audio, (root / (s.id + ".wav")).string());
  }

  // Constant model: the trace is one long plateau, so the picker fires
  // exactly once per stream, at the plateau's leftmost step.
  ModelGraph model = MeanThresholdModel(540, 0.0f, 4.0f);
  PeakConfig peaks;
  peaks.threshold = 0.9f;
  auto dets = SpotDirectory(model, root.string(), SmoothingSpec::Wma(5),
                            peaks);
  REQUIRE(dets.size() == 3);
  CHECK(dets.count("pos_0000") == 1);
  CHECK(dets.count("neg_0000") == 1);
  CHECK(dets.count("neg_0001") == 1);
  for (const auto& [id, v] : dets) {
    REQUIRE(v.size() == 1);
    CHECK(v[0].step == 0);
    CHECK(v[0].score > 0.9f);
  }

  // Below-threshold constant posterior: no detections, keys still there.
  ModelGraph quiet = MeanThresholdModel(540, 0.0f, -4.0f);
  auto none = SpotDirectory(quiet, root.string(), SmoothingSpec::Wma(5),
                            peaks);
  REQUIRE(none.size() == 3);
  for (const auto& [id, v] : none) CHECK(v.empty());
  fs::remove_all(root);

  CHECK_THROWS_AS(SpotDirectory(model, "/nonexistent/streams",
                                SmoothingSpec::Wma(5), peaks),
                  IoError);
}
