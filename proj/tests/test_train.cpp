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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gainspot/errors.hpp"
#include "gainspot/graph.hpp"
#include "gainspot/rng.hpp"
#include "gainspot/train.hpp"

using namespace gainspot;

namespace {

DenseLayer MakeLayer(int in, int out, std::vector<float> w,
                     std::vector<float> b, Activation act) {
  DenseLayer l;
  l.in = in;
  l.out = out;
  l.weights = std::move(w);
  l.bias = std::move(b);
  l.act = act;
  return l;
}

// Small dense-softmax net with reproducible random weights.
ModelGraph TinyNet(uint64_t seed, int in, int hidden, int classes) {
  Pcg32 rng(seed, 9);
  auto rand_vec = [&](size_t n, double scale) {
    std::vector<float> v(n);
    for (float& x : v) {
      x = static_cast<float>((rng.NextDouble() * 2.0 - 1.0) * scale);
    }
    return v;
  };
  ModelGraph m;
  m.input.kind = InputSpec::Kind::kFlat;
  m.input.dim = in;
  m.layers.emplace_back(
      MakeLayer(in, hidden, rand_vec(static_cast<size_t>(in) * hidden, 0.6),
                rand_vec(hidden, 0.1), Activation::kRelu));
  m.layers.emplace_back(MakeLayer(
      hidden, classes, rand_vec(static_cast<size_t>(hidden) * classes, 0.6),
      rand_vec(classes, 0.1), Activation::kIdentity));
  m.layers.emplace_back(SoftmaxLayer{});
  return m;
}

// Linearly separable toy set: class = sign of the mean of the input.
std::vector<LabeledExample> ToyDataset(uint64_t seed, int n, int dim) {
  Pcg32 rng(seed, 11);
  std::vector<LabeledExample> out;
  for (int i = 0; i < n; ++i) {
    LabeledExample ex;
    double shift = (i % 2 == 0) ? -1.0 : 1.0;
    ex.label = (i % 2 == 0) ? 0 : 1;
    ex.input.resize(dim);
    for (float& x : ex.input) {
      x = static_cast<float>(shift + rng.NextGaussian() * 0.3);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace

TEST_CASE("cross-entropy loss and logit gradient on hand values") {
  std::vector<float> p = {0.25f, 0.75f};
  auto res = CrossEntropyLoss(p, 1);
  CHECK(res.loss == doctest::Approx(-std::log(0.75)).epsilon(1e-6));
  REQUIRE(res.grad_logits.size() == 2);
  CHECK(res.grad_logits[0] == doctest::Approx(0.25f));
  CHECK(res.grad_logits[1] == doctest::Approx(-0.25f));

  // Perfectly confident and correct: zero loss, zero gradient.
  auto sure = CrossEntropyLoss(std::vector<float>{0.0f, 1.0f}, 1);
  CHECK(sure.loss == doctest::Approx(0.0));
  CHECK(sure.grad_logits[1] == doctest::Approx(0.0f));
}

TEST_CASE("cross-entropy floors the posterior before the log") {
  auto res = CrossEntropyLoss(std::vector<float>{1.0f, 0.0f}, 1);
  CHECK(res.loss == doctest::Approx(-std::log(1e-12)).epsilon(1e-9));
  CHECK(std::isfinite(res.loss));
}

TEST_CASE("cross-entropy rejects out-of-range targets") {
  std::vector<float> p = {0.5f, 0.5f};
  CHECK_THROWS_AS(CrossEntropyLoss(p, -1), InvalidArgumentError);
  CHECK_THROWS_AS(CrossEntropyLoss(p, 2), InvalidArgumentError);
}

TEST_CASE("adam matches a hand-rolled reference over several steps") {
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  std::vector<float> params = {1.0f, -2.0f, 0.5f};
  std::vector<float> ref = params;
  AdamState state;
  // Independent reference with float-stored moments, double math.
  std::vector<float> m(3, 0.0f), v(3, 0.0f);
  Pcg32 rng(7, 0);
  for (int step = 1; step <= 5; ++step) {
    std::vector<float> g(3);
    for (float& x : g) {
      x = static_cast<float>(rng.NextDouble() * 2.0 - 1.0);
    }
    AdamStep(params, g, &state, cfg);
    for (int i = 0; i < 3; ++i) {
      double mi = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g[i];
      double vi = cfg.adam_beta2 * v[i] +
                  (1.0 - cfg.adam_beta2) * static_cast<double>(g[i]) * g[i];
      m[i] = static_cast<float>(mi);
      v[i] = static_cast<float>(vi);
      double mhat = mi / (1.0 - std::pow(cfg.adam_beta1, step));
      double vhat = vi / (1.0 - std::pow(cfg.adam_beta2, step));
      ref[i] -= static_cast<float>(cfg.learning_rate * mhat /
                                   (std::sqrt(vhat) + cfg.adam_epsilon));
    }
    for (int i = 0; i < 3; ++i) {
      CHECK(params[i] == ref[i]);
    }
  }
  CHECK(state.step == 5);
}

TEST_CASE("adam first step moves each param by about lr") {
  // With zero state, bias correction makes mhat = g and vhat = g*g, so the
  // first update is lr * sign(g) up to epsilon.
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  std::vector<float> params = {0.0f, 0.0f};
  std::vector<float> g = {3.0f, -0.25f};
  AdamState state;
  AdamStep(params, g, &state, cfg);
  CHECK(params[0] == doctest::Approx(-0.05).epsilon(1e-4));
  CHECK(params[1] == doctest::Approx(0.05).epsilon(1e-4));
}

TEST_CASE("adam rejects mismatched sizes") {
  TrainConfig cfg;
  std::vector<float> params = {1.0f, 2.0f};
  std::vector<float> g = {1.0f};
  AdamState state;
  CHECK_THROWS_AS(AdamStep(params, g, &state, cfg), ShapeError);
  std::vector<float> g2 = {1.0f, 1.0f};
  AdamStep(params, g2, &state, cfg);
  std::vector<float> p3 = {1.0f, 2.0f, 3.0f};
  std::vector<float> g3 = {1.0f, 1.0f, 1.0f};
  CHECK_THROWS_AS(AdamStep(p3, g3, &state, cfg), ShapeError);
}

TEST_CASE("gradients match central finite differences") {
  ModelGraph model = TinyNet(3, 4, 5, 2);
  LabeledExample ex;
  ex.input = {0.3f, -0.7f, 1.1f, 0.4f};
  ex.label = 1;

  GradientResult res = ComputeGradients(model, ex);
  CHECK(res.grad_weights.size() == 2);
  CHECK(res.grad_bias.size() == 2);

  auto loss_of = [&](const ModelGraph& m) {
    auto p = Forward(m, ex.input);
    return -std::log(std::max(static_cast<double>(p[ex.label]), 1e-12));
  };

  const double h = 1e-3;
  int dense_idx = 0;
  for (size_t li = 0; li < model.layers.size(); ++li) {
    auto* d = std::get_if<DenseLayer>(&model.layers[li]);
    if (!d) continue;
    for (size_t wi = 0; wi < d->weights.size(); wi += 3) {
      ModelGraph lo = model, hi = model;
      std::get<DenseLayer>(lo.layers[li]).weights[wi] -= h;
      std::get<DenseLayer>(hi.layers[li]).weights[wi] += h;
      double fd = (loss_of(hi) - loss_of(lo)) / (2.0 * h);
      double an = res.grad_weights[dense_idx][wi];
      CHECK(std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-2}) <
            2e-2);
    }
    for (size_t bi = 0; bi < d->bias.size(); ++bi) {
      ModelGraph lo = model, hi = model;
      std::get<DenseLayer>(lo.layers[li]).bias[bi] -= h;
      std::get<DenseLayer>(hi.layers[li]).bias[bi] += h;
      double fd = (loss_of(hi) - loss_of(lo)) / (2.0 * h);
      double an = res.grad_bias[dense_idx][bi];
      CHECK(std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-2}) <
            2e-2);
    }
    ++dense_idx;
  }
}

TEST_CASE("gradients flow through a frozen delta front") {
  // Gradients of a frozen-delta model equal the gradients of the same
  // dense stack trained on pre-differenced inputs.
  DeltaMatrixSpec spec{4, 2};
  ModelGraph dense_only = TinyNet(8, spec.OutDim(), 4, 2);

  ModelGraph fronted = dense_only;
  fronted.input.dim = spec.InDim();
  FrozenDeltaLayer fd;
  fd.frames_per_band = spec.frames_per_band;
  fd.bands = spec.bands;
  fronted.layers.insert(fronted.layers.begin(), fd);

  LabeledExample raw;
  raw.input = {0.1f, 0.5f, -0.2f, 0.9f, 1.0f, 0.3f, -0.4f, 0.2f};
  raw.label = 0;
  LabeledExample pre;
  pre.input = ApplyDelta(spec, raw.input);
  pre.label = 0;

  GradientResult a = ComputeGradients(fronted, raw);
  GradientResult b = ComputeGradients(dense_only, pre);
  CHECK(a.loss == doctest::Approx(b.loss));
  REQUIRE(a.grad_weights.size() == b.grad_weights.size());
  for (size_t k = 0; k < a.grad_weights.size(); ++k) {
    REQUIRE(a.grad_weights[k] == b.grad_weights[k]);
    REQUIRE(a.grad_bias[k] == b.grad_bias[k]);
  }
}

TEST_CASE("training reduces loss and fits a separable toy set") {
  ModelGraph model = TinyNet(21, 6, 8, 2);
  auto data = ToyDataset(5, 64, 6);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.batch_size = 8;
  cfg.dropout_prob = 0.0;
  cfg.seed = 1;
  auto history = Train(&model, data, cfg);
  REQUIRE(history.size() == 20);
  CHECK(history.back().mean_loss < 0.5 * history.front().mean_loss);
  CHECK(history.back().accuracy == doctest::Approx(1.0));
  // The trained model classifies a fresh point correctly.
  std::vector<float> probe(6, 1.0f);
  auto p = Forward(model, probe);
  CHECK(p[1] > 0.5f);
}

TEST_CASE("training is deterministic in the seed") {
  auto data = ToyDataset(5, 32, 6);
  TrainConfig cfg;
  cfg.epochs = 4;
  cfg.batch_size = 8;
  cfg.seed = 3;
  ModelGraph a = TinyNet(21, 6, 8, 2);
  ModelGraph b = TinyNet(21, 6, 8, 2);
  auto ha = Train(&a, data, cfg);
  auto hb = Train(&b, data, cfg);
  for (size_t i = 0; i < ha.size(); ++i) {
    CHECK(ha[i].mean_loss == hb[i].mean_loss);
    CHECK(ha[i].accuracy == hb[i].accuracy);
  }
  for (size_t li = 0; li < a.layers.size(); ++li) {
    auto* da = std::get_if<DenseLayer>(&a.layers[li]);
    if (!da) continue;
    const auto& db = std::get<DenseLayer>(b.layers[li]);
    CHECK(da->weights == db.weights);
    CHECK(da->bias == db.bias);
  }
}

TEST_CASE("zero epochs leaves the model untouched") {
  ModelGraph model = TinyNet(21, 6, 8, 2);
  ModelGraph before = model;
  TrainConfig cfg;
  cfg.epochs = 0;
  auto history = Train(&model, ToyDataset(5, 8, 6), cfg);
  CHECK(history.empty());
  const auto& w0 = std::get<DenseLayer>(model.layers[0]).weights;
  CHECK(w0 == std::get<DenseLayer>(before.layers[0]).weights);
}

TEST_CASE("zero-sum mode keeps the first layer on the constraint set") {
  DeltaMatrixSpec spec{3, 2};
  ModelGraph model = TinyNet(21, spec.InDim(), 8, 2);
  auto data = ToyDataset(5, 32, spec.InDim());
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 8;
  cfg.first_layer_mode = FirstLayerMode::kZeroSumConstraint;
  cfg.zero_sum_spec = spec;
  Train(&model, data, cfg);
  const auto& first = std::get<DenseLayer>(model.layers[0]);
  CHECK(MaxBlockSumResidual(first.weights, first.out, spec) < 1e-5);
}

TEST_CASE("zero-sum mode validates its delta spec") {
  ModelGraph model = TinyNet(21, 6, 8, 2);
  auto data = ToyDataset(5, 8, 6);
  TrainConfig cfg;
  cfg.first_layer_mode = FirstLayerMode::kZeroSumConstraint;
  SUBCASE("missing spec") {
    CHECK_THROWS_AS(Train(&model, data, cfg), InvalidArgumentError);
  }
  SUBCASE("mismatched spec") {
    cfg.zero_sum_spec = DeltaMatrixSpec{4, 2};  // InDim 8 != 6
    CHECK_THROWS_AS(Train(&model, data, cfg), ShapeError);
  }
}

TEST_CASE("frozen-delta training equals dense training on pre-deltaed data") {
  DeltaMatrixSpec spec{4, 2};
  ModelGraph dense_only = TinyNet(8, spec.OutDim(), 4, 2);
  ModelGraph fronted = dense_only;
  fronted.input.dim = spec.InDim();
  FrozenDeltaLayer fd;
  fd.frames_per_band = spec.frames_per_band;
  fd.bands = spec.bands;
  fronted.layers.insert(fronted.layers.begin(), fd);

  auto raw = ToyDataset(9, 24, spec.InDim());
  std::vector<LabeledExample> pre;
  for (const auto& ex : raw) {
    pre.push_back({ApplyDelta(spec, ex.input), ex.label});
  }

  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 4;
  cfg.dropout_prob = 0.0;  // keep the dropout RNG stream out of play
  cfg.seed = 2;
  auto ha = Train(&fronted, raw, cfg);
  auto hb = Train(&dense_only, pre, cfg);
  for (size_t i = 0; i < ha.size(); ++i) {
    CHECK(ha[i].mean_loss == hb[i].mean_loss);
  }
  for (size_t k = 0; k < dense_only.layers.size(); ++k) {
    auto* db = std::get_if<DenseLayer>(&dense_only.layers[k]);
    if (!db) continue;
    const auto& da = std::get<DenseLayer>(fronted.layers[k + 1]);
    CHECK(da.weights == db->weights);
  }
}

TEST_CASE("train validates dataset, config and architecture") {
  ModelGraph model = TinyNet(21, 6, 8, 2);
  auto data = ToyDataset(5, 8, 6);
  SUBCASE("empty dataset") {
    TrainConfig cfg;
    CHECK_THROWS_AS(Train(&model, {}, cfg), InvalidArgumentError);
  }
  SUBCASE("bad learning rate") {
    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(Train(&model, data, cfg), InvalidArgumentError);
  }
  SUBCASE("bad dropout") {
    TrainConfig cfg;
    cfg.dropout_prob = 1.0;
    CHECK_THROWS_AS(Train(&model, data, cfg), InvalidArgumentError);
  }
  SUBCASE("bad batch size") {
    TrainConfig cfg;
    cfg.batch_size = 0;
    CHECK_THROWS_AS(Train(&model, data, cfg), InvalidArgumentError);
  }
  SUBCASE("conv layers are not trainable") {
    ModelGraph cnn = MakePreset("cnn-5c3f", "baseline", 1);
    TrainConfig cfg;
    LabeledExample ex;
    ex.input.assign(static_cast<size_t>(cnn.input.Size()), 0.0f);
    CHECK_THROWS_AS(Train(&cnn, {ex}, cfg), UnsupportedLayerError);
  }
}

TEST_CASE("loss csv format") {
  std::vector<EpochStats> history = {{0.693, 0.5}, {0.25, 0.875}};
  auto path =
      (std::filesystem::temp_directory_path() / "gainspot_loss.csv").string();
  WriteLossCsv(history, path);
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  CHECK(line == "epoch,mean_loss,train_accuracy");
  std::getline(f, line);
  CHECK(line == "0,0.693,0.5");
  std::getline(f, line);
  CHECK(line == "1,0.25,0.875");
  CHECK_FALSE(std::getline(f, line));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(WriteLossCsv(history, "/nonexistent/dir/loss.csv"), IoError);
}
