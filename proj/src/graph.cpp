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

#include "gainspot/graph.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "gainspot/errors.hpp"
#include "gainspot/rng.hpp"

namespace gainspot {

namespace {

using nlohmann::json;

void ApplyActivation(Activation act, std::vector<float>* v) {
  if (act == Activation::kRelu) {
    for (float& x : *v) {
      if (x < 0.0f) x = 0.0f;
    }
  }
}

// Intermediate activation: flat vector, or ch x h x w grid.
struct Act {
  std::vector<float> data;
  bool flat = true;
  int ch = 1, h = 0, w = 0;
};

std::vector<float> DenseForward(const DenseLayer& l,
                                std::span<const float> x) {
  if (static_cast<int>(x.size()) != l.in) {
    throw ShapeError("Dense: input size mismatch");
  }
  std::vector<float> out(l.out);
  for (int r = 0; r < l.out; ++r) {
    const float* w = l.weights.data() + static_cast<size_t>(r) * l.in;
    // Double accumulation, 4-way: keeps the per-band cancellation of
    // constrained first layers tight.
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    int i = 0;
    for (; i + 4 <= l.in; i += 4) {
      a0 += static_cast<double>(w[i]) * x[i];
      a1 += static_cast<double>(w[i + 1]) * x[i + 1];
      a2 += static_cast<double>(w[i + 2]) * x[i + 2];
      a3 += static_cast<double>(w[i + 3]) * x[i + 3];
    }
    for (; i < l.in; ++i) a0 += static_cast<double>(w[i]) * x[i];
    out[r] = static_cast<float>(a0 + a1 + a2 + a3 + l.bias[r]);
  }
  return out;
}

Act Conv2DForward(const Conv2DLayer& l, const Act& in) {
  if (in.flat || in.ch != l.in_ch || in.h < l.kh || in.w < l.kw) {
    throw ShapeError("Conv2D: input shape mismatch");
  }
  Act out;
  out.flat = false;
  out.ch = l.out_ch;
  out.h = in.h - l.kh + 1;
  out.w = in.w - l.kw + 1;
  out.data.assign(static_cast<size_t>(out.ch) * out.h * out.w, 0.0f);
  for (int oc = 0; oc < l.out_ch; ++oc) {
    for (int y = 0; y < out.h; ++y) {
      for (int x = 0; x < out.w; ++x) {
        double acc = l.bias[oc];
        for (int ic = 0; ic < l.in_ch; ++ic) {
          for (int ky = 0; ky < l.kh; ++ky) {
            const float* row = in.data.data() +
                               ((static_cast<size_t>(ic) * in.h + y + ky) *
                                in.w) + x;
            const float* k = l.weights.data() +
                             (((static_cast<size_t>(oc) * l.in_ch + ic) *
                               l.kh + ky) * l.kw);
            for (int kx = 0; kx < l.kw; ++kx) {
              acc += static_cast<double>(k[kx]) * row[kx];
            }
          }
        }
        float v = static_cast<float>(acc);
        if (l.act == Activation::kRelu && v < 0.0f) v = 0.0f;
        out.data[(static_cast<size_t>(oc) * out.h + y) * out.w + x] = v;
      }
    }
  }
  return out;
}

std::vector<float> Softmax(std::span<const float> logits) {
  double mx = -1e300;
  for (float v : logits) mx = std::max(mx, static_cast<double>(v));
  double sum = 0.0;
  std::vector<double> e(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    e[i] = std::exp(static_cast<double>(logits[i]) - mx);
    sum += e[i];
  }
  std::vector<float> out(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = static_cast<float>(e[i] / sum);
  }
  return out;
}

// 9 significant decimal digits round-trips any float32; snapping through
// the printed form keeps model files short and stable.
double SnapFloat(float v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
  return std::strtod(buf, nullptr);
}

json FloatsToJson(const std::vector<float>& v) {
  json a = json::array();
  for (float x : v) a.push_back(SnapFloat(x));
  return a;
}

std::vector<float> FloatsFromJson(const json& a) {
  std::vector<float> v;
  v.reserve(a.size());
  for (const auto& x : a) v.push_back(static_cast<float>(x.get<double>()));
  return v;
}

const char* ActName(Activation a) {
  return a == Activation::kRelu ? "relu" : "identity";
}

Activation ActFromName(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "identity") return Activation::kIdentity;
  throw FormatError("unknown activation: " + s);
}

constexpr int kModelFileVersion = 1;

}  // namespace

std::vector<float> Forward(const ModelGraph& model,
                           std::span<const float> input) {
  if (static_cast<int>(input.size()) != model.input.Size()) {
    throw ShapeError("Forward: input does not match input_spec");
  }
  Act act;
  act.data.assign(input.begin(), input.end());
  if (model.input.kind == InputSpec::Kind::kGrid) {
    act.flat = false;
    act.ch = 1;
    act.h = model.input.bands;
    act.w = model.input.frames;
  }

  for (const Layer& layer : model.layers) {
    if (const auto* d = std::get_if<DenseLayer>(&layer)) {
      act.data = DenseForward(*d, act.data);
      ApplyActivation(d->act, &act.data);
      act.flat = true;
    } else if (const auto* c = std::get_if<Conv2DLayer>(&layer)) {
      act = Conv2DForward(*c, act);
    } else if (const auto* bn = std::get_if<BatchNormLayer>(&layer)) {
      if (act.flat) {
        if (bn->gamma.size() != act.data.size()) {
          throw ShapeError("BatchNorm: size mismatch");
        }
        for (size_t i = 0; i < act.data.size(); ++i) {
          act.data[i] = bn->gamma[i] *
                            (act.data[i] - bn->mean[i]) /
                            std::sqrt(bn->variance[i] + bn->epsilon) +
                        bn->beta[i];
        }
      } else {
        if (static_cast<int>(bn->gamma.size()) != act.ch) {
          throw ShapeError("BatchNorm: channel mismatch");
        }
        size_t plane = static_cast<size_t>(act.h) * act.w;
        for (int c2 = 0; c2 < act.ch; ++c2) {
          float g = bn->gamma[c2] / std::sqrt(bn->variance[c2] + bn->epsilon);
          float b = bn->beta[c2] - bn->mean[c2] * g;
          float* p = act.data.data() + c2 * plane;
          for (size_t i = 0; i < plane; ++i) p[i] = g * p[i] + b;
        }
      }
    } else if (const auto* fd = std::get_if<FrozenDeltaLayer>(&layer)) {
      if (act.flat) {
        DeltaMatrixSpec spec{fd->frames_per_band, fd->bands};
        act.data = ApplyDelta(spec, act.data);
      } else {
        if (act.ch != 1 || act.h != fd->bands || act.w != fd->frames_per_band) {
          throw ShapeError("FrozenDelta: grid shape mismatch");
        }
        act.data = FrozenDeltaForward(act.data, act.h, act.w);
        act.w -= 1;
      }
    } else if (std::get_if<SoftmaxLayer>(&layer)) {
      act.data = Softmax(act.data);
      act.flat = true;
    }
  }
  return act.data;
}

std::vector<float> FrozenDeltaForward(std::span<const float> grid, int bands,
                                      int frames) {
  if (frames < 2) throw TooShortError("FrozenDeltaForward: frames < 2");
  if (static_cast<int>(grid.size()) != bands * frames) {
    throw ShapeError("FrozenDeltaForward: grid size mismatch");
  }
  std::vector<float> out(static_cast<size_t>(bands) * (frames - 1));
  for (int b = 0; b < bands; ++b) {
    const float* in = grid.data() + static_cast<size_t>(b) * frames;
    float* o = out.data() + static_cast<size_t>(b) * (frames - 1);
    for (int t = 0; t < frames - 1; ++t) {
      o[t] = in[t + 1] - in[t];
    }
  }
  return out;
}

std::vector<float> BuildDeltaMatrix(const DeltaMatrixSpec& spec) {
  if (spec.frames_per_band < 2 || spec.bands < 1) {
    throw InvalidArgumentError("BuildDeltaMatrix: need n >= 2, L >= 1");
  }
  int n = spec.frames_per_band;
  int rows = spec.OutDim(), cols = spec.InDim();
  std::vector<float> d(static_cast<size_t>(rows) * cols, 0.0f);
  for (int b = 0; b < spec.bands; ++b) {
    for (int j = 0; j < n - 1; ++j) {
      int r = b * (n - 1) + j;
      int c = b * n + j;
      d[static_cast<size_t>(r) * cols + c] = -1.0f;
      d[static_cast<size_t>(r) * cols + c + 1] = 1.0f;
    }
  }
  return d;
}

std::vector<float> ApplyDelta(const DeltaMatrixSpec& spec,
                              std::span<const float> x) {
  return FrozenDeltaForward(x, spec.bands, spec.frames_per_band);
}

namespace {

// Fold the float block's rounding residual into its smallest-magnitude
// entry, where the float grid is finest; leaves |block sum| at ulp level.
void AbsorbBlockResidual(float* vb, int n) {
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += vb[j];
  if (sum == 0.0) return;
  int k = 0;
  for (int j = 1; j < n; ++j) {
    if (std::fabs(vb[j]) < std::fabs(vb[k])) k = j;
  }
  vb[k] = static_cast<float>(static_cast<double>(vb[k]) - sum);
}

}  // namespace

std::vector<float> FoldDelta(std::span<const float> w, int rows,
                             const DeltaMatrixSpec& spec) {
  int n = spec.frames_per_band;
  if (static_cast<int>(w.size()) != rows * spec.OutDim()) {
    throw ShapeError("FoldDelta: W shape mismatch");
  }
  std::vector<float> v(static_cast<size_t>(rows) * spec.InDim());
  for (int r = 0; r < rows; ++r) {
    for (int b = 0; b < spec.bands; ++b) {
      const float* wb =
          w.data() + static_cast<size_t>(r) * spec.OutDim() + b * (n - 1);
      float* vb = v.data() + static_cast<size_t>(r) * spec.InDim() + b * n;
      vb[0] = -wb[0];
      for (int j = 1; j < n - 1; ++j) {
        vb[j] = wb[j - 1] - wb[j];
      }
      vb[n - 1] = wb[n - 2];
      AbsorbBlockResidual(vb, n);
    }
  }
  return v;
}

std::vector<float> UnfoldDelta(std::span<const float> v, int rows,
                               const DeltaMatrixSpec& spec, double tol) {
  int n = spec.frames_per_band;
  if (static_cast<int>(v.size()) != rows * spec.InDim()) {
    throw ShapeError("UnfoldDelta: V shape mismatch");
  }
  std::vector<float> w(static_cast<size_t>(rows) * spec.OutDim());
  for (int r = 0; r < rows; ++r) {
    const float* vr = v.data() + static_cast<size_t>(r) * spec.InDim();
    double max_abs = 0.0;
    for (int c = 0; c < spec.InDim(); ++c) {
      max_abs = std::max(max_abs, std::fabs(static_cast<double>(vr[c])));
    }
    double limit = tol * std::max(max_abs, 1.0);
    for (int b = 0; b < spec.bands; ++b) {
      const float* vb = vr + b * n;
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += vb[j];
      if (std::fabs(sum) > limit) {
        throw ConstraintError(
            "UnfoldDelta: per-band row sum " + std::to_string(sum) +
            " exceeds tolerance in row " + std::to_string(r));
      }
      float* wb =
          w.data() + static_cast<size_t>(r) * spec.OutDim() + b * (n - 1);
      double prefix = 0.0;
      for (int j = 0; j < n - 1; ++j) {
        prefix += vb[j];
        wb[j] = static_cast<float>(-prefix);
      }
    }
  }
  return w;
}

std::vector<float> ProjectZeroSum(std::span<const float> v, int rows,
                                  const DeltaMatrixSpec& spec) {
  int n = spec.frames_per_band;
  if (static_cast<int>(v.size()) != rows * spec.InDim()) {
    throw ShapeError("ProjectZeroSum: V shape mismatch");
  }
  std::vector<float> out(v.begin(), v.end());
  for (int r = 0; r < rows; ++r) {
    for (int b = 0; b < spec.bands; ++b) {
      float* vb = out.data() + static_cast<size_t>(r) * spec.InDim() + b * n;
      // Mean subtraction, then fold the float rounding residual into the
      // smallest entry so each block sum lands at ulp level.
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += vb[j];
      float mean = static_cast<float>(sum / n);
      if (mean != 0.0f) {
        for (int j = 0; j < n; ++j) vb[j] -= mean;
      }
      AbsorbBlockResidual(vb, n);
    }
  }
  return out;
}

double MaxBlockSumResidual(std::span<const float> v, int rows,
                           const DeltaMatrixSpec& spec) {
  int n = spec.frames_per_band;
  double worst = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int b = 0; b < spec.bands; ++b) {
      const float* vb = v.data() + static_cast<size_t>(r) * spec.InDim() + b * n;
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += vb[j];
      worst = std::max(worst, std::fabs(sum));
    }
  }
  return worst;
}

void SaveModel(const ModelGraph& model, const std::string& path) {
  json j;
  j["version"] = kModelFileVersion;
  json in;
  if (model.input.kind == InputSpec::Kind::kFlat) {
    in["kind"] = "flat";
    in["dim"] = model.input.dim;
  } else {
    in["kind"] = "grid";
    in["bands"] = model.input.bands;
    in["frames"] = model.input.frames;
  }
  j["input_spec"] = in;

  json layers = json::array();
  for (const Layer& layer : model.layers) {
    json l;
    if (const auto* d = std::get_if<DenseLayer>(&layer)) {
      l["type"] = "dense";
      l["in"] = d->in;
      l["out"] = d->out;
      l["activation"] = ActName(d->act);
      l["weights"] = FloatsToJson(d->weights);
      l["bias"] = FloatsToJson(d->bias);
    } else if (const auto* c = std::get_if<Conv2DLayer>(&layer)) {
      l["type"] = "conv2d";
      l["out_ch"] = c->out_ch;
      l["in_ch"] = c->in_ch;
      l["kh"] = c->kh;
      l["kw"] = c->kw;
      l["activation"] = ActName(c->act);
      l["weights"] = FloatsToJson(c->weights);
      l["bias"] = FloatsToJson(c->bias);
    } else if (const auto* bn = std::get_if<BatchNormLayer>(&layer)) {
      l["type"] = "batchnorm";
      l["gamma"] = FloatsToJson(bn->gamma);
      l["beta"] = FloatsToJson(bn->beta);
      l["mean"] = FloatsToJson(bn->mean);
      l["variance"] = FloatsToJson(bn->variance);
      l["epsilon"] = SnapFloat(bn->epsilon);
    } else if (const auto* fd = std::get_if<FrozenDeltaLayer>(&layer)) {
      l["type"] = "frozen_delta";
      l["frames_per_band"] = fd->frames_per_band;
      l["bands"] = fd->bands;
    } else {
      l["type"] = "softmax";
    }
    layers.push_back(std::move(l));
  }
  j["layers"] = std::move(layers);

  json md;
  md["preset"] = model.metadata.preset;
  md["mode"] = model.metadata.mode;
  md["feature_preset"] = model.metadata.feature_preset;
  md["smoothing_kind"] = model.metadata.smoothing_kind;
  md["smoothing_param"] = model.metadata.smoothing_param;
  md["wake_class"] = model.metadata.wake_class;
  md["notes"] = model.metadata.notes;
  j["metadata"] = std::move(md);

  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("SaveModel: cannot open " + path);
  f << j.dump() << "\n";
  if (!f) throw IoError("SaveModel: write failed: " + path);
}

ModelGraph LoadModel(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("LoadModel: cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw FormatError("LoadModel: invalid JSON in " + path + ": " + e.what());
  }
  try {
    if (j.at("version").get<int>() != kModelFileVersion) {
      throw FormatError("LoadModel: unsupported model file version " +
                        std::to_string(j.at("version").get<int>()));
    }
    ModelGraph m;
    const json& in = j.at("input_spec");
    if (in.at("kind") == "flat") {
      m.input.kind = InputSpec::Kind::kFlat;
      m.input.dim = in.at("dim").get<int>();
    } else {
      m.input.kind = InputSpec::Kind::kGrid;
      m.input.bands = in.at("bands").get<int>();
      m.input.frames = in.at("frames").get<int>();
    }
    for (const json& l : j.at("layers")) {
      std::string type = l.at("type").get<std::string>();
      if (type == "dense") {
        DenseLayer d;
        d.in = l.at("in").get<int>();
        d.out = l.at("out").get<int>();
        d.act = ActFromName(l.at("activation").get<std::string>());
        d.weights = FloatsFromJson(l.at("weights"));
        d.bias = FloatsFromJson(l.at("bias"));
        if (static_cast<int>(d.weights.size()) != d.in * d.out ||
            static_cast<int>(d.bias.size()) != d.out) {
          throw FormatError("LoadModel: dense layer size mismatch");
        }
        m.layers.emplace_back(std::move(d));
      } else if (type == "conv2d") {
        Conv2DLayer c;
        c.out_ch = l.at("out_ch").get<int>();
        c.in_ch = l.at("in_ch").get<int>();
        c.kh = l.at("kh").get<int>();
        c.kw = l.at("kw").get<int>();
        c.act = ActFromName(l.at("activation").get<std::string>());
        c.weights = FloatsFromJson(l.at("weights"));
        c.bias = FloatsFromJson(l.at("bias"));
        if (static_cast<int>(c.weights.size()) !=
            c.out_ch * c.in_ch * c.kh * c.kw) {
          throw FormatError("LoadModel: conv layer size mismatch");
        }
        m.layers.emplace_back(std::move(c));
      } else if (type == "batchnorm") {
        BatchNormLayer bn;
        bn.gamma = FloatsFromJson(l.at("gamma"));
        bn.beta = FloatsFromJson(l.at("beta"));
        bn.mean = FloatsFromJson(l.at("mean"));
        bn.variance = FloatsFromJson(l.at("variance"));
        bn.epsilon = static_cast<float>(l.at("epsilon").get<double>());
        m.layers.emplace_back(std::move(bn));
      } else if (type == "frozen_delta") {
        FrozenDeltaLayer fd;
        fd.frames_per_band = l.at("frames_per_band").get<int>();
        fd.bands = l.at("bands").get<int>();
        m.layers.emplace_back(fd);
      } else if (type == "softmax") {
        m.layers.emplace_back(SoftmaxLayer{});
      } else {
        throw FormatError("LoadModel: unknown layer type " + type);
      }
    }
    const json& md = j.at("metadata");
    m.metadata.preset = md.value("preset", "");
    m.metadata.mode = md.value("mode", "");
    m.metadata.feature_preset = md.value("feature_preset", "");
    m.metadata.smoothing_kind = md.value("smoothing_kind", "");
    m.metadata.smoothing_param = md.value("smoothing_param", 0.0);
    m.metadata.wake_class = md.value("wake_class", 1);
    m.metadata.notes = md.value("notes", "");
    return m;
  } catch (const json::exception& e) {
    throw FormatError("LoadModel: malformed model file " + path + ": " +
                      e.what());
  }
}

namespace {

DenseLayer MakeDense(int in, int out, Activation act, Pcg32* rng,
                     double input_scale = 1.0) {
  DenseLayer d;
  d.in = in;
  d.out = out;
  d.act = act;
  d.weights.resize(static_cast<size_t>(in) * out);
  // He init, deflated by the expected input magnitude so raw log-energy
  // features (no normalizer in this pipeline) do not saturate at start.
  double std = std::sqrt(2.0 / in) / input_scale;
  for (float& w : d.weights) {
    w = static_cast<float>(rng->NextGaussian() * std);
  }
  d.bias.assign(out, 0.0f);
  return d;
}

Conv2DLayer MakeConv(int out_ch, int in_ch, int kh, int kw, Activation act,
                     Pcg32* rng) {
  Conv2DLayer c;
  c.out_ch = out_ch;
  c.in_ch = in_ch;
  c.kh = kh;
  c.kw = kw;
  c.act = act;
  c.weights.resize(static_cast<size_t>(out_ch) * in_ch * kh * kw);
  double std = std::sqrt(2.0 / (in_ch * kh * kw));
  for (float& w : c.weights) {
    w = static_cast<float>(rng->NextGaussian() * std);
  }
  c.bias.assign(out_ch, 0.0f);
  return c;
}

}  // namespace

DeltaMatrixSpec PresetDeltaSpec(const std::string& preset) {
  if (preset == "dnn-6f") return DeltaMatrixSpec{27, 20};
  if (preset == "cnn-5c3f") return DeltaMatrixSpec{100, 64};
  throw InvalidArgumentError("unknown preset: " + preset);
}

ModelGraph MakePreset(const std::string& preset, const std::string& mode,
                      uint64_t seed) {
  if (mode != "baseline" && mode != "frozen-delta" && mode != "zero-sum") {
    throw InvalidArgumentError("unknown mode: " + mode);
  }
  ModelGraph m;
  m.metadata.preset = preset;
  m.metadata.mode = mode;
  m.metadata.wake_class = 1;
  m.metadata.notes =
      "hidden widths chosen to approximate the published parameter budget";

  if (preset == "dnn-6f") {
    // Six dense layers; widths picked for ~222K parameters.
    const int widths[] = {192, 192, 160, 128, 128};
    m.input.kind = InputSpec::Kind::kFlat;
    m.input.dim = 540;
    m.metadata.feature_preset = "lfbe20";
    m.metadata.smoothing_kind = "wma";
    m.metadata.smoothing_param = 30;
    int in = 540;
    int layer_idx = 0;
    if (mode == "frozen-delta") {
      m.layers.emplace_back(FrozenDeltaLayer{27, 20});
      in = 26 * 20;
    }
    for (int wdt : widths) {
      Pcg32 rng(seed, layer_idx++);
      // The first layer is linear: it hosts the fold / zero-sum algebra,
      // and a ReLU there dies under raw log-energy inputs (all-positive,
      // large common offset). Its init is deflated for the same reason.
      bool first = layer_idx == 1;
      m.layers.emplace_back(
          MakeDense(in, wdt, first ? Activation::kIdentity : Activation::kRelu,
                    &rng, first ? 16.0 : 1.0));
      in = wdt;
    }
    Pcg32 rng(seed, layer_idx);
    m.layers.emplace_back(MakeDense(in, 2, Activation::kIdentity, &rng));
    m.layers.emplace_back(SoftmaxLayer{});
    if (mode == "zero-sum") {
      auto& first = std::get<DenseLayer>(m.layers.front());
      first.weights =
          ProjectZeroSum(first.weights, first.out, DeltaMatrixSpec{27, 20});
    }
    return m;
  }

  if (preset == "cnn-5c3f") {
    if (mode == "zero-sum") {
      throw InvalidArgumentError(
          "zero-sum mode applies to flat-input models only");
    }
    // Five conv + three dense; ~5.6M parameters.
    m.input.kind = InputSpec::Kind::kGrid;
    m.input.bands = 64;
    m.input.frames = (mode == "frozen-delta") ? 101 : 100;
    m.metadata.feature_preset = "lfbe64";
    m.metadata.smoothing_kind = "ema";
    m.metadata.smoothing_param = 0.1;
    if (mode == "frozen-delta") {
      m.layers.emplace_back(FrozenDeltaLayer{101, 64});
    }
    struct ConvSpec {
      int out_ch, kh, kw;
    };
    const ConvSpec convs[] = {{16, 5, 5}, {32, 3, 3}, {32, 3, 3},
                              {48, 3, 3}, {48, 3, 3}};
    int in_ch = 1, h = 64, w = 100;
    int layer_idx = 0;
    for (const ConvSpec& cs : convs) {
      Pcg32 rng(seed, layer_idx++);
      m.layers.emplace_back(
          MakeConv(cs.out_ch, in_ch, cs.kh, cs.kw, Activation::kRelu, &rng));
      in_ch = cs.out_ch;
      h -= cs.kh - 1;
      w -= cs.kw - 1;
    }
    int flat = in_ch * h * w;
    const int dense_widths[] = {24, 24};
    for (int wdt : dense_widths) {
      Pcg32 rng(seed, layer_idx++);
      m.layers.emplace_back(MakeDense(flat, wdt, Activation::kRelu, &rng));
      flat = wdt;
    }
    Pcg32 rng(seed, layer_idx++);
    m.layers.emplace_back(MakeDense(flat, 2, Activation::kIdentity, &rng));
    m.layers.emplace_back(SoftmaxLayer{});
    return m;
  }

  throw InvalidArgumentError("unknown preset: " + preset);
}

size_t ParameterCount(const ModelGraph& model) {
  size_t n = 0;
  for (const Layer& layer : model.layers) {
    if (const auto* d = std::get_if<DenseLayer>(&layer)) {
      n += d->weights.size() + d->bias.size();
    } else if (const auto* c = std::get_if<Conv2DLayer>(&layer)) {
      n += c->weights.size() + c->bias.size();
    } else if (const auto* bn = std::get_if<BatchNormLayer>(&layer)) {
      n += bn->gamma.size() + bn->beta.size();
    }
  }
  return n;
}

}  // namespace gainspot
