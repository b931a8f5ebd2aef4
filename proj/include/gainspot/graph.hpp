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

#ifndef GAINSPOT_GRAPH_HPP_
#define GAINSPOT_GRAPH_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gainspot {

enum class Activation { kIdentity, kRelu };

struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<float> weights;  // out x in, row-major
  std::vector<float> bias;     // out
  Activation act = Activation::kIdentity;
};

// Valid padding, stride 1.
struct Conv2DLayer {
  int out_ch = 0, in_ch = 0, kh = 0, kw = 0;
  std::vector<float> weights;  // out_ch x in_ch x kh x kw
  std::vector<float> bias;     // out_ch
  Activation act = Activation::kIdentity;
};

// Inference-only batch normalization over the feature (row) axis.
struct BatchNormLayer {
  std::vector<float> gamma, beta, mean, variance;
  float epsilon = 1e-5f;
};

// Fixed temporal difference along the time axis: for band-major input of
// L blocks of n frames, each block maps [x_1..x_n] -> [x_2-x_1, ..,
// x_n-x_{n-1}]. Weights are not trainable.
struct FrozenDeltaLayer {
  int frames_per_band = 0;  // n
  int bands = 0;            // L
};

struct SoftmaxLayer {};

using Layer = std::variant<DenseLayer, Conv2DLayer, BatchNormLayer,
                           FrozenDeltaLayer, SoftmaxLayer>;

// Block structure of the first-difference transform: D is block-diagonal
// with `bands` copies of the (n-1) x n matrix with -1 on the diagonal and
// +1 on the superdiagonal.
struct DeltaMatrixSpec {
  int frames_per_band = 0;  // n >= 2
  int bands = 1;            // L >= 1

  int InDim() const { return frames_per_band * bands; }
  int OutDim() const { return (frames_per_band - 1) * bands; }
};

struct InputSpec {
  enum class Kind { kFlat, kGrid };
  Kind kind = Kind::kFlat;
  int dim = 0;     // flat
  int bands = 0;   // grid
  int frames = 0;  // grid

  int Size() const {
    return kind == Kind::kFlat ? dim : bands * frames;
  }
};

struct ModelMetadata {
  std::string preset;          // "dnn-6f" | "cnn-5c3f" | ""
  std::string mode;            // "baseline" | "frozen-delta" | "zero-sum"
  std::string feature_preset;  // "lfbe20" | "lfbe64"
  std::string smoothing_kind;  // "wma" | "ema"
  double smoothing_param = 0;  // window steps or alpha
  int wake_class = 1;
  std::string notes;
};

struct ModelGraph {
  InputSpec input;
  std::vector<Layer> layers;
  ModelMetadata metadata;
};

// Run the graph; returns the softmax posterior vector.
std::vector<float> Forward(const ModelGraph& model,
                           std::span<const float> input);

// Grid form of the frozen delta: out[band][t] = in[band][t+1] - in[band][t].
// `grid` is band-major (bands x frames).
std::vector<float> FrozenDeltaForward(std::span<const float> grid, int bands,
                                      int frames);

// Dense materialization of D, (n-1)L x nL, row-major.
std::vector<float> BuildDeltaMatrix(const DeltaMatrixSpec& spec);

// Matrix-free D*x (the fast path).
std::vector<float> ApplyDelta(const DeltaMatrixSpec& spec,
                              std::span<const float> x);

// V = W * D for W of shape rows x (n-1)L; V is rows x nL. Every per-band
// block of every row of V sums to zero.
std::vector<float> FoldDelta(std::span<const float> w, int rows,
                             const DeltaMatrixSpec& spec);

// Inverse factorization via per-band prefix sums; throws ConstraintError
// if some per-band row-block sum of V exceeds tol relative to the row's
// max-abs entry.
std::vector<float> UnfoldDelta(std::span<const float> v, int rows,
                               const DeltaMatrixSpec& spec,
                               double tol = 1e-4);

// Orthogonal projection onto the per-band zero-sum constraint set:
// subtract each row's per-band block mean. Idempotent.
std::vector<float> ProjectZeroSum(std::span<const float> v, int rows,
                                  const DeltaMatrixSpec& spec);

// Largest |per-band row-block sum| over all rows and bands.
double MaxBlockSumResidual(std::span<const float> v, int rows,
                           const DeltaMatrixSpec& spec);

// Versioned JSON model file; floats carry 9 significant digits, enough to
// round-trip 32-bit values exactly.
void SaveModel(const ModelGraph& model, const std::string& path);
ModelGraph LoadModel(const std::string& path);

// Presets from the two reference architectures: "dnn-6f" (flat 540 input,
// six dense layers) and "cnn-5c3f" (64x100 grid, five conv + three dense).
// mode is "baseline", "frozen-delta" or "zero-sum" (zero-sum is dnn-only).
// Weights are seeded He-normal; the zero-sum first layer is projected.
ModelGraph MakePreset(const std::string& preset, const std::string& mode,
                      uint64_t seed);

size_t ParameterCount(const ModelGraph& model);

// Delta block structure of a flat-input model's first layer, derived from
// the feature preset (n = stacked frames, L = bands).
DeltaMatrixSpec PresetDeltaSpec(const std::string& preset);

}  // namespace gainspot

#endif  // GAINSPOT_GRAPH_HPP_
