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

#ifndef GAINSPOT_TRAIN_HPP_
#define GAINSPOT_TRAIN_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gainspot/graph.hpp"

namespace gainspot {

enum class FirstLayerMode { kBaseline, kFrozenDelta, kZeroSumConstraint };

struct TrainConfig {
  double learning_rate = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double dropout_prob = 0.3;
  int epochs = 10;
  int batch_size = 32;
  uint64_t seed = 0;
  FirstLayerMode first_layer_mode = FirstLayerMode::kBaseline;
  // Band structure of the first layer, required in zero-sum mode.
  DeltaMatrixSpec zero_sum_spec{0, 0};
};

struct LabeledExample {
  std::vector<float> input;
  int label = 0;
};

struct EpochStats {
  double mean_loss = 0.0;
  double accuracy = 0.0;
};

struct CrossEntropyResult {
  double loss = 0.0;
  std::vector<float> grad_logits;  // p - onehot(target)
};

// Loss and logit gradient from softmax posteriors. The posterior is
// floored at 1e-12 inside the log.
CrossEntropyResult CrossEntropyLoss(std::span<const float> posteriors,
                                    int target);

struct AdamState {
  int64_t step = 0;
  std::vector<float> m;
  std::vector<float> v;
};

// Bias-corrected ADAM update, in place on `params`. State vectors are
// lazily sized on first use.
void AdamStep(std::span<float> params, std::span<const float> grads,
              AdamState* state, const TrainConfig& cfg);

struct GradientResult {
  double loss = 0.0;
  std::vector<std::vector<float>> grad_weights;  // one entry per dense layer
  std::vector<std::vector<float>> grad_bias;
};

// Single-example forward/backward without dropout. Grads follow the
// model's dense-layer order.
GradientResult ComputeGradients(const ModelGraph& model,
                                const LabeledExample& ex);

// Mini-batch cross-entropy training of a dense (optionally
// frozen-delta-fronted) softmax model. Deterministic given cfg.seed.
// In zero-sum mode the first dense layer is reprojected onto the
// per-band zero-sum set after every optimizer step.
std::vector<EpochStats> Train(ModelGraph* model,
                              const std::vector<LabeledExample>& dataset,
                              const TrainConfig& cfg);

// CSV: epoch,mean_loss,train_accuracy.
void WriteLossCsv(const std::vector<EpochStats>& history,
                  const std::string& path);

}  // namespace gainspot

#endif  // GAINSPOT_TRAIN_HPP_
