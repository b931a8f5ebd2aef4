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

#include "gainspot/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "gainspot/errors.hpp"
#include "gainspot/rng.hpp"

namespace gainspot {

namespace {

// Dense stack view of a trainable model: optional leading frozen delta,
// then dense layers, then softmax.
struct TrainView {
  std::vector<FrozenDeltaLayer> deltas;
  std::vector<DenseLayer*> dense;
};

TrainView Validate(ModelGraph* model) {
  TrainView view;
  bool seen_dense = false;
  bool seen_softmax = false;
  for (Layer& layer : model->layers) {
    if (seen_softmax) {
      throw UnsupportedLayerError("Train: layers after softmax");
    }
    if (auto* fd = std::get_if<FrozenDeltaLayer>(&layer)) {
      if (seen_dense) {
        throw UnsupportedLayerError(
            "Train: frozen delta must precede all dense layers");
      }
      view.deltas.push_back(*fd);
    } else if (auto* d = std::get_if<DenseLayer>(&layer)) {
      view.dense.push_back(d);
      seen_dense = true;
    } else if (std::get_if<SoftmaxLayer>(&layer)) {
      seen_softmax = true;
    } else {
      throw UnsupportedLayerError(
          "Train: only dense layers are trainable");
    }
  }
  if (view.dense.empty() || !seen_softmax) {
    throw UnsupportedLayerError("Train: need dense layers and a softmax");
  }
  return view;
}

void ApplyActivationInPlace(Activation act, std::vector<float>* v) {
  if (act == Activation::kRelu) {
    for (float& x : *v) {
      if (x < 0.0f) x = 0.0f;
    }
  }
}

std::vector<float> MatVec(const DenseLayer& l, std::span<const float> x) {
  std::vector<float> out(l.out);
  for (int r = 0; r < l.out; ++r) {
    const float* w = l.weights.data() + static_cast<size_t>(r) * l.in;
    double acc = l.bias[r];
    for (int i = 0; i < l.in; ++i) {
      acc += static_cast<double>(w[i]) * x[i];
    }
    out[r] = static_cast<float>(acc);
  }
  return out;
}

std::vector<float> SoftmaxVec(std::span<const float> logits) {
  double mx = -1e300;
  for (float v : logits) mx = std::max(mx, static_cast<double>(v));
  double sum = 0.0;
  std::vector<double> e(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    e[i] = std::exp(static_cast<double>(logits[i]) - mx);
    sum += e[i];
  }
  std::vector<float> p(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    p[i] = static_cast<float>(e[i] / sum);
  }
  return p;
}

}  // namespace

CrossEntropyResult CrossEntropyLoss(std::span<const float> posteriors,
                                    int target) {
  if (target < 0 || target >= static_cast<int>(posteriors.size())) {
    throw InvalidArgumentError("CrossEntropyLoss: target out of range");
  }
  CrossEntropyResult res;
  double p = std::max(static_cast<double>(posteriors[target]), 1e-12);
  res.loss = -std::log(p);
  res.grad_logits.assign(posteriors.begin(), posteriors.end());
  res.grad_logits[target] -= 1.0f;
  return res;
}

void AdamStep(std::span<float> params, std::span<const float> grads,
              AdamState* state, const TrainConfig& cfg) {
  if (params.size() != grads.size()) {
    throw ShapeError("AdamStep: param/grad size mismatch");
  }
  if (state->m.empty()) {
    state->m.assign(params.size(), 0.0f);
    state->v.assign(params.size(), 0.0f);
  }
  if (state->m.size() != params.size()) {
    throw ShapeError("AdamStep: state size mismatch");
  }
  state->step += 1;
  double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
  double corr1 = 1.0 - std::pow(b1, static_cast<double>(state->step));
  double corr2 = 1.0 - std::pow(b2, static_cast<double>(state->step));
  for (size_t i = 0; i < params.size(); ++i) {
    double g = grads[i];
    double m = b1 * state->m[i] + (1.0 - b1) * g;
    double v = b2 * state->v[i] + (1.0 - b2) * g * g;
    state->m[i] = static_cast<float>(m);
    state->v[i] = static_cast<float>(v);
    double mhat = m / corr1;
    double vhat = v / corr2;
    params[i] -= static_cast<float>(cfg.learning_rate * mhat /
                                    (std::sqrt(vhat) + cfg.adam_epsilon));
  }
}

GradientResult ComputeGradients(const ModelGraph& model,
                                const LabeledExample& ex) {
  ModelGraph copy = model;
  TrainView view = Validate(&copy);
  size_t n_dense = view.dense.size();

  std::vector<std::vector<float>> acts(n_dense + 1);
  std::vector<std::vector<float>> preact(n_dense);
  acts[0] = ex.input;
  for (const FrozenDeltaLayer& fd : view.deltas) {
    acts[0] =
        ApplyDelta(DeltaMatrixSpec{fd.frames_per_band, fd.bands}, acts[0]);
  }
  for (size_t k = 0; k < n_dense; ++k) {
    preact[k] = MatVec(*view.dense[k], acts[k]);
    acts[k + 1] = preact[k];
    ApplyActivationInPlace(view.dense[k]->act, &acts[k + 1]);
  }
  std::vector<float> p = SoftmaxVec(acts[n_dense]);
  auto ce = CrossEntropyLoss(p, ex.label);

  GradientResult res;
  res.loss = ce.loss;
  res.grad_weights.resize(n_dense);
  res.grad_bias.resize(n_dense);
  std::vector<float> d = std::move(ce.grad_logits);
  for (size_t k = n_dense; k-- > 0;) {
    const DenseLayer& l = *view.dense[k];
    res.grad_weights[k].resize(l.weights.size());
    res.grad_bias[k].assign(d.begin(), d.end());
    for (int r = 0; r < l.out; ++r) {
      float* row = res.grad_weights[k].data() + static_cast<size_t>(r) * l.in;
      float dr = d[r];
      for (int i = 0; i < l.in; ++i) row[i] = dr * acts[k][i];
    }
    if (k == 0) break;
    std::vector<float> da(l.in, 0.0f);
    for (int r = 0; r < l.out; ++r) {
      float dr = d[r];
      if (dr == 0.0f) continue;
      const float* row = l.weights.data() + static_cast<size_t>(r) * l.in;
      for (int i = 0; i < l.in; ++i) da[i] += dr * row[i];
    }
    if (view.dense[k - 1]->act == Activation::kRelu) {
      for (int i = 0; i < l.in; ++i) {
        if (preact[k - 1][i] <= 0.0f) da[i] = 0.0f;
      }
    }
    d = std::move(da);
  }
  return res;
}

std::vector<EpochStats> Train(ModelGraph* model,
                              const std::vector<LabeledExample>& dataset,
                              const TrainConfig& cfg) {
  if (dataset.empty()) {
    throw InvalidArgumentError("Train: empty dataset");
  }
  if (cfg.learning_rate <= 0.0 || cfg.dropout_prob < 0.0 ||
      cfg.dropout_prob >= 1.0 || cfg.batch_size < 1) {
    throw InvalidArgumentError("Train: invalid config");
  }
  TrainView view = Validate(model);
  bool zero_sum = cfg.first_layer_mode == FirstLayerMode::kZeroSumConstraint;
  if (zero_sum) {
    if (cfg.zero_sum_spec.frames_per_band < 2 || cfg.zero_sum_spec.bands < 1) {
      throw InvalidArgumentError("Train: zero-sum mode needs a delta spec");
    }
    if (cfg.zero_sum_spec.InDim() != view.dense.front()->in) {
      throw ShapeError("Train: zero-sum spec does not match first layer");
    }
  }

  size_t n_dense = view.dense.size();
  std::vector<AdamState> w_state(n_dense), b_state(n_dense);
  std::vector<std::vector<float>> grad_w(n_dense), grad_b(n_dense);
  for (size_t k = 0; k < n_dense; ++k) {
    grad_w[k].resize(view.dense[k]->weights.size());
    grad_b[k].resize(view.dense[k]->bias.size());
  }

  Pcg32 shuffle_rng(cfg.seed, 0);
  Pcg32 dropout_rng(cfg.seed, 1);
  double keep = 1.0 - cfg.dropout_prob;

  auto project_first = [&]() {
    DenseLayer* first = view.dense.front();
    first->weights =
        ProjectZeroSum(first->weights, first->out, cfg.zero_sum_spec);
  };
  if (zero_sum) project_first();

  std::vector<EpochStats> history;
  std::vector<int> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  // Per-example caches.
  std::vector<std::vector<float>> acts(n_dense + 1);  // post-act/dropout
  std::vector<std::vector<float>> preact(n_dense);
  std::vector<std::vector<float>> mask(n_dense);  // dropout scale per unit

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.Shuffle(&order);
    double loss_sum = 0.0;
    int correct = 0;

    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(cfg.batch_size)) {
      size_t end =
          std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
      int batch = static_cast<int>(end - start);
      for (size_t k = 0; k < n_dense; ++k) {
        std::fill(grad_w[k].begin(), grad_w[k].end(), 0.0f);
        std::fill(grad_b[k].begin(), grad_b[k].end(), 0.0f);
      }

      for (size_t idx = start; idx < end; ++idx) {
        const LabeledExample& ex = dataset[order[idx]];
        acts[0] = ex.input;
        for (const FrozenDeltaLayer& fd : view.deltas) {
          acts[0] = ApplyDelta(
              DeltaMatrixSpec{fd.frames_per_band, fd.bands}, acts[0]);
        }

        // Forward.
        for (size_t k = 0; k < n_dense; ++k) {
          preact[k] = MatVec(*view.dense[k], acts[k]);
          acts[k + 1] = preact[k];
          ApplyActivationInPlace(view.dense[k]->act, &acts[k + 1]);
          bool hidden = k + 1 < n_dense;
          if (hidden && cfg.dropout_prob > 0.0) {
            mask[k].resize(acts[k + 1].size());
            for (size_t i = 0; i < mask[k].size(); ++i) {
              bool keep_unit = dropout_rng.NextDouble() < keep;
              mask[k][i] = keep_unit ? static_cast<float>(1.0 / keep) : 0.0f;
              acts[k + 1][i] *= mask[k][i];
            }
          } else {
            mask[k].clear();
          }
        }
        std::vector<float> p = SoftmaxVec(acts[n_dense]);
        auto ce = CrossEntropyLoss(p, ex.label);
        loss_sum += ce.loss;
        int argmax = static_cast<int>(
            std::max_element(p.begin(), p.end()) - p.begin());
        if (argmax == ex.label) ++correct;

        // Backward.
        std::vector<float> d = std::move(ce.grad_logits);  // dL/dz_last
        for (size_t k = n_dense; k-- > 0;) {
          const DenseLayer& l = *view.dense[k];
          const std::vector<float>& a_in = acts[k];
          float* gw = grad_w[k].data();
          for (int r = 0; r < l.out; ++r) {
            float dr = d[r];
            if (dr != 0.0f) {
              float* row = gw + static_cast<size_t>(r) * l.in;
              for (int i = 0; i < l.in; ++i) {
                row[i] += dr * a_in[i];
              }
            }
            grad_b[k][r] += dr;
          }
          if (k == 0) break;
          std::vector<float> da(l.in, 0.0f);
          for (int r = 0; r < l.out; ++r) {
            float dr = d[r];
            if (dr == 0.0f) continue;
            const float* row = l.weights.data() + static_cast<size_t>(r) * l.in;
            for (int i = 0; i < l.in; ++i) {
              da[i] += dr * row[i];
            }
          }
          // Through dropout and the previous activation.
          if (!mask[k - 1].empty()) {
            for (int i = 0; i < l.in; ++i) da[i] *= mask[k - 1][i];
          }
          if (view.dense[k - 1]->act == Activation::kRelu) {
            for (int i = 0; i < l.in; ++i) {
              if (preact[k - 1][i] <= 0.0f) da[i] = 0.0f;
            }
          }
          d = std::move(da);
        }
      }

      float inv_batch = 1.0f / static_cast<float>(batch);
      for (size_t k = 0; k < n_dense; ++k) {
        for (float& g : grad_w[k]) g *= inv_batch;
        for (float& g : grad_b[k]) g *= inv_batch;
        AdamStep(view.dense[k]->weights, grad_w[k], &w_state[k], cfg);
        AdamStep(view.dense[k]->bias, grad_b[k], &b_state[k], cfg);
      }
      if (zero_sum) project_first();
    }

    EpochStats stats;
    stats.mean_loss = loss_sum / static_cast<double>(dataset.size());
    stats.accuracy =
        static_cast<double>(correct) / static_cast<double>(dataset.size());
    if (!std::isfinite(stats.mean_loss)) {
      throw Error("Train: non-finite loss at epoch " + std::to_string(epoch));
    }
    history.push_back(stats);
  }
  return history;
}

void WriteLossCsv(const std::vector<EpochStats>& history,
                  const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("WriteLossCsv: cannot open " + path);
  f << "epoch,mean_loss,train_accuracy\n";
  char buf[96];
  for (size_t i = 0; i < history.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g\n", i,
                  history[i].mean_loss, history[i].accuracy);
    f << buf;
  }
  if (!f) throw IoError("WriteLossCsv: write failed: " + path);
}

}  // namespace gainspot
