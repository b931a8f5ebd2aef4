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

#ifndef GAINSPOT_PIPELINE_HPP_
#define GAINSPOT_PIPELINE_HPP_

#include <string>
#include <vector>

#include "gainspot/decode.hpp"
#include "gainspot/eval.hpp"
#include "gainspot/features.hpp"
#include "gainspot/graph.hpp"
#include "gainspot/rng.hpp"
#include "gainspot/train.hpp"

namespace gainspot {

// Feature preset bound to a model family: "lfbe20" (20 bands, 80/3
// stacking) or "lfbe64" (64 bands, 100-frame grid).
struct FeaturePreset {
  std::string name;
  FrameConfig frame;
  int bands = 0;
  double f_min = 0.0;
  double f_max = 8000.0;
  StackSpec stack;  // flat-input models
  int grid_frames = 0;  // grid-input models
};

FeaturePreset GetFeaturePreset(const std::string& name);

// Feature preset + smoothing taken from a model's metadata.
FeaturePreset PresetForModel(const ModelGraph& model);
SmoothingSpec SmoothingForModel(const ModelGraph& model);

// Full spotter for one stream: features -> forward per step -> smoothing
// -> peak detection. Returns detections; `trace_out`, when non-null,
// receives the smoothed posterior trace.
std::vector<Detection> SpotBuffer(const ModelGraph& model,
                                  const AudioBuffer& buf,
                                  const SmoothingSpec& smoothing,
                                  const PeakConfig& peaks,
                                  PosteriorTrace* trace_out = nullptr);

// Spot every .wav in a directory (sorted by filename); keys are the file
// stems.
DetectionsByStream SpotDirectory(const ModelGraph& model,
                                 const std::string& dir,
                                 const SmoothingSpec& smoothing,
                                 const PeakConfig& peaks);

// Training windows for one stream. Streams with a marked tone interval
// contribute the interval midpoint plus two random alignments from its
// middle half (class 1 for positives, hard 0 for distractor negatives)
// and one tone-free window; unmarked streams contribute four random
// noise windows. Varied alignments keep the net from memorizing single
// fixed windows.
void AppendTrainingWindows(const std::vector<std::vector<float>>& stacked,
                           const LabeledStream& label, Pcg32* rng,
                           std::vector<LabeledExample>* out);

// Featurize every .wav in a directory into <out_dir>/<stem>.csv (LFBE,
// or its delta when `delta` is set).
void FeaturizeDirectory(const std::string& in_dir,
                        const FeaturePreset& preset, bool delta,
                        const std::string& out_dir);

}  // namespace gainspot

#endif  // GAINSPOT_PIPELINE_HPP_
