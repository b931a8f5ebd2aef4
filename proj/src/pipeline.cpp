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

#include "gainspot/pipeline.hpp"

#include <algorithm>
#include <filesystem>

#include "gainspot/errors.hpp"
#include "gainspot/wav.hpp"

namespace gainspot {

FeaturePreset GetFeaturePreset(const std::string& name) {
  FeaturePreset p;
  p.name = name;
  if (name == "lfbe20") {
    p.bands = 20;
    p.stack = StackSpec{80, 3, 20};
    return p;
  }
  if (name == "lfbe64") {
    p.bands = 64;
    p.stack = StackSpec{100, 1, 64};
    p.grid_frames = 100;
    return p;
  }
  throw InvalidArgumentError("unknown feature preset: " + name);
}

FeaturePreset PresetForModel(const ModelGraph& model) {
  return GetFeaturePreset(model.metadata.feature_preset.empty()
                              ? "lfbe20"
                              : model.metadata.feature_preset);
}

SmoothingSpec SmoothingForModel(const ModelGraph& model) {
  if (model.metadata.smoothing_kind == "ema") {
    return SmoothingSpec::Ema(
        static_cast<float>(model.metadata.smoothing_param));
  }
  int window = static_cast<int>(model.metadata.smoothing_param);
  return SmoothingSpec::Wma(window > 0 ? window : 30);
}

std::vector<Detection> SpotBuffer(const ModelGraph& model,
                                  const AudioBuffer& buf,
                                  const SmoothingSpec& smoothing,
                                  const PeakConfig& peaks,
                                  PosteriorTrace* trace_out) {
  FeaturePreset preset = PresetForModel(model);
  MelFilterbank fb =
      BuildMelFilterbank(preset.frame, preset.bands, preset.f_min, preset.f_max);
  FeatureMatrix feat = Lfbe(buf, preset.frame, fb);
  int wake = model.metadata.wake_class;

  PosteriorTrace raw;
  if (model.input.kind == InputSpec::Kind::kFlat) {
    auto stacked = StackFrames(feat, preset.stack);
    raw.reserve(stacked.size());
    for (const auto& x : stacked) {
      raw.push_back(Forward(model, x)[wake]);
    }
  } else {
    // Grid models consume band-major windows of model.input.frames frames.
    int win = model.input.frames;
    if (model.input.bands != feat.bands) {
      throw ShapeError("SpotBuffer: model band count != feature bands");
    }
    if (feat.frames < win) {
      throw TooShortError("SpotBuffer: stream shorter than model window");
    }
    std::vector<float> grid(static_cast<size_t>(feat.bands) * win);
    for (int t = 0; t + win <= feat.frames; ++t) {
      for (int b = 0; b < feat.bands; ++b) {
        for (int j = 0; j < win; ++j) {
          grid[static_cast<size_t>(b) * win + j] = feat.At(t + j, b);
        }
      }
      raw.push_back(Forward(model, grid)[wake]);
    }
  }

  PosteriorTrace smoothed = Smooth(raw, smoothing);
  if (trace_out) *trace_out = smoothed;
  return DetectPeaks(smoothed, peaks);
}

DetectionsByStream SpotDirectory(const ModelGraph& model,
                                 const std::string& dir,
                                 const SmoothingSpec& smoothing,
                                 const PeakConfig& peaks) {
  namespace fs = std::filesystem;
  if (!fs::exists(dir)) {
    throw IoError("SpotDirectory: no such directory " + dir);
  }
  std::vector<fs::path> wavs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".wav") wavs.push_back(entry.path());
  }
  std::sort(wavs.begin(), wavs.end());
  DetectionsByStream out;
  for (const fs::path& p : wavs) {
    AudioBuffer buf = ReadWav(p.string());
    out[p.stem().string()] = SpotBuffer(model, buf, smoothing, peaks);
  }
  return out;
}

void AppendTrainingWindows(const std::vector<std::vector<float>>& stacked,
                           const LabeledStream& label, Pcg32* rng,
                           std::vector<LabeledExample>* out) {
  int steps = static_cast<int>(stacked.size());
  if (steps < 1) throw TooShortError("AppendTrainingWindows: empty stream");
  bool tone = label.interval_end > label.interval_begin;
  int cls = label.label == StreamLabel::kPositive ? 1 : 0;
  if (tone) {
    int b = label.interval_begin;
    int e = label.interval_end;
    int quarter = (e - b) / 4;
    int lo = std::clamp(b + quarter, 0, steps - 1);
    int hi = std::clamp(e - quarter, lo, steps - 1);
    int mid = std::clamp((b + e) / 2, 0, steps - 1);
    out->push_back({stacked[mid], cls});
    for (int k = 0; k < 2; ++k) {
      int s = lo + static_cast<int>(
                       rng->NextBounded(static_cast<uint32_t>(hi - lo + 1)));
      out->push_back({stacked[s], cls});
    }
    std::vector<int> clear;
    for (int s = 0; s < steps; ++s) {
      if (s < b || s > e) clear.push_back(s);
    }
    if (!clear.empty()) {
      int s = clear[rng->NextBounded(static_cast<uint32_t>(clear.size()))];
      out->push_back({stacked[s], 0});
    }
  } else {
    for (int k = 0; k < 4; ++k) {
      int s = static_cast<int>(rng->NextBounded(static_cast<uint32_t>(steps)));
      out->push_back({stacked[s], 0});
    }
  }
}

void FeaturizeDirectory(const std::string& in_dir,
                        const FeaturePreset& preset, bool delta,
                        const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (!fs::exists(in_dir)) {
    throw IoError("FeaturizeDirectory: no such directory " + in_dir);
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("FeaturizeDirectory: cannot create " + out_dir);
  MelFilterbank fb =
      BuildMelFilterbank(preset.frame, preset.bands, preset.f_min, preset.f_max);
  std::vector<fs::path> wavs;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    if (entry.path().extension() == ".wav") wavs.push_back(entry.path());
  }
  std::sort(wavs.begin(), wavs.end());
  for (const fs::path& p : wavs) {
    AudioBuffer buf = ReadWav(p.string());
    FeatureMatrix feat = Lfbe(buf, preset.frame, fb);
    if (delta) feat = DeltaLfbe(feat);
    WriteFeatureCsv(feat,
                    (fs::path(out_dir) / (p.stem().string() + ".csv")).string());
  }
}

}  // namespace gainspot
