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

#ifndef GAINSPOT_FEATURES_HPP_
#define GAINSPOT_FEATURES_HPP_

#include <span>
#include <string>
#include <vector>

#include "gainspot/audio.hpp"

namespace gainspot {

enum class WindowFn { kHann, kRectangular };

// 25 ms window / 10 ms hop at 16 kHz, 512-point FFT.
struct FrameConfig {
  int sample_rate = kSampleRate;
  int window_len = 400;
  int hop = 160;
  int fft_size = 512;
  WindowFn window_fn = WindowFn::kHann;

  int Bins() const { return fft_size / 2 + 1; }
};

// Triangular Mel filters evaluated at FFT-bin center frequencies.
// weights is band-major: row i holds filter i over all bins.
struct MelFilterbank {
  int bands = 0;
  int bins = 0;
  double f_min = 0.0;
  double f_max = 0.0;
  std::vector<float> weights;  // bands x bins, row-major
  std::vector<double> center_hz;

  float At(int band, int bin) const { return weights[band * bins + bin]; }
};

enum class FeatureKind { kLfbe, kDeltaLfbe };

// T x L grid of 32-bit floats, frame-major.
struct FeatureMatrix {
  int frames = 0;
  int bands = 0;
  FeatureKind kind = FeatureKind::kLfbe;
  std::vector<float> values;  // frames x bands, row-major

  float At(int frame, int band) const { return values[frame * bands + band]; }
  float& At(int frame, int band) { return values[frame * bands + band]; }
};

// Context stacking for flat-input models: context_frames consecutive
// frames, every `downsample`th taken, flattened band-major.
struct StackSpec {
  int context_frames = 80;
  int downsample = 3;
  int bands = 20;

  // Frames actually present in the stacked vector (27 for the preset).
  int StackedFrames() const {
    return (context_frames + downsample - 1) / downsample;
  }
  int Dim() const { return StackedFrames() * bands; }
};

// Split into overlapping windows; frame t covers samples
// [t*hop, t*hop + window_len). No edge padding.
std::vector<std::vector<float>> FrameSignal(const AudioBuffer& buf,
                                            const FrameConfig& cfg);

// One-sided squared-magnitude spectrum of a windowed, zero-padded frame.
std::vector<float> PowerSpectrum(std::span<const float> frame,
                                 const FrameConfig& cfg);

// L triangular filters with centers uniform on the mel scale
// m(f) = 2595*log10(1 + f/700) between f_min and f_max; peak weight 1.
MelFilterbank BuildMelFilterbank(const FrameConfig& cfg, int bands,
                                 double f_min, double f_max);

// value[t][i] = ln(max(m_i . power_spectrum(frame_t), 1e-10)).
FeatureMatrix Lfbe(const AudioBuffer& buf, const FrameConfig& cfg,
                   const MelFilterbank& fb);

inline constexpr double kLogFloor = 1e-10;

// Frame-to-frame difference: out[t] = in[t+1] - in[t], T-1 frames.
FeatureMatrix DeltaLfbe(const FeatureMatrix& feat);

// Band-major flat vectors, one per decodable step (sliding by 1 frame):
// x = [x^1_1..x^1_n, ..., x^L_1..x^L_n] with x^i_j = feat[t + d*(j-1)][i].
std::vector<std::vector<float>> StackFrames(const FeatureMatrix& feat,
                                            const StackSpec& spec);

// CSV with header band_0..band_{L-1}, one frame per line, 9 significant
// digits.
void WriteFeatureCsv(const FeatureMatrix& feat, const std::string& path);
FeatureMatrix ReadFeatureCsv(const std::string& path);

}  // namespace gainspot

#endif  // GAINSPOT_FEATURES_HPP_
