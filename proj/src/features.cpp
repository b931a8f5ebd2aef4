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

#include "gainspot/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gainspot/errors.hpp"

namespace gainspot {

namespace {

constexpr double kPi = 3.14159265358979323846;

// In-place iterative radix-2 FFT.
void Fft(std::vector<std::complex<double>>* a) {
  size_t n = a->size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap((*a)[i], (*a)[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * kPi / static_cast<double>(len);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = (*a)[i + k];
        std::complex<double> v = (*a)[i + k + len / 2] * w;
        (*a)[i + k] = u + v;
        (*a)[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

double WindowValue(WindowFn fn, int i, int len) {
  switch (fn) {
    case WindowFn::kHann:
      // Periodic Hann.
      return 0.5 - 0.5 * std::cos(2.0 * kPi * i / len);
    case WindowFn::kRectangular:
      return 1.0;
  }
  return 1.0;
}

double MelOfHz(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double HzOfMel(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

}  // namespace

std::vector<std::vector<float>> FrameSignal(const AudioBuffer& buf,
                                            const FrameConfig& cfg) {
  if (static_cast<int>(buf.samples.size()) < cfg.window_len) {
    throw TooShortError("FrameSignal: signal shorter than one window");
  }
  int frames =
      1 + (static_cast<int>(buf.samples.size()) - cfg.window_len) / cfg.hop;
  std::vector<std::vector<float>> out(frames);
  for (int t = 0; t < frames; ++t) {
    out[t].resize(cfg.window_len);
    int base = t * cfg.hop;
    for (int i = 0; i < cfg.window_len; ++i) {
      out[t][i] = static_cast<float>(buf.samples[base + i]);
    }
  }
  return out;
}

std::vector<float> PowerSpectrum(std::span<const float> frame,
                                 const FrameConfig& cfg) {
  if (static_cast<int>(frame.size()) != cfg.window_len) {
    throw ShapeError("PowerSpectrum: frame length != window_len");
  }
  std::vector<std::complex<double>> buf(cfg.fft_size, {0.0, 0.0});
  for (int i = 0; i < cfg.window_len; ++i) {
    buf[i] = frame[i] * WindowValue(cfg.window_fn, i, cfg.window_len);
  }
  Fft(&buf);
  std::vector<float> out(cfg.Bins());
  for (int k = 0; k < cfg.Bins(); ++k) {
    out[k] = static_cast<float>(std::norm(buf[k]));
  }
  return out;
}

MelFilterbank BuildMelFilterbank(const FrameConfig& cfg, int bands,
                                 double f_min, double f_max) {
  if (!(f_min >= 0.0 && f_min < f_max &&
        f_max <= cfg.sample_rate / 2.0) ||
      bands < 2) {
    throw InvalidArgumentError("BuildMelFilterbank: invalid range");
  }
  MelFilterbank fb;
  fb.bands = bands;
  fb.bins = cfg.Bins();
  fb.f_min = f_min;
  fb.f_max = f_max;
  fb.weights.assign(static_cast<size_t>(bands) * fb.bins, 0.0f);

  // bands + 2 mel-uniform edge points; triangle i spans edges i-1..i+1.
  std::vector<double> edge_hz(bands + 2);
  double m_lo = MelOfHz(f_min);
  double m_hi = MelOfHz(f_max);
  for (int i = 0; i < bands + 2; ++i) {
    edge_hz[i] = HzOfMel(m_lo + (m_hi - m_lo) * i / (bands + 1));
  }
  fb.center_hz.assign(edge_hz.begin() + 1, edge_hz.end() - 1);

  double bin_hz = static_cast<double>(cfg.sample_rate) / cfg.fft_size;
  for (int i = 0; i < bands; ++i) {
    double left = edge_hz[i], center = edge_hz[i + 1], right = edge_hz[i + 2];
    for (int k = 0; k < fb.bins; ++k) {
      double f = k * bin_hz;
      double w = 0.0;
      if (f > left && f < center) {
        w = (f - left) / (center - left);
      } else if (f >= center && f < right) {
        w = (right - f) / (right - center);
      }
      fb.weights[i * fb.bins + k] = static_cast<float>(w);
    }
  }
  return fb;
}

FeatureMatrix Lfbe(const AudioBuffer& buf, const FrameConfig& cfg,
                   const MelFilterbank& fb) {
  auto frames = FrameSignal(buf, cfg);
  FeatureMatrix feat;
  feat.frames = static_cast<int>(frames.size());
  feat.bands = fb.bands;
  feat.kind = FeatureKind::kLfbe;
  feat.values.resize(static_cast<size_t>(feat.frames) * feat.bands);
  for (int t = 0; t < feat.frames; ++t) {
    auto spec = PowerSpectrum(frames[t], cfg);
    for (int i = 0; i < fb.bands; ++i) {
      double e = 0.0;
      for (int k = 0; k < fb.bins; ++k) {
        e += static_cast<double>(fb.At(i, k)) * spec[k];
      }
      if (e < kLogFloor) e = kLogFloor;
      feat.At(t, i) = static_cast<float>(std::log(e));
    }
  }
  return feat;
}

FeatureMatrix DeltaLfbe(const FeatureMatrix& feat) {
  if (feat.frames < 2) {
    throw TooShortError("DeltaLfbe: need at least 2 frames");
  }
  FeatureMatrix out;
  out.frames = feat.frames - 1;
  out.bands = feat.bands;
  out.kind = FeatureKind::kDeltaLfbe;
  out.values.resize(static_cast<size_t>(out.frames) * out.bands);
  for (int t = 0; t < out.frames; ++t) {
    for (int i = 0; i < out.bands; ++i) {
      out.At(t, i) = feat.At(t + 1, i) - feat.At(t, i);
    }
  }
  return out;
}

std::vector<std::vector<float>> StackFrames(const FeatureMatrix& feat,
                                            const StackSpec& spec) {
  if (feat.bands != spec.bands) {
    throw ShapeError("StackFrames: band count mismatch");
  }
  if (feat.frames < spec.context_frames) {
    throw TooShortError("StackFrames: fewer frames than context");
  }
  int n = spec.StackedFrames();
  int steps = feat.frames - spec.context_frames + 1;
  std::vector<std::vector<float>> out(steps);
  for (int t = 0; t < steps; ++t) {
    out[t].resize(static_cast<size_t>(n) * spec.bands);
    for (int i = 0; i < spec.bands; ++i) {
      for (int j = 0; j < n; ++j) {
        out[t][i * n + j] = feat.At(t + j * spec.downsample, i);
      }
    }
  }
  return out;
}

void WriteFeatureCsv(const FeatureMatrix& feat, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("WriteFeatureCsv: cannot open " + path);
  for (int i = 0; i < feat.bands; ++i) {
    f << (i ? "," : "") << "band_" << i;
  }
  f << "\n";
  char num[64];
  for (int t = 0; t < feat.frames; ++t) {
    for (int i = 0; i < feat.bands; ++i) {
      std::snprintf(num, sizeof(num), "%.9g",
                    static_cast<double>(feat.At(t, i)));
      f << (i ? "," : "") << num;
    }
    f << "\n";
  }
  if (!f) throw IoError("WriteFeatureCsv: write failed: " + path);
}

FeatureMatrix ReadFeatureCsv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("ReadFeatureCsv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) {
    throw FormatError("ReadFeatureCsv: empty file " + path);
  }
  FeatureMatrix feat;
  feat.bands = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int count = 0;
    while (std::getline(ss, cell, ',')) {
      feat.values.push_back(std::strtof(cell.c_str(), nullptr));
      ++count;
    }
    if (count != feat.bands) {
      throw FormatError("ReadFeatureCsv: ragged row in " + path);
    }
    ++feat.frames;
  }
  return feat;
}

}  // namespace gainspot
