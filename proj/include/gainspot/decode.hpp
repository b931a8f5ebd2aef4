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

#ifndef GAINSPOT_DECODE_HPP_
#define GAINSPOT_DECODE_HPP_

#include <map>
#include <string>
#include <vector>

namespace gainspot {

// Per-step wake-word posterior; one step per feature hop (10 ms).
using PosteriorTrace = std::vector<float>;

struct SmoothingSpec {
  enum class Kind { kWma, kEma };
  Kind kind = Kind::kWma;
  int window = 30;     // WMA
  float alpha = 0.1f;  // EMA

  static SmoothingSpec Wma(int window) {
    return SmoothingSpec{Kind::kWma, window, 0.0f};
  }
  static SmoothingSpec Ema(float alpha) {
    return SmoothingSpec{Kind::kEma, 0, alpha};
  }
};

struct Detection {
  int step = 0;
  float score = 0.0f;  // smoothed posterior at the picked peak
};

struct PeakConfig {
  float threshold = 0.5f;
  int lockout = 30;  // steps (300 ms)
};

// Trailing (causal) moving average; window shortens at the start.
PosteriorTrace SmoothWma(const PosteriorTrace& trace, int window);

// out[0] = in[0]; out[t] = alpha*in[t] + (1-alpha)*out[t-1].
PosteriorTrace SmoothEma(const PosteriorTrace& trace, float alpha);

PosteriorTrace Smooth(const PosteriorTrace& trace, const SmoothingSpec& spec);

// Left-to-right scan: step t fires when trace[t] >= threshold, it is
// the leftmost step of a local maximum (strictly above the previous
// value, and the next distinct value after any flat run is lower;
// one-sided at the ends) and at least `lockout` steps have passed since
// the previous detection.
std::vector<Detection> DetectPeaks(const PosteriorTrace& trace,
                                   const PeakConfig& cfg);

// CSV: stream_id,step,time_seconds,score. Streams in sorted id order.
void WriteDetectionsCsv(
    const std::map<std::string, std::vector<Detection>>& detections,
    const std::string& path);
std::map<std::string, std::vector<Detection>> ReadDetectionsCsv(
    const std::string& path);

}  // namespace gainspot

#endif  // GAINSPOT_DECODE_HPP_
