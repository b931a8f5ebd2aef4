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

#include "gainspot/decode.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gainspot/errors.hpp"

namespace gainspot {

PosteriorTrace SmoothWma(const PosteriorTrace& trace, int window) {
  if (window < 1) throw InvalidArgumentError("SmoothWma: window must be >= 1");
  PosteriorTrace out(trace.size());
  double sum = 0.0;
  for (size_t t = 0; t < trace.size(); ++t) {
    sum += trace[t];
    if (t >= static_cast<size_t>(window)) {
      sum -= trace[t - window];
    }
    int count = static_cast<int>(std::min<size_t>(t + 1, window));
    out[t] = static_cast<float>(sum / count);
  }
  return out;
}

PosteriorTrace SmoothEma(const PosteriorTrace& trace, float alpha) {
  if (!(alpha > 0.0f && alpha <= 1.0f)) {
    throw InvalidArgumentError("SmoothEma: alpha must be in (0, 1]");
  }
  PosteriorTrace out(trace.size());
  for (size_t t = 0; t < trace.size(); ++t) {
    out[t] = (t == 0) ? trace[0]
                      : alpha * trace[t] + (1.0f - alpha) * out[t - 1];
  }
  return out;
}

PosteriorTrace Smooth(const PosteriorTrace& trace, const SmoothingSpec& spec) {
  return spec.kind == SmoothingSpec::Kind::kWma
             ? SmoothWma(trace, spec.window)
             : SmoothEma(trace, spec.alpha);
}

std::vector<Detection> DetectPeaks(const PosteriorTrace& trace,
                                   const PeakConfig& cfg) {
  if (cfg.lockout < 1) {
    throw InvalidArgumentError("DetectPeaks: lockout must be >= 1");
  }
  std::vector<Detection> out;
  int last = -1;
  int n = static_cast<int>(trace.size());
  for (int t = 0; t < n; ++t) {
    if (trace[t] < cfg.threshold) continue;
    if (t > 0 && trace[t] <= trace[t - 1]) continue;
    // Skip the flat run; the next distinct value must drop (or the
    // trace end), so a plateau fires once, at its leftmost step.
    int r = t;
    while (r + 1 < n && trace[r + 1] == trace[t]) ++r;
    if (r + 1 < n && trace[r + 1] > trace[t]) continue;
    if (last >= 0 && t - last < cfg.lockout) continue;
    out.push_back(Detection{t, trace[t]});
    last = t;
  }
  return out;
}

void WriteDetectionsCsv(
    const std::map<std::string, std::vector<Detection>>& detections,
    const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("WriteDetectionsCsv: cannot open " + path);
  f << "stream_id,step,time_seconds,score\n";
  char buf[160];
  for (const auto& [id, dets] : detections) {
    for (const Detection& d : dets) {
      std::snprintf(buf, sizeof(buf), "%s,%d,%.3f,%.9g\n", id.c_str(), d.step,
                    d.step * 0.010, static_cast<double>(d.score));
      f << buf;
    }
  }
  if (!f) throw IoError("WriteDetectionsCsv: write failed: " + path);
}

std::map<std::string, std::vector<Detection>> ReadDetectionsCsv(
    const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("ReadDetectionsCsv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line) ||
      line.rfind("stream_id,step,", 0) != 0) {
    throw FormatError("ReadDetectionsCsv: missing header in " + path);
  }
  std::map<std::string, std::vector<Detection>> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, step, secs, score;
    if (!std::getline(ss, id, ',') || !std::getline(ss, step, ',') ||
        !std::getline(ss, secs, ',') || !std::getline(ss, score, ',')) {
      throw FormatError("ReadDetectionsCsv: bad row in " + path);
    }
    out[id].push_back(Detection{std::stoi(step), std::stof(score)});
  }
  return out;
}

}  // namespace gainspot
