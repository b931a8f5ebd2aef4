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

#ifndef GAINSPOT_EVAL_HPP_
#define GAINSPOT_EVAL_HPP_

#include <map>
#include <string>
#include <vector>

#include "gainspot/decode.hpp"

namespace gainspot {

enum class StreamLabel { kPositive, kNegative };

struct LabeledStream {
  std::string id;
  StreamLabel label = StreamLabel::kNegative;
  // Inclusive step interval within which a detection counts as a hit
  // (positives only).
  int interval_begin = 0;
  int interval_end = 0;
  double duration_seconds = 0.0;
};

// Score-vs-threshold comparisons use `score >= threshold - kScoreSlack`,
// so a detection whose score defines a threshold stays counted when the
// score is reproduced with float-level noise (e.g. across gain variants).
inline constexpr double kScoreSlack = 1e-5;

struct RateReport {
  int positives = 0;
  int misses = 0;
  double frr = 0.0;
  int false_alarms = 0;
  double far_per_hour = 0.0;  // per hour of negative audio
};

using DetectionsByStream = std::map<std::string, std::vector<Detection>>;

// A positive stream is a hit when any sufficiently scoring detection
// falls inside its interval. Threshold-passing detections elsewhere
// (negative streams, or out of interval in positive streams) are false
// alarms.
RateReport ScoreStreams(const DetectionsByStream& detections,
                        const std::vector<LabeledStream>& labels,
                        double threshold);

struct DetPoint {
  double threshold = 0.0;
  double far_per_hour = 0.0;
  int false_alarms = 0;
  double frr = 0.0;
};

struct DetCurve {
  std::vector<DetPoint> points;  // sorted by threshold
  double operating_point = 0.0;
};

// Threshold sweep over the observed scores plus {0, 1}.
DetCurve ComputeDetCurve(const DetectionsByStream& detections,
                         const std::vector<LabeledStream>& labels);

// Smallest threshold whose FAR meets the target.
double SelectOperatingPoint(const DetCurve& curve, double target_far_per_hour);

// Sample Pearson correlation; throws DegenerateVarianceError on constant
// input.
double Pearson(const std::vector<double>& a, const std::vector<double>& b);

struct OpShiftRow {
  int gain_db = 0;
  double far_per_hour = 0.0;
  double frr = 0.0;
  double rel_far_change = 0.0;  // vs 0 dB
  double rel_frr_change = 0.0;
};

// FAR/FRR at a fixed operating point for each gain condition, with
// relative changes against the 0 dB row. Relative change is 0 when the
// 0 dB value is 0 and the variant matches it, and is reported against a
// 1-count floor otherwise.
std::vector<OpShiftRow> OpShiftReport(
    const std::map<int, DetectionsByStream>& detections_per_gain,
    const std::vector<LabeledStream>& labels, double base_op);

// CSV: threshold,far_per_hour,frr (one file per curve).
void WriteDetCsv(const DetCurve& curve, const std::string& path);

// Standalone SVG: log-x FAR/h, linear-y FRR, one polyline per named
// curve, operating points drawn as squares.
void WriteDetSvg(const std::map<std::string, DetCurve>& curves,
                 const std::string& path);

void WriteOpShiftCsv(const std::vector<OpShiftRow>& rows,
                     const std::string& path);

// labels.json sidecar: [{stream, label, interval_steps, duration_seconds}].
void WriteLabelsJson(const std::vector<LabeledStream>& labels,
                     const std::string& path);
std::vector<LabeledStream> ReadLabelsJson(const std::string& path);

}  // namespace gainspot

#endif  // GAINSPOT_EVAL_HPP_
