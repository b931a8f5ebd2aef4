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

#ifndef GAINSPOT_SIMGEN_HPP_
#define GAINSPOT_SIMGEN_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gainspot/audio.hpp"
#include "gainspot/eval.hpp"

namespace gainspot {

// Synthetic keyword corpus: streams of white noise, positives carrying
// one three-tone keyword, negatives optionally carrying a two-segment
// distractor tone. Fully determined by the seed (PCG32 streams).
struct CorpusSpec {
  uint64_t seed = 42;
  int n_positive = 10;
  int n_negative = 10;
  double stream_seconds = 3.0;
  // Keyword: three tone segments with raised-cosine onset/offset ramps.
  std::vector<double> keyword_freqs_hz = {600.0, 1200.0, 800.0};
  double segment_seconds = 0.150;
  double ramp_seconds = 0.010;
  // Distractor: two segments at a single off-keyword frequency.
  std::vector<double> distractor_freqs_hz = {900.0, 900.0};
  double noise_dbfs = -30.0;    // white noise floor (RMS)
  double keyword_dbfs = -12.0;  // tone peak level, pre-HDRC
  // Fraction of negatives carrying the keyword pattern at a reduced
  // level ("too quiet to count"). Off by default; when enabled it makes
  // absolute level class-informative, the way real wake-word corpora
  // couple level and label.
  double quiet_keyword_prob = 0.0;
  double quiet_drop_db = 12.0;
  // Stacking geometry used to express hit intervals in decode steps.
  int context_frames = 80;
  int hop = 160;
  int window_len = 400;
};

struct SimStream {
  std::string id;
  AudioBuffer audio;
  LabeledStream label;
};

struct Corpus {
  std::vector<SimStream> streams;

  std::vector<LabeledStream> Labels() const;
};

struct SweepSpec {
  std::vector<int> gains_db = {-12, -6, 0, 6, 12};
  int reserved_bits = 2;
  // Subset of {"hdrc", "quantize_only", "clip_only", "original"}.
  std::vector<std::string> variants = {"hdrc"};
};

Corpus SynthCorpus(const CorpusSpec& spec);

// Write <out_dir>/<variant>/<gain_db>/<stream_id>.wav plus labels.json
// per directory. The hdrc variant applies HDRC then the bit-shift gain;
// quantize_only / clip_only / original ignore the gain list and write a
// single 0 dB directory. Returns variant -> gain -> directory.
std::map<std::string, std::map<int, std::string>> BuildSweep(
    const Corpus& corpus, const SweepSpec& spec, const std::string& out_dir);

// Apply one sweep variant to a buffer (gain_db must be a multiple of 6,
// meaning whole bit shifts).
AudioBuffer ApplySweepVariant(const AudioBuffer& buf,
                              const std::string& variant, int gain_db,
                              int reserved_bits);

}  // namespace gainspot

#endif  // GAINSPOT_SIMGEN_HPP_
