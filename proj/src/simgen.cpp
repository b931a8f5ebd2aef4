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

#include "gainspot/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "gainspot/errors.hpp"
#include "gainspot/rng.hpp"
#include "gainspot/wav.hpp"

namespace gainspot {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

int16_t SaturateD(double v) {
  double r = (v >= 0.0) ? std::floor(v + 0.5) : std::ceil(v - 0.5);
  if (r > 32767.0) return 32767;
  if (r < -32768.0) return -32768;
  return static_cast<int16_t>(r);
}

// Tone template: one segment per frequency, each with raised-cosine
// onset/offset ramps inside the segment.
std::vector<double> ToneTemplate(const std::vector<double>& freqs,
                                 double segment_seconds, double ramp_seconds,
                                 double amplitude) {
  int seg = static_cast<int>(std::lround(segment_seconds * kSampleRate));
  int ramp = static_cast<int>(std::lround(ramp_seconds * kSampleRate));
  std::vector<double> out;
  out.reserve(freqs.size() * seg);
  for (double f : freqs) {
    for (int i = 0; i < seg; ++i) {
      double env = 1.0;
      if (i < ramp) {
        env = 0.5 - 0.5 * std::cos(kTwoPi * 0.5 * i / ramp);
      } else if (i >= seg - ramp) {
        env = 0.5 - 0.5 * std::cos(kTwoPi * 0.5 * (seg - 1 - i) / ramp);
      }
      out.push_back(amplitude * env * std::sin(kTwoPi * f * i / kSampleRate));
    }
  }
  return out;
}

}  // namespace

std::vector<LabeledStream> Corpus::Labels() const {
  std::vector<LabeledStream> out;
  out.reserve(streams.size());
  for (const SimStream& s : streams) out.push_back(s.label);
  return out;
}

Corpus SynthCorpus(const CorpusSpec& spec) {
  if (spec.n_positive < 1 || spec.n_negative < 1) {
    throw InvalidArgumentError("SynthCorpus: need at least one of each label");
  }
  int total = static_cast<int>(std::lround(spec.stream_seconds * kSampleRate));
  double noise_amp = 32768.0 * std::pow(10.0, spec.noise_dbfs / 20.0);
  double tone_amp = 32768.0 * std::pow(10.0, spec.keyword_dbfs / 20.0);
  auto keyword = ToneTemplate(spec.keyword_freqs_hz, spec.segment_seconds,
                              spec.ramp_seconds, tone_amp);
  auto distractor = ToneTemplate(spec.distractor_freqs_hz,
                                 spec.segment_seconds, spec.ramp_seconds,
                                 tone_amp);

  // Full span of one stacked context window, in samples.
  int window_span =
      (spec.context_frames - 1) * spec.hop + spec.window_len;
  int frames = 1 + (total - spec.window_len) / spec.hop;
  int steps = frames - spec.context_frames + 1;
  const int margin = kSampleRate / 4;
  const int interval_pad = 40;  // steps of slack for smoothing delay

  Corpus corpus;
  int n_streams = spec.n_positive + spec.n_negative;
  for (int idx = 0; idx < n_streams; ++idx) {
    bool positive = idx < spec.n_positive;
    Pcg32 rng(spec.seed, static_cast<uint64_t>(idx));
    std::vector<double> mix(total);
    for (int i = 0; i < total; ++i) {
      mix[i] = rng.NextGaussian() * noise_amp;
    }

    SimStream stream;
    char id[32];
    if (positive) {
      std::snprintf(id, sizeof(id), "pos_%04d", idx);
    } else {
      std::snprintf(id, sizeof(id), "neg_%04d", idx - spec.n_positive);
    }
    stream.id = id;
    stream.label.id = id;
    stream.label.duration_seconds = spec.stream_seconds;
    stream.label.label =
        positive ? StreamLabel::kPositive : StreamLabel::kNegative;

    const std::vector<double>* tone = nullptr;
    double tone_scale = 1.0;
    if (positive) {
      tone = &keyword;
    } else if (spec.quiet_keyword_prob > 0.0 &&
               rng.NextDouble() < spec.quiet_keyword_prob) {
      tone = &keyword;
      tone_scale = std::pow(10.0, -spec.quiet_drop_db / 20.0);
    } else if (rng.NextDouble() < 0.5) {
      tone = &distractor;
    }
    if (tone) {
      int tone_len = static_cast<int>(tone->size());
      int max_onset = total - tone_len - margin;
      if (max_onset <= margin) {
        throw InvalidArgumentError("SynthCorpus: stream too short for tone");
      }
      int onset = margin + static_cast<int>(rng.NextBounded(
                               static_cast<uint32_t>(max_onset - margin + 1)));
      for (int i = 0; i < tone_len; ++i) {
        mix[onset + i] += tone_scale * (*tone)[i];
      }
      // Steps whose stacked window fully contains the tone, padded.
      // Scoring only reads the interval on positives; on distractor
      // negatives it marks where the confusable tone sits, which
      // trainers use to mine hard negative windows.
      int t_min = (onset + tone_len - window_span + spec.hop - 1) / spec.hop;
      int t_max = onset / spec.hop;
      stream.label.interval_begin = std::max(0, t_min - interval_pad);
      stream.label.interval_end = std::min(steps - 1, t_max + interval_pad);
    }

    stream.audio.sample_rate = kSampleRate;
    stream.audio.samples.reserve(total);
    for (double v : mix) {
      stream.audio.samples.push_back(SaturateD(v));
    }
    corpus.streams.push_back(std::move(stream));
  }
  return corpus;
}

AudioBuffer ApplySweepVariant(const AudioBuffer& buf,
                              const std::string& variant, int gain_db,
                              int reserved_bits) {
  BitDepthParams params{reserved_bits};
  if (variant == "hdrc") {
    if (gain_db % 6 != 0) {
      throw InvalidArgumentError(
          "ApplySweepVariant: gains must be whole bit shifts (multiples of "
          "6 dB)");
    }
    return ShiftGain(Hdrc(buf, params), gain_db / 6);
  }
  if (gain_db != 0) {
    throw InvalidArgumentError(
        "ApplySweepVariant: only the hdrc variant takes a gain");
  }
  if (variant == "quantize_only") return Quantize(buf, params);
  if (variant == "clip_only") return Clip(buf, params);
  if (variant == "original") return buf;
  throw InvalidArgumentError("ApplySweepVariant: unknown variant " + variant);
}

std::map<std::string, std::map<int, std::string>> BuildSweep(
    const Corpus& corpus, const SweepSpec& spec, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::map<std::string, std::map<int, std::string>> dirs;
  auto labels = corpus.Labels();
  for (const std::string& variant : spec.variants) {
    std::vector<int> gains =
        (variant == "hdrc") ? spec.gains_db : std::vector<int>{0};
    for (int gain : gains) {
      fs::path dir =
          fs::path(out_dir) / variant / std::to_string(gain);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) {
        throw IoError("BuildSweep: cannot create " + dir.string());
      }
      for (const SimStream& s : corpus.streams) {
        AudioBuffer v =
            ApplySweepVariant(s.audio, variant, gain, spec.reserved_bits);
        WriteWav(v, (dir / (s.id + ".wav")).string());
      }
      WriteLabelsJson(labels, (dir / "labels.json").string());
      dirs[variant][gain] = dir.string();
    }
  }
  return dirs;
}

}  // namespace gainspot
