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
//
// Python bindings for the main operations: dynamic-range transforms,
// feature extraction, delta folding and the spotting pipeline.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gainspot/audio.hpp"
#include "gainspot/decode.hpp"
#include "gainspot/features.hpp"
#include "gainspot/graph.hpp"
#include "gainspot/pipeline.hpp"
#include "gainspot/simgen.hpp"
#include "gainspot/wav.hpp"

namespace py = pybind11;
using namespace gainspot;

namespace {

AudioBuffer ToBuffer(const std::vector<int16_t>& samples) {
  AudioBuffer buf;
  buf.samples = samples;
  return buf;
}

std::vector<std::vector<float>> ToRows(const FeatureMatrix& feat) {
  std::vector<std::vector<float>> rows(feat.frames);
  for (int t = 0; t < feat.frames; ++t) {
    rows[t].assign(feat.values.begin() + static_cast<size_t>(t) * feat.bands,
                   feat.values.begin() +
                       static_cast<size_t>(t + 1) * feat.bands);
  }
  return rows;
}

FeatureMatrix FromRows(const std::vector<std::vector<float>>& rows) {
  FeatureMatrix feat;
  feat.frames = static_cast<int>(rows.size());
  feat.bands = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (const auto& r : rows) {
    feat.values.insert(feat.values.end(), r.begin(), r.end());
  }
  return feat;
}

}  // namespace

PYBIND11_MODULE(pygainspot, m) {
  m.doc() = "wake-word spotting toolkit with gain-robust delta features";

  m.def(
      "hdrc",
      [](const std::vector<int16_t>& samples, int reserved_bits) {
        return Hdrc(ToBuffer(samples), BitDepthParams{reserved_bits}).samples;
      },
      py::arg("samples"), py::arg("reserved_bits") = 2,
      "clip-then-quantize dynamic range compression");

  m.def(
      "shift_gain",
      [](const std::vector<int16_t>& samples, int bits) {
        return ShiftGain(ToBuffer(samples), bits).samples;
      },
      py::arg("samples"), py::arg("bits"), "bit-shift gain (~6 dB per bit)");

  m.def(
      "lfbe",
      [](const std::vector<int16_t>& samples, int bands) {
        FrameConfig fc;
        MelFilterbank fb = BuildMelFilterbank(fc, bands, 0.0, 8000.0);
        return ToRows(Lfbe(ToBuffer(samples), fc, fb));
      },
      py::arg("samples"), py::arg("bands") = 20,
      "log mel-filterbank energies, one row per 10 ms frame");

  m.def(
      "delta_lfbe",
      [](const std::vector<std::vector<float>>& rows) {
        return ToRows(DeltaLfbe(FromRows(rows)));
      },
      py::arg("features"), "frame-to-frame feature difference");

  m.def(
      "fold_delta",
      [](const std::vector<float>& w, int rows, int frames_per_band,
         int bands) {
        return FoldDelta(w, rows, DeltaMatrixSpec{frames_per_band, bands});
      },
      py::arg("weights"), py::arg("rows"), py::arg("frames_per_band"),
      py::arg("bands"), "fold the difference transform into a weight matrix");

  m.def(
      "unfold_delta",
      [](const std::vector<float>& v, int rows, int frames_per_band,
         int bands) {
        return UnfoldDelta(v, rows, DeltaMatrixSpec{frames_per_band, bands});
      },
      py::arg("weights"), py::arg("rows"), py::arg("frames_per_band"),
      py::arg("bands"), "invert fold_delta (requires zero block sums)");

  m.def(
      "max_block_sum_residual",
      [](const std::vector<float>& v, int rows, int frames_per_band,
         int bands) {
        return MaxBlockSumResidual(v, rows,
                                   DeltaMatrixSpec{frames_per_band, bands});
      },
      py::arg("weights"), py::arg("rows"), py::arg("frames_per_band"),
      py::arg("bands"), "largest per-band row-block sum magnitude");

  m.def(
      "make_preset",
      [](const std::string& preset, const std::string& mode, uint64_t seed,
         const std::string& path) {
        ModelGraph model = MakePreset(preset, mode, seed);
        SaveModel(model, path);
        return ParameterCount(model);
      },
      py::arg("preset"), py::arg("mode"), py::arg("seed"), py::arg("path"),
      "build a seeded preset model, save it, return its parameter count");

  m.def(
      "spot",
      [](const std::string& model_path, const std::string& wav_path,
         float threshold, int lockout) {
        ModelGraph model = LoadModel(model_path);
        AudioBuffer buf = ReadWav(wav_path);
        auto detections = SpotBuffer(model, buf, SmoothingForModel(model),
                                     PeakConfig{threshold, lockout});
        std::vector<std::pair<int, float>> out;
        out.reserve(detections.size());
        for (const Detection& d : detections) {
          out.emplace_back(d.step, d.score);
        }
        return out;
      },
      py::arg("model_path"), py::arg("wav_path"), py::arg("threshold") = 0.5f,
      py::arg("lockout") = 30,
      "run the full spotter on one wav; returns (step, score) pairs");

  m.def(
      "synth_stream",
      [](uint64_t seed, bool positive) {
        CorpusSpec spec;
        spec.seed = seed;
        spec.n_positive = 1;
        spec.n_negative = 1;
        return SynthCorpus(spec).streams.at(positive ? 0 : 1).audio.samples;
      },
      py::arg("seed"), py::arg("positive") = true,
      "one synthetic stream's samples (keyword or noise/distractor)");

  m.def(
      "read_wav",
      [](const std::string& path) { return ReadWav(path).samples; },
      py::arg("path"));
  m.def(
      "write_wav",
      [](const std::vector<int16_t>& samples, const std::string& path) {
        WriteWav(ToBuffer(samples), path);
      },
      py::arg("samples"), py::arg("path"));
}
