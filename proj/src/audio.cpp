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

#include "gainspot/audio.hpp"

#include <cmath>

#include "gainspot/errors.hpp"

namespace gainspot {

namespace {

int16_t SaturateI32(int32_t v) {
  if (v > 32767) return 32767;
  if (v < -32768) return -32768;
  return static_cast<int16_t>(v);
}

}  // namespace

AudioBuffer ShiftGain(const AudioBuffer& buf, int bits) {
  if (bits < -7 || bits > 7) {
    throw InvalidArgumentError("ShiftGain: |bits| must be <= 7");
  }
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples.reserve(buf.samples.size());
  for (int16_t s : buf.samples) {
    int32_t v = s;
    if (bits >= 0) {
      out.samples.push_back(SaturateI32(v << bits));
    } else {
      // Arithmetic right shift == floor division by 2^|bits|.
      out.samples.push_back(static_cast<int16_t>(v >> (-bits)));
    }
  }
  return out;
}

AudioBuffer ScaleGainDb(const AudioBuffer& buf, double gain_db) {
  if (!std::isfinite(gain_db)) {
    throw InvalidArgumentError("ScaleGainDb: gain_db must be finite");
  }
  double scale = std::pow(10.0, gain_db / 20.0);
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples.reserve(buf.samples.size());
  for (int16_t s : buf.samples) {
    double v = s * scale;
    // Round half away from zero.
    double r = (v >= 0.0) ? std::floor(v + 0.5) : std::ceil(v - 0.5);
    if (r > 32767.0) r = 32767.0;
    if (r < -32768.0) r = -32768.0;
    out.samples.push_back(static_cast<int16_t>(r));
  }
  return out;
}

AudioBuffer Quantize(const AudioBuffer& buf, const BitDepthParams& params) {
  if (!params.Valid()) {
    throw InvalidArgumentError("Quantize: invalid bit-depth params");
  }
  uint16_t mask = static_cast<uint16_t>(~((1u << params.reserved_bits) - 1u));
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples.reserve(buf.samples.size());
  for (int16_t s : buf.samples) {
    out.samples.push_back(
        static_cast<int16_t>(static_cast<uint16_t>(s) & mask));
  }
  return out;
}

AudioBuffer Clip(const AudioBuffer& buf, const BitDepthParams& params) {
  if (!params.Valid()) {
    throw InvalidArgumentError("Clip: invalid bit-depth params");
  }
  int32_t hi = (1 << (BitDepthParams::kMagnitudeBits - params.reserved_bits)) - 1;
  int32_t lo = -(hi + 1);
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples.reserve(buf.samples.size());
  for (int16_t s : buf.samples) {
    int32_t v = s;
    if (v > hi) v = hi;
    if (v < lo) v = lo;
    out.samples.push_back(static_cast<int16_t>(v));
  }
  return out;
}

AudioBuffer Hdrc(const AudioBuffer& buf, const BitDepthParams& params) {
  // Clip first, then quantize: both postconditions (zero LSBs, bounded
  // magnitude) hold on the result, and the composition is idempotent.
  return Quantize(Clip(buf, params), params);
}

}  // namespace gainspot
