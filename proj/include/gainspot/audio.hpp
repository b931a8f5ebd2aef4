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

#ifndef GAINSPOT_AUDIO_HPP_
#define GAINSPOT_AUDIO_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace gainspot {

inline constexpr int kSampleRate = 16000;

// 16-bit signed PCM at 16 kHz. Immutable value type; every transform
// below returns a fresh buffer.
struct AudioBuffer {
  std::vector<int16_t> samples;
  int sample_rate = kSampleRate;

  bool operator==(const AudioBuffer&) const = default;
};

// Bit-depth bookkeeping for the dynamic-range transforms. A 16-bit word
// carries 15 magnitude bits; reserving `reserved_bits` at each end leaves
// (15 - reserved_bits) usable bits.
struct BitDepthParams {
  int reserved_bits = 2;
  static constexpr int kMagnitudeBits = 15;

  bool Valid() const { return reserved_bits >= 0 && reserved_bits <= 7; }
};

// Bit-shift gain: k >= 0 multiplies by 2^k with int16 saturation;
// k < 0 is an arithmetic right shift (floor division by 2^|k|).
// One bit is ~6.02 dB of power.
AudioBuffer ShiftGain(const AudioBuffer& buf, int bits);

// Multiply by 10^(gain_db/20), round to nearest (ties away from zero),
// saturate to int16.
AudioBuffer ScaleGainDb(const AudioBuffer& buf, double gain_db);

// Zero the b least-significant bits of each sample (two's-complement
// mask, i.e. floor toward -inf for negatives).
AudioBuffer Quantize(const AudioBuffer& buf, const BitDepthParams& params);

// Saturate each sample to [-2^(15-b), 2^(15-b) - 1].
AudioBuffer Clip(const AudioBuffer& buf, const BitDepthParams& params);

// Hard dynamic range compression: clip then quantize, so the output both
// has b zero LSBs and magnitude under 2^(15-b). Idempotent; makes gain
// shifts of up to b bits lossless in either direction.
AudioBuffer Hdrc(const AudioBuffer& buf, const BitDepthParams& params);

}  // namespace gainspot

#endif  // GAINSPOT_AUDIO_HPP_
