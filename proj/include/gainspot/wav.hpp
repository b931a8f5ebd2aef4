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

#ifndef GAINSPOT_WAV_HPP_
#define GAINSPOT_WAV_HPP_

#include <string>

#include "gainspot/audio.hpp"

namespace gainspot {

// Read a RIFF/WAVE file. Accepts PCM (format code 1), 16-bit, mono,
// 16000 Hz only; tolerates extra chunks before `data`.
// Throws UnsupportedFormatError / FormatError / IoError.
AudioBuffer ReadWav(const std::string& path);

// Write a canonical minimal 44-byte-header RIFF/WAVE file.
void WriteWav(const AudioBuffer& buf, const std::string& path);

}  // namespace gainspot

#endif  // GAINSPOT_WAV_HPP_
