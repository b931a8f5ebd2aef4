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

#include "gainspot/wav.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "gainspot/errors.hpp"

namespace gainspot {

namespace {

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<uint8_t>* out, uint32_t v) {
  out->push_back(static_cast<uint8_t>(v & 0xff));
  out->push_back(static_cast<uint8_t>((v >> 8) & 0xff));
  out->push_back(static_cast<uint8_t>((v >> 16) & 0xff));
  out->push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

void PutU16(std::vector<uint8_t>* out, uint16_t v) {
  out->push_back(static_cast<uint8_t>(v & 0xff));
  out->push_back(static_cast<uint8_t>((v >> 8) & 0xff));
}

}  // namespace

AudioBuffer ReadWav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("ReadWav: cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("ReadWav: not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false;
  uint16_t format_code = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    char id[5] = {0};
    std::memcpy(id, bytes.data() + pos, 4);
    uint32_t size = ReadU32(bytes.data() + pos + 4);
    size_t body = pos + 8;
    if (body + size > bytes.size()) {
      throw FormatError("ReadWav: truncated chunk '" + std::string(id) +
                        "' in " + path);
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw FormatError("ReadWav: short fmt chunk in " + path);
      format_code = ReadU16(bytes.data() + body);
      channels = ReadU16(bytes.data() + body + 2);
      rate = ReadU32(bytes.data() + body + 4);
      bits = ReadU16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!have_fmt) throw FormatError("ReadWav: data before fmt in " + path);
      if (format_code != 1 || channels != 1 || bits != 16 ||
          rate != static_cast<uint32_t>(kSampleRate)) {
        throw UnsupportedFormatError(
            "ReadWav: need PCM 16-bit mono 16000 Hz, got format=" +
            std::to_string(format_code) + " ch=" + std::to_string(channels) +
            " rate=" + std::to_string(rate) + " bits=" + std::to_string(bits));
      }
      if (size % 2 != 0) throw FormatError("ReadWav: odd data size in " + path);
      AudioBuffer buf;
      buf.sample_rate = kSampleRate;
      buf.samples.resize(size / 2);
      for (size_t i = 0; i < buf.samples.size(); ++i) {
        buf.samples[i] = static_cast<int16_t>(ReadU16(bytes.data() + body + 2 * i));
      }
      return buf;
    }
    pos = body + size + (size & 1);  // chunks are word-aligned
  }
  throw FormatError("ReadWav: no data chunk in " + path);
}

void WriteWav(const AudioBuffer& buf, const std::string& path) {
  uint32_t data_size = static_cast<uint32_t>(buf.samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(&out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  PutU32(&out, 16);
  PutU16(&out, 1);  // PCM
  PutU16(&out, 1);  // mono
  PutU32(&out, static_cast<uint32_t>(buf.sample_rate));
  PutU32(&out, static_cast<uint32_t>(buf.sample_rate) * 2);  // byte rate
  PutU16(&out, 2);   // block align
  PutU16(&out, 16);  // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(&out, data_size);
  for (int16_t s : buf.samples) {
    PutU16(&out, static_cast<uint16_t>(s));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("WriteWav: cannot open " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("WriteWav: write failed: " + path);
}

}  // namespace gainspot
