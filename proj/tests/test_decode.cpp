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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "gainspot/decode.hpp"
#include "gainspot/errors.hpp"
#include "gainspot/rng.hpp"

using namespace gainspot;

namespace {

PosteriorTrace RandomTrace(uint64_t seed, int n) {
  Pcg32 rng(seed, 0);
  PosteriorTrace t(n);
  for (float& v : t) v = static_cast<float>(rng.NextDouble());
  return t;
}

// Quadratic-time reference for the trailing moving average.
PosteriorTrace WmaOracle(const PosteriorTrace& trace, int window) {
  PosteriorTrace out(trace.size());
  for (size_t t = 0; t < trace.size(); ++t) {
    size_t lo = t + 1 >= static_cast<size_t>(window) ? t + 1 - window : 0;
    double sum = 0.0;
    for (size_t i = lo; i <= t; ++i) sum += trace[i];
    out[t] = static_cast<float>(sum / (t - lo + 1));
  }
  return out;
}

// Independent scan mirroring the documented peak semantics.
std::vector<Detection> PeakOracle(const PosteriorTrace& trace,
                                  const PeakConfig& cfg) {
  std::vector<Detection> out;
  int last = -1;
  for (int t = 0; t < static_cast<int>(trace.size()); ++t) {
    int n = static_cast<int>(trace.size());
    bool left_ok = (t == 0) || trace[t] > trace[t - 1];
    int r = t;
    while (r + 1 < n && trace[r + 1] == trace[t]) ++r;
    bool right_ok = (r + 1 == n) || trace[t] > trace[r + 1];
    bool clear = (last < 0) || (t - last >= cfg.lockout);
    if (trace[t] >= cfg.threshold && left_ok && right_ok && clear) {
      out.push_back({t, trace[t]});
      last = t;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("trailing moving average matches the quadratic oracle") {
  for (int window : {1, 3, 30}) {
    PosteriorTrace t = RandomTrace(21 + window, 200);
    PosteriorTrace got = SmoothWma(t, window);
    PosteriorTrace want = WmaOracle(t, window);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(SmoothWma({0.5f}, 0), InvalidArgumentError);
}

TEST_CASE("window-1 smoothing is the identity") {
  PosteriorTrace t = RandomTrace(22, 64);
  CHECK(SmoothWma(t, 1) == t);
}

TEST_CASE("exponential smoothing follows the recurrence") {
  PosteriorTrace t = {0.0f, 1.0f, 1.0f, 0.0f};
  PosteriorTrace s = SmoothEma(t, 0.5f);
  CHECK(s[0] == doctest::Approx(0.0));
  CHECK(s[1] == doctest::Approx(0.5));
  CHECK(s[2] == doctest::Approx(0.75));
  CHECK(s[3] == doctest::Approx(0.375));
  CHECK_THROWS_AS(SmoothEma(t, 0.0f), InvalidArgumentError);
  CHECK_THROWS_AS(SmoothEma(t, 1.5f), InvalidArgumentError);
}

TEST_CASE("smoothing dispatch honors the spec kind") {
  PosteriorTrace t = RandomTrace(23, 50);
  CHECK(Smooth(t, SmoothingSpec::Wma(5)) == SmoothWma(t, 5));
  CHECK(Smooth(t, SmoothingSpec::Ema(0.2f)) == SmoothEma(t, 0.2f));
}

TEST_CASE("peak picking matches an independent scan on random traces") {
  for (int trial = 0; trial < 50; ++trial) {
    PosteriorTrace t = RandomTrace(100 + trial, 300);
    PeakConfig cfg{0.5f, 1 + trial % 40};
    auto got = DetectPeaks(t, cfg);
    auto want = PeakOracle(t, cfg);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].step == want[i].step);
      CHECK(got[i].score == want[i].score);
    }
  }
}

TEST_CASE("plateaus yield their leftmost step") {
  PosteriorTrace t = {0.1f, 0.9f, 0.9f, 0.9f, 0.1f};
  auto dets = DetectPeaks(t, PeakConfig{0.5f, 1});
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].step == 1);
}

TEST_CASE("lockout suppresses nearby peaks greedily") {
  PosteriorTrace t = {0.9f, 0.1f, 0.8f, 0.1f, 0.7f, 0.1f};
  auto near = DetectPeaks(t, PeakConfig{0.5f, 3});
  REQUIRE(near.size() == 2);
  CHECK(near[0].step == 0);
  CHECK(near[1].step == 4);  // step 2 falls inside the lockout
  auto all = DetectPeaks(t, PeakConfig{0.5f, 1});
  CHECK(all.size() == 3);
  CHECK_THROWS_AS(DetectPeaks(t, PeakConfig{0.5f, 0}), InvalidArgumentError);
}

TEST_CASE("edges count as one-sided peaks") {
  auto dets = DetectPeaks({0.9f, 0.2f, 0.3f, 0.9f}, PeakConfig{0.5f, 1});
  REQUIRE(dets.size() == 2);
  CHECK(dets[0].step == 0);
  CHECK(dets[1].step == 3);
  CHECK(DetectPeaks({}, PeakConfig{0.5f, 1}).empty());
}

TEST_CASE("detections survive a csv round-trip") {
  namespace fs = std::filesystem;
  std::map<std::string, std::vector<Detection>> dets;
  dets["a"] = {{12, 0.75f}, {140, 0.9999999f}};
  dets["b"] = {{0, 1.0f}};
  dets["empty"] = {};
  fs::path path = fs::temp_directory_path() / "gainspot_dets_test.csv";
  WriteDetectionsCsv(dets, path.string());
  auto back = ReadDetectionsCsv(path.string());
  // Streams without detections have no rows, hence no key on re-read.
  CHECK(back.size() == 2);
  CHECK(back["a"].size() == 2);
  CHECK(back["a"][0].step == 12);
  CHECK(back["a"][0].score == 0.75f);
  CHECK(back["a"][1].score == 0.9999999f);  // 9 digits round-trip floats
  CHECK(back["b"][0].step == 0);
  fs::remove(path);

  WriteDetectionsCsv({}, path.string());
  CHECK(ReadDetectionsCsv(path.string()).empty());
  fs::remove(path);
  CHECK_THROWS_AS(ReadDetectionsCsv("/nonexistent.csv"), IoError);
}
