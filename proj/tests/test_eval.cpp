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

#include <filesystem>
#include <fstream>

#include "gainspot/errors.hpp"
#include "gainspot/eval.hpp"

using namespace gainspot;

namespace {

LabeledStream Pos(const std::string& id, int begin, int end) {
  return {id, StreamLabel::kPositive, begin, end, 3.0};
}

LabeledStream Neg(const std::string& id, double seconds = 3.0) {
  return {id, StreamLabel::kNegative, 0, 0, seconds};
}

// 2 positives (one hit, one miss at 0.5), a negative with one loud false
// alarm, and an out-of-interval alarm on a positive stream.
struct Scenario {
  DetectionsByStream dets;
  std::vector<LabeledStream> labels;

  Scenario() {
    labels = {Pos("p0", 40, 120), Pos("p1", 40, 120), Neg("n0"), Neg("n1")};
    dets["p0"] = {{80, 0.9f}, {200, 0.6f}};  // hit + out-of-interval alarm
    dets["p1"] = {{80, 0.3f}};               // below 0.5
    dets["n0"] = {{10, 0.8f}};
  }
};

}  // namespace

TEST_CASE("rates from a hand-built scenario") {
  Scenario s;
  RateReport rep = ScoreStreams(s.dets, s.labels, 0.5);
  CHECK(rep.positives == 2);
  CHECK(rep.misses == 1);
  CHECK(rep.frr == doctest::Approx(0.5));
  CHECK(rep.false_alarms == 2);
  // 2 alarms over 6 s of negative audio.
  CHECK(rep.far_per_hour == doctest::Approx(2.0 / (6.0 / 3600.0)));

  // At threshold 0 the p1 detection becomes an in-interval hit, leaving
  // the out-of-interval p0 alarm and the n0 alarm.
  RateReport low = ScoreStreams(s.dets, s.labels, 0.0);
  CHECK(low.misses == 0);
  CHECK(low.false_alarms == 2);
  RateReport high = ScoreStreams(s.dets, s.labels, 1.0);
  CHECK(high.misses == 2);
  CHECK(high.false_alarms == 0);
}

TEST_CASE("threshold comparisons carry a small slack") {
  std::vector<LabeledStream> labels = {Pos("p", 0, 10)};
  DetectionsByStream dets;
  dets["p"] = {{5, 0.5f}};
  // A score that defines a threshold still counts when reproduced with
  // float-level noise.
  CHECK(ScoreStreams(dets, labels, 0.5 + kScoreSlack / 2).misses == 0);
  CHECK(ScoreStreams(dets, labels, 0.5 + 2 * kScoreSlack).misses == 1);
}

TEST_CASE("unlabeled detection streams are an error") {
  Scenario s;
  s.dets["ghost"] = {{1, 0.9f}};
  CHECK_THROWS_AS(ScoreStreams(s.dets, s.labels, 0.5), MissingLabelError);
}

TEST_CASE("det curve sweeps observed scores plus the endpoints") {
  Scenario s;
  DetCurve curve = ComputeDetCurve(s.dets, s.labels);
  // Unique scores {0.3, 0.6, 0.8, 0.9} plus {0, 1}.
  REQUIRE(curve.points.size() == 6);
  CHECK(curve.points.front().threshold == 0.0);
  CHECK(curve.points.back().threshold == 1.0);
  for (size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].threshold > curve.points[i - 1].threshold);
    CHECK(curve.points[i].frr >= curve.points[i - 1].frr);
    CHECK(curve.points[i].far_per_hour <=
          curve.points[i - 1].far_per_hour);
  }
  CHECK(curve.points.front().false_alarms == 2);
  CHECK(curve.points.back().false_alarms == 0);
}

TEST_CASE("operating point is the smallest threshold meeting the target") {
  Scenario s;
  DetCurve curve = ComputeDetCurve(s.dets, s.labels);
  // 1 alarm per 6 s = 600/h; ask for at most one alarm.
  double op = SelectOperatingPoint(curve, 600.0);
  RateReport rep = ScoreStreams(s.dets, s.labels, op);
  CHECK(rep.false_alarms <= 1);
  // Any lower observed threshold violates the target.
  for (const DetPoint& p : curve.points) {
    if (p.threshold < op) CHECK(p.far_per_hour > 600.0);
  }
  DetectionsByStream loud;
  loud["n0"] = {{1, 1.0f}};
  DetCurve bad = ComputeDetCurve(loud, {Neg("n0")});
  CHECK_THROWS_AS(SelectOperatingPoint(bad, 0.0), UnattainableError);
}

TEST_CASE("pearson correlation on exact and degenerate inputs") {
  std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> up = {2.0, 4.0, 6.0, 8.0};
  std::vector<double> down = {4.0, 3.0, 2.0, 1.0};
  CHECK(Pearson(a, up) == doctest::Approx(1.0));
  CHECK(Pearson(a, down) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(Pearson(a, {1.0, 1.0, 1.0, 1.0}), DegenerateVarianceError);
  CHECK_THROWS_AS(Pearson(a, {1.0}), InvalidArgumentError);
}

TEST_CASE("op-shift report compares each gain against 0 dB") {
  std::vector<LabeledStream> labels = {Pos("p", 0, 10), Neg("n")};
  DetectionsByStream ref, worse, same;
  ref["p"] = {{5, 0.9f}};
  same = ref;
  worse["n"] = {{3, 0.9f}};  // loses the hit, gains an alarm
  std::map<int, DetectionsByStream> per_gain = {
      {-6, worse}, {0, ref}, {6, same}};
  auto rows = OpShiftReport(per_gain, labels, 0.5);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].gain_db == -6);
  // Reference FAR is 0, so the change is reported against a 1-count floor.
  CHECK(rows[0].rel_far_change > 0.0);
  CHECK(rows[0].rel_frr_change == doctest::Approx(1.0));
  CHECK(rows[1].rel_far_change == 0.0);
  CHECK(rows[1].rel_frr_change == 0.0);
  CHECK(rows[2].rel_far_change == 0.0);
  CHECK(rows[2].rel_frr_change == 0.0);
  CHECK_THROWS_AS(OpShiftReport({{6, same}}, labels, 0.5),
                  InvalidArgumentError);
}

TEST_CASE("labels survive a json round-trip") {
  namespace fs = std::filesystem;
  std::vector<LabeledStream> labels = {Pos("p0", 12, 90), Neg("n0", 2.5)};
  fs::path path = fs::temp_directory_path() / "gainspot_labels_test.json";
  WriteLabelsJson(labels, path.string());
  auto back = ReadLabelsJson(path.string());
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "p0");
  CHECK(back[0].label == StreamLabel::kPositive);
  CHECK(back[0].interval_begin == 12);
  CHECK(back[0].interval_end == 90);
  CHECK(back[1].label == StreamLabel::kNegative);
  CHECK(back[1].duration_seconds == doctest::Approx(2.5));
  fs::remove(path);

  std::ofstream(path.string()) << "not json";
  CHECK_THROWS_AS(ReadLabelsJson(path.string()), FormatError);
  fs::remove(path);
}

TEST_CASE("det artifacts are written") {
  namespace fs = std::filesystem;
  Scenario s;
  DetCurve curve = ComputeDetCurve(s.dets, s.labels);
  curve.operating_point = SelectOperatingPoint(curve, 600.0);
  fs::path csv = fs::temp_directory_path() / "gainspot_det_test.csv";
  fs::path svg = fs::temp_directory_path() / "gainspot_det_test.svg";
  WriteDetCsv(curve, csv.string());
  WriteDetSvg({{"toy", curve}}, svg.string());
  std::ifstream in(csv.string());
  std::string header;
  std::getline(in, header);
  CHECK(header == "threshold,far_per_hour,frr");
  std::ifstream svg_in(svg.string());
  std::string svg_text((std::istreambuf_iterator<char>(svg_in)),
                       std::istreambuf_iterator<char>());
  CHECK(svg_text.find("<svg") == 0);
  CHECK(svg_text.find("polyline") != std::string::npos);
  CHECK(svg_text.find("toy") != std::string::npos);
  fs::remove(csv);
  fs::remove(svg);
}
