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

#include "gainspot/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

#include "gainspot/errors.hpp"

namespace gainspot {

namespace {

bool Counts(float score, double threshold) {
  return static_cast<double>(score) >= threshold - kScoreSlack;
}

}  // namespace

RateReport ScoreStreams(const DetectionsByStream& detections,
                        const std::vector<LabeledStream>& labels,
                        double threshold) {
  std::map<std::string, const LabeledStream*> by_id;
  for (const LabeledStream& s : labels) by_id[s.id] = &s;
  for (const auto& [id, dets] : detections) {
    (void)dets;
    if (!by_id.count(id)) {
      throw MissingLabelError("ScoreStreams: no label for stream " + id);
    }
  }

  RateReport rep;
  double negative_seconds = 0.0;
  for (const LabeledStream& s : labels) {
    auto it = detections.find(s.id);
    const std::vector<Detection>* dets =
        (it == detections.end()) ? nullptr : &it->second;
    if (s.label == StreamLabel::kPositive) {
      rep.positives += 1;
      bool hit = false;
      if (dets) {
        for (const Detection& d : *dets) {
          if (!Counts(d.score, threshold)) continue;
          if (d.step >= s.interval_begin && d.step <= s.interval_end) {
            hit = true;
          } else {
            rep.false_alarms += 1;
          }
        }
      }
      if (!hit) rep.misses += 1;
    } else {
      negative_seconds += s.duration_seconds;
      if (dets) {
        for (const Detection& d : *dets) {
          if (Counts(d.score, threshold)) rep.false_alarms += 1;
        }
      }
    }
  }
  rep.frr = rep.positives ? static_cast<double>(rep.misses) / rep.positives
                          : 0.0;
  rep.far_per_hour = (negative_seconds > 0.0)
                         ? rep.false_alarms / (negative_seconds / 3600.0)
                         : 0.0;
  return rep;
}

DetCurve ComputeDetCurve(const DetectionsByStream& detections,
                         const std::vector<LabeledStream>& labels) {
  std::set<double> thresholds{0.0, 1.0};
  for (const auto& [id, dets] : detections) {
    (void)id;
    for (const Detection& d : dets) {
      thresholds.insert(static_cast<double>(d.score));
    }
  }
  DetCurve curve;
  for (double t : thresholds) {
    RateReport rep = ScoreStreams(detections, labels, t);
    curve.points.push_back(
        DetPoint{t, rep.far_per_hour, rep.false_alarms, rep.frr});
  }
  // Monotone by construction (raising the threshold only removes
  // detections); fail loudly if that is ever violated.
  for (size_t i = 1; i < curve.points.size(); ++i) {
    if (curve.points[i].frr < curve.points[i - 1].frr - 1e-12 ||
        curve.points[i].far_per_hour >
            curve.points[i - 1].far_per_hour + 1e-9) {
      throw Error("ComputeDetCurve: non-monotone curve");
    }
  }
  return curve;
}

double SelectOperatingPoint(const DetCurve& curve,
                            double target_far_per_hour) {
  if (curve.points.empty()) {
    throw InvalidArgumentError("SelectOperatingPoint: empty curve");
  }
  for (const DetPoint& p : curve.points) {
    if (p.far_per_hour <= target_far_per_hour) {
      return p.threshold;
    }
  }
  throw UnattainableError(
      "SelectOperatingPoint: no threshold meets the FAR target");
}

double Pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw InvalidArgumentError("Pearson: need equal lengths >= 2");
  }
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= a.size();
  mb /= b.size();
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw DegenerateVarianceError("Pearson: zero variance input");
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<OpShiftRow> OpShiftReport(
    const std::map<int, DetectionsByStream>& detections_per_gain,
    const std::vector<LabeledStream>& labels, double base_op) {
  auto ref_it = detections_per_gain.find(0);
  if (ref_it == detections_per_gain.end()) {
    throw InvalidArgumentError("OpShiftReport: 0 dB condition required");
  }
  RateReport ref = ScoreStreams(ref_it->second, labels, base_op);
  std::vector<OpShiftRow> rows;
  for (const auto& [gain, dets] : detections_per_gain) {
    RateReport rep = ScoreStreams(dets, labels, base_op);
    OpShiftRow row;
    row.gain_db = gain;
    row.far_per_hour = rep.far_per_hour;
    row.frr = rep.frr;
    auto rel = [](double v, double ref_v) {
      if (v == ref_v) return 0.0;
      double denom = (ref_v != 0.0) ? ref_v : 1.0;
      return (v - ref_v) / denom;
    };
    row.rel_far_change = rel(rep.far_per_hour, ref.far_per_hour);
    row.rel_frr_change = rel(rep.frr, ref.frr);
    rows.push_back(row);
  }
  return rows;
}

void WriteDetCsv(const DetCurve& curve, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("WriteDetCsv: cannot open " + path);
  f << "threshold,far_per_hour,frr\n";
  char buf[128];
  for (const DetPoint& p : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", p.threshold,
                  p.far_per_hour, p.frr);
    f << buf;
  }
  if (!f) throw IoError("WriteDetCsv: write failed: " + path);
}

void WriteOpShiftCsv(const std::vector<OpShiftRow>& rows,
                     const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("WriteOpShiftCsv: cannot open " + path);
  f << "gain_db,far_per_hour,frr,rel_far_change,rel_frr_change\n";
  char buf[160];
  for (const OpShiftRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%.9g\n", r.gain_db,
                  r.far_per_hour, r.frr, r.rel_far_change, r.rel_frr_change);
    f << buf;
  }
  if (!f) throw IoError("WriteOpShiftCsv: write failed: " + path);
}

void WriteDetSvg(const std::map<std::string, DetCurve>& curves,
                 const std::string& path) {
  const int width = 640, height = 480;
  const int ml = 60, mr = 20, mt = 20, mb = 50;
  double far_min = 1e300, far_max = 0.0;
  for (const auto& [name, curve] : curves) {
    (void)name;
    for (const DetPoint& p : curve.points) {
      if (p.far_per_hour > 0.0) {
        far_min = std::min(far_min, p.far_per_hour);
        far_max = std::max(far_max, p.far_per_hour);
      }
    }
  }
  if (far_max <= 0.0) {
    far_min = 0.1;
    far_max = 10.0;
  }
  // Zero FAR is drawn one decade below the smallest positive value.
  double floor_far = far_min / 10.0;
  double lx0 = std::log10(floor_far), lx1 = std::log10(far_max);
  if (lx1 - lx0 < 1e-9) lx1 = lx0 + 1.0;
  auto x_of = [&](double far) {
    double v = std::log10(std::max(far, floor_far));
    return ml + (v - lx0) / (lx1 - lx0) * (width - ml - mr);
  };
  auto y_of = [&](double frr) {
    return mt + (1.0 - frr) * (height - mt - mb);
  };

  const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("WriteDetSvg: cannot open " + path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
    << width - mr << "\" y2=\"" << height - mb
    << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
    << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  f << "<text x=\"" << (width / 2)
    << "\" y=\"" << height - 12
    << "\" text-anchor=\"middle\" font-size=\"13\">false alarms per hour "
       "(log)</text>\n";
  f << "<text x=\"16\" y=\"" << (height / 2)
    << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
    << (height / 2) << ")\">false rejection rate</text>\n";

  int ci = 0, legend_y = mt + 14;
  char buf[256];
  for (const auto& [name, curve] : curves) {
    const char* color = colors[ci % 8];
    f << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
    for (const DetPoint& p : curve.points) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x_of(p.far_per_hour),
                    y_of(p.frr));
      f << buf;
    }
    f << "\"/>\n";
    // Operating point as a square glyph.
    for (const DetPoint& p : curve.points) {
      if (p.threshold == curve.operating_point) {
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"8\" height=\"8\" "
                      "fill=\"%s\"/>\n",
                      x_of(p.far_per_hour) - 4, y_of(p.frr) - 4, color);
        f << buf;
        break;
      }
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-size=\"12\" "
                  "fill=\"%s\">%s</text>\n",
                  width - mr - 160, legend_y, color, name.c_str());
    f << buf;
    legend_y += 16;
    ++ci;
  }
  f << "</svg>\n";
  if (!f) throw IoError("WriteDetSvg: write failed: " + path);
}

void WriteLabelsJson(const std::vector<LabeledStream>& labels,
                     const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const LabeledStream& s : labels) {
    nlohmann::json j;
    j["stream"] = s.id;
    j["label"] = s.label == StreamLabel::kPositive ? "positive" : "negative";
    j["interval_steps"] = {s.interval_begin, s.interval_end};
    j["duration_seconds"] = s.duration_seconds;
    arr.push_back(std::move(j));
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("WriteLabelsJson: cannot open " + path);
  f << arr.dump(2) << "\n";
  if (!f) throw IoError("WriteLabelsJson: write failed: " + path);
}

std::vector<LabeledStream> ReadLabelsJson(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("ReadLabelsJson: cannot open " + path);
  nlohmann::json arr;
  try {
    f >> arr;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("ReadLabelsJson: invalid JSON in " + path + ": " +
                      e.what());
  }
  std::vector<LabeledStream> out;
  try {
    for (const auto& j : arr) {
      LabeledStream s;
      s.id = j.at("stream").get<std::string>();
      s.label = j.at("label").get<std::string>() == "positive"
                    ? StreamLabel::kPositive
                    : StreamLabel::kNegative;
      s.interval_begin = j.at("interval_steps")[0].get<int>();
      s.interval_end = j.at("interval_steps")[1].get<int>();
      s.duration_seconds = j.at("duration_seconds").get<double>();
      out.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("ReadLabelsJson: malformed labels in " + path + ": " +
                      e.what());
  }
  return out;
}

}  // namespace gainspot
