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

#ifndef GAINSPOT_VERIFY_HPP_
#define GAINSPOT_VERIFY_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace gainspot {

// Knobs for the self-check suite. The defaults match the reference
// toy-scale run; smaller sizes keep smoke runs fast (the checks still
// execute, but the end-to-end rate targets may not be reachable).
struct VerifyOptions {
  uint64_t seed = 42;
  std::string work_dir = "verify_work";
  int train_per_class = 200;  // end-to-end training streams per class
  int test_per_class = 100;   // end-to-end test streams per class
  int epochs = 30;            // end-to-end training epochs
  int constraint_epochs = 50;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  nlohmann::ordered_json details;
};

struct VerifyReport {
  uint64_t seed = 0;
  std::vector<CriterionResult> criteria;

  bool AllPassed() const;
  // Deterministic: no paths, timestamps or timings, so two runs from a
  // fresh state serialize to identical bytes.
  std::string ToJson() const;
};

// Run the full self-check suite. Progress lines go to `log` when given;
// the returned report is a pure function of the options.
VerifyReport RunAcceptance(const VerifyOptions& opts,
                           std::ostream* log = nullptr);

}  // namespace gainspot

#endif  // GAINSPOT_VERIFY_HPP_
