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

#ifndef GAINSPOT_TOML_HPP_
#define GAINSPOT_TOML_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace gainspot {

// Minimal TOML subset sufficient for run configs: [section] headers
// (dotted allowed), key = value with strings, integers, floats, booleans
// and flat arrays, and # comments. Keys are flattened to
// "section.key".
class TomlTable {
 public:
  using Value =
      std::variant<std::string, int64_t, double, bool,
                   std::vector<std::string>, std::vector<double>>;

  static TomlTable ParseFile(const std::string& path);
  static TomlTable ParseString(const std::string& text);

  bool Has(const std::string& key) const { return values_.count(key) > 0; }

  std::string GetString(const std::string& key,
                        const std::string& fallback) const;
  int64_t GetInt(const std::string& key, int64_t fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  bool GetBool(const std::string& key, bool fallback) const;
  std::vector<double> GetNumberArray(const std::string& key) const;
  std::vector<std::string> GetStringArray(const std::string& key) const;

  // Required variants; throw ConfigError when missing.
  std::string RequireString(const std::string& key) const;

  void Set(const std::string& key, Value v) { values_[key] = std::move(v); }

 private:
  std::map<std::string, Value> values_;
};

}  // namespace gainspot

#endif  // GAINSPOT_TOML_HPP_
