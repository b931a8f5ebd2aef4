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

#include "gainspot/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gainspot/errors.hpp"

namespace gainspot {

namespace {

std::string Trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Strip a trailing comment, respecting quoted strings.
std::string StripComment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

bool LooksLikeInt(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

TomlTable::Value ParseScalar(const std::string& raw, int line_no) {
  std::string s = Trim(raw);
  if (s.empty()) {
    throw ConfigError("toml: empty value at line " + std::to_string(line_no));
  }
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') {
      throw ConfigError("toml: unterminated string at line " +
                        std::to_string(line_no));
    }
    return s.substr(1, s.size() - 2);
  }
  if (s == "true") return true;
  if (s == "false") return false;
  if (LooksLikeInt(s)) {
    return static_cast<int64_t>(std::strtoll(s.c_str(), nullptr, 10));
  }
  char* end = nullptr;
  double d = std::strtod(s.c_str(), &end);
  if (end && *end == '\0') return d;
  throw ConfigError("toml: cannot parse value '" + s + "' at line " +
                    std::to_string(line_no));
}

TomlTable::Value ParseArray(const std::string& raw, int line_no) {
  std::string s = Trim(raw);
  s = s.substr(1, s.size() - 2);  // strip [ ]
  std::vector<std::string> items;
  std::string cur;
  bool in_str = false;
  for (char c : s) {
    if (c == '"') in_str = !in_str;
    if (c == ',' && !in_str) {
      items.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!Trim(cur).empty()) items.push_back(cur);

  std::vector<std::string> strings;
  std::vector<double> numbers;
  bool any_string = false;
  for (const std::string& item : items) {
    TomlTable::Value v = ParseScalar(item, line_no);
    if (auto* str = std::get_if<std::string>(&v)) {
      strings.push_back(*str);
      any_string = true;
    } else if (auto* i = std::get_if<int64_t>(&v)) {
      numbers.push_back(static_cast<double>(*i));
    } else if (auto* d = std::get_if<double>(&v)) {
      numbers.push_back(*d);
    } else {
      throw ConfigError("toml: unsupported array element at line " +
                        std::to_string(line_no));
    }
  }
  if (any_string) {
    if (!numbers.empty()) {
      throw ConfigError("toml: mixed array types at line " +
                        std::to_string(line_no));
    }
    return strings;
  }
  return numbers;
}

}  // namespace

TomlTable TomlTable::ParseString(const std::string& text) {
  TomlTable table;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = Trim(StripComment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw ConfigError("toml: bad section header at line " +
                          std::to_string(line_no));
      }
      section = Trim(s.substr(1, s.size() - 2));
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("toml: expected key = value at line " +
                        std::to_string(line_no));
    }
    std::string key = Trim(s.substr(0, eq));
    std::string raw = Trim(s.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("toml: empty key at line " + std::to_string(line_no));
    }
    std::string full = section.empty() ? key : section + "." + key;
    if (!raw.empty() && raw.front() == '[') {
      if (raw.back() != ']') {
        throw ConfigError("toml: arrays must be single-line (line " +
                          std::to_string(line_no) + ")");
      }
      table.values_[full] = ParseArray(raw, line_no);
    } else {
      table.values_[full] = ParseScalar(raw, line_no);
    }
  }
  return table;
}

TomlTable TomlTable::ParseFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("toml: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseString(ss.str());
}

std::string TomlTable::GetString(const std::string& key,
                                 const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw ConfigError("toml: key '" + key + "' is not a string");
}

int64_t TomlTable::GetInt(const std::string& key, int64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* i = std::get_if<int64_t>(&it->second)) return *i;
  throw ConfigError("toml: key '" + key + "' is not an integer");
}

double TomlTable::GetDouble(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* d = std::get_if<double>(&it->second)) return *d;
  if (auto* i = std::get_if<int64_t>(&it->second)) {
    return static_cast<double>(*i);
  }
  throw ConfigError("toml: key '" + key + "' is not a number");
}

bool TomlTable::GetBool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* b = std::get_if<bool>(&it->second)) return *b;
  throw ConfigError("toml: key '" + key + "' is not a boolean");
}

std::vector<double> TomlTable::GetNumberArray(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return {};
  if (auto* a = std::get_if<std::vector<double>>(&it->second)) return *a;
  throw ConfigError("toml: key '" + key + "' is not a number array");
}

std::vector<std::string> TomlTable::GetStringArray(
    const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return {};
  if (auto* a = std::get_if<std::vector<std::string>>(&it->second)) return *a;
  throw ConfigError("toml: key '" + key + "' is not a string array");
}

std::string TomlTable::RequireString(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("toml: missing required key '" + key + "'");
  }
  if (auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw ConfigError("toml: key '" + key + "' is not a string");
}

}  // namespace gainspot
