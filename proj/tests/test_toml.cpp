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

#include "gainspot/errors.hpp"
#include "gainspot/toml.hpp"

using namespace gainspot;

static const char* kSample = R"(
# run configuration
seed = 42
name = "toy run"   # trailing comment

[corpus]
n_positive = 200
stream_seconds = 3.0
shuffle = true

[sweep]
gains_db = [-12, -6, 0, 6, 12]
variants = ["hdrc", "original"]
)";

TEST_CASE("parses scalars, sections and arrays") {
  TomlTable t = TomlTable::ParseString(kSample);
  CHECK(t.GetInt("seed", 0) == 42);
  CHECK(t.GetString("name", "") == "toy run");
  CHECK(t.GetInt("corpus.n_positive", 0) == 200);
  CHECK(t.GetDouble("corpus.stream_seconds", 0.0) == doctest::Approx(3.0));
  CHECK(t.GetBool("corpus.shuffle", false));
  auto gains = t.GetNumberArray("sweep.gains_db");
  CHECK(gains == std::vector<double>{-12, -6, 0, 6, 12});
  auto variants = t.GetStringArray("sweep.variants");
  CHECK(variants == std::vector<std::string>{"hdrc", "original"});
}

TEST_CASE("missing keys fall back, required keys throw") {
  TomlTable t = TomlTable::ParseString("a = 1\n");
  CHECK(t.GetInt("missing", 7) == 7);
  CHECK(t.GetString("missing", "x") == "x");
  CHECK_FALSE(t.Has("missing"));
  CHECK_THROWS_AS(t.RequireString("missing"), ConfigError);
}

TEST_CASE("integers satisfy double lookups but not vice versa") {
  TomlTable t = TomlTable::ParseString("n = 3\nx = 2.5\n");
  CHECK(t.GetDouble("n", 0.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(t.GetInt("x", 0), ConfigError);
  CHECK_THROWS_AS(t.GetBool("n", false), ConfigError);
}

TEST_CASE("malformed input is rejected with line context") {
  CHECK_THROWS_AS(TomlTable::ParseString("just words\n"), ConfigError);
  CHECK_THROWS_AS(TomlTable::ParseString("[unclosed\n"), ConfigError);
  CHECK_THROWS_AS(TomlTable::ParseString("k = \"open\n"), ConfigError);
  CHECK_THROWS_AS(TomlTable::ParseString("k = [1, \"a\"]\n"), ConfigError);
  CHECK_THROWS_AS(TomlTable::ParseString("k = what\n"), ConfigError);
  CHECK_THROWS_AS(TomlTable::ParseString(" = 3\n"), ConfigError);
}

TEST_CASE("hash inside a quoted string is not a comment") {
  TomlTable t = TomlTable::ParseString("k = \"a # b\"\n");
  CHECK(t.GetString("k", "") == "a # b");
}

TEST_CASE("missing file raises an io error") {
  CHECK_THROWS_AS(TomlTable::ParseFile("/nonexistent/run.toml"), IoError);
}
