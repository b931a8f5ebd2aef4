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

#ifndef GAINSPOT_ERRORS_HPP_
#define GAINSPOT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gainspot {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or structurally invalid file content (WAV, model JSON, CSV).
struct FormatError : Error {
  using Error::Error;
};

// File exists but its parameters are outside what the pipeline accepts
// (wrong rate / bit depth / channel count / codec).
struct UnsupportedFormatError : FormatError {
  using FormatError::FormatError;
};

struct IoError : Error {
  using Error::Error;
};

// Tensor / matrix dimensions do not compose.
struct ShapeError : Error {
  using Error::Error;
};

// Input has fewer samples/frames than an operation requires.
struct TooShortError : Error {
  using Error::Error;
};

// A weight matrix fails the per-band zero-sum requirement.
struct ConstraintError : Error {
  using Error::Error;
};

struct InvalidArgumentError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// A layer kind the trainer cannot differentiate sits in a trainable
// position.
struct UnsupportedLayerError : Error {
  using Error::Error;
};

// No operating point on the curve meets the requested false-alarm target.
struct UnattainableError : Error {
  using Error::Error;
};

// Correlation of a constant sequence.
struct DegenerateVarianceError : Error {
  using Error::Error;
};

// A detection references a stream with no label record.
struct MissingLabelError : Error {
  using Error::Error;
};

}  // namespace gainspot

#endif  // GAINSPOT_ERRORS_HPP_
