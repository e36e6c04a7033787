// Copyright 2026 The annobias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANNOBIAS_ERROR_HPP_
#define ANNOBIAS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace annobias {

// Every failure raised by the library carries one of these codes. The CLI
// maps them onto exit codes (data errors vs. internal invariant violations).
enum class Errc {
  kInvalidArgument,
  kEmptyAnnotations,
  kNumericMode,
  kUnknownLabel,
  kDuplicateAnnotator,
  kEmptyInput,
  kRowSumMismatch,
  kNoPairableValues,
  kCoverageGap,
  kPairingNotBijective,
  kUnknownGroup,
  kDimensionMissing,
  kNotIterative,
  kEmptyIteration,
  kDimensionMismatch,
  kEmptyTraining,
  kMissingBiasComponent,
  kParseError,
  kDuplicateId,
  kUnknownSplit,
  kScoreOutOfRange,
  kEmptyDialogue,
  kIo,
  kInvariantViolation,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace annobias

#endif  // ANNOBIAS_ERROR_HPP_
