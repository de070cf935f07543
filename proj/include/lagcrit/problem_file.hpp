// Copyright 2026 The lagcrit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Line-oriented problem files:
//
//   # comment
//   vars: x1 x2 x3
//   objective: x1*x2 + 2*x1*x3 + 2*x2*x3
//   constraint: x1*x2*x3 - 1
//   box: 0.1 5        (optional; one line per variable, in order)
//
// Exactly one vars and one objective line, at least one constraint line,
// and either no box lines or exactly one per variable.

#ifndef LAGCRIT_PROBLEM_FILE_HPP_
#define LAGCRIT_PROBLEM_FILE_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lagcrit/kkt.hpp"

namespace lagcrit {

class ProblemFileError : public std::runtime_error {
 public:
  /// `line` is 1-based; 0 when the error is not tied to a line (for example
  /// a missing field).
  ProblemFileError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

Problem parse_problem_file(std::string_view text);

/// Canonical text; parse_problem_file(format_problem_file(p)) rebuilds
/// structurally identical expressions and the same box.
std::string format_problem_file(const Problem& p);

}  // namespace lagcrit

#endif  // LAGCRIT_PROBLEM_FILE_HPP_
