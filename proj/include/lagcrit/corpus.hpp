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

// Built-in worked examples with known critical points, multipliers and
// second-order verdicts.

#ifndef LAGCRIT_CORPUS_HPP_
#define LAGCRIT_CORPUS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "lagcrit/classify.hpp"
#include "lagcrit/kkt.hpp"

namespace lagcrit {

struct ExpectedPoint {
  Vector x;
  Vector lambda;
  Verdict verdict;
  double f_value;
  std::string f_display;   // rounded value as usually quoted
  std::string annotation;  // sharper label or story, empty if none
};

struct CorpusCase {
  std::string id;
  std::string summary;
  Problem problem;
  std::vector<ExpectedPoint> expected;
  std::string global_note;
};

/// The five built-in cases, in a fixed order.
const std::vector<CorpusCase>& corpus_cases();

/// nullptr when no case has that id.
const CorpusCase* find_case(std::string_view id);

struct CaseResult {
  std::string id;
  bool passed = false;
  std::vector<std::string> failures;
  SearchResult search;
  std::vector<ClassificationReport> reports;  // one per found point
};

/// Runs the solve and classify pipeline on a case and checks it against the
/// expected points: same count, x and multipliers within 1e-6 after nearest
/// neighbour pairing, matching verdicts, and stationarity <= 1e-8 plus
/// f-value agreement for the stored expectations themselves.
CaseResult run_case(const CorpusCase& c, const SolverConfig& cfg,
                    double classify_tol = kDefaultClassifyTol);

}  // namespace lagcrit

#endif  // LAGCRIT_CORPUS_HPP_
