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

#include "lagcrit/problem_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <vector>

namespace lagcrit {

ProblemFileError::ProblemFileError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) words.push_back(s.substr(start, i - start));
  }
  return words;
}

std::optional<double> parse_real(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct Pending {
  std::string text;
  std::size_t line;
};

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Problem parse_problem_file(std::string_view text) {
  std::optional<std::vector<std::string>> vars;
  std::size_t vars_line = 0;
  std::optional<Pending> objective;
  std::vector<Pending> constraints;
  std::vector<Interval> box;
  std::size_t first_box_line = 0;

  std::vector<std::string_view> lines;
  for (std::size_t start = 0;;) {
    const std::size_t nl = text.find('\n', start);
    lines.push_back(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }

  for (std::size_t index = 0; index < lines.size(); ++index) {
    const std::size_t line_no = index + 1;
    std::string_view line = lines[index];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ProblemFileError(line_no, "expected '<key>: <value>'");
    const std::string_view key = trim(line.substr(0, colon));
    const std::string_view value = trim(line.substr(colon + 1));

    if (key == "vars") {
      if (vars) throw ProblemFileError(line_no, "duplicate 'vars:' line");
      vars.emplace();
      for (auto w : split_words(value)) {
        if (!is_identifier(w)) throw ProblemFileError(line_no, "invalid variable name '" + std::string(w) + "'");
        if (std::find(vars->begin(), vars->end(), w) != vars->end())
          throw ProblemFileError(line_no, "duplicate variable '" + std::string(w) + "'");
        vars->emplace_back(w);
      }
      if (vars->empty()) throw ProblemFileError(line_no, "'vars:' needs at least one name");
      vars_line = line_no;
    } else if (key == "objective") {
      if (objective) throw ProblemFileError(line_no, "duplicate 'objective:' line");
      objective = Pending{std::string(value), line_no};
    } else if (key == "constraint") {
      constraints.push_back(Pending{std::string(value), line_no});
    } else if (key == "box") {
      const auto words = split_words(value);
      if (words.size() != 2) throw ProblemFileError(line_no, "'box:' needs two numbers");
      const auto lo = parse_real(words[0]);
      const auto hi = parse_real(words[1]);
      if (!lo || !hi) throw ProblemFileError(line_no, "'box:' bounds must be finite numbers");
      if (!(*lo < *hi)) throw ProblemFileError(line_no, "'box:' needs lo < hi");
      if (box.empty()) first_box_line = line_no;
      box.push_back({*lo, *hi});
    } else {
      throw ProblemFileError(line_no, "unknown key '" + std::string(key) + "'");
    }
  }

  if (!vars) throw ProblemFileError(0, "missing 'vars:' line");
  if (!objective) throw ProblemFileError(0, "missing 'objective:' line");
  if (constraints.empty()) throw ProblemFileError(0, "missing 'constraint:' line");
  if (!box.empty() && box.size() != vars->size())
    throw ProblemFileError(first_box_line, "expected " + std::to_string(vars->size()) +
                                               " 'box:' lines, found " + std::to_string(box.size()));
  if (constraints.size() >= vars->size())
    throw ProblemFileError(vars_line, "need fewer constraints than variables");

  Problem p;
  auto parse_at = [&](const Pending& item) {
    try {
      return parse(item.text, *vars);
    } catch (const ParseError& e) {
      throw ProblemFileError(item.line, e.what());
    }
  };
  p.objective = parse_at(*objective);
  for (const auto& c : constraints) p.constraints.push_back(parse_at(c));
  p.variables = std::move(*vars);
  p.box = std::move(box);
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ProblemFileError(0, e.what());
  }
  return p;
}

std::string format_problem_file(const Problem& p) {
  std::ostringstream out;
  out << "vars:";
  for (const auto& v : p.variables) out << ' ' << v;
  out << "\nobjective: " << p.objective.serialize() << '\n';
  for (const auto& c : p.constraints) out << "constraint: " << c.serialize() << '\n';
  for (const auto& iv : p.box) out << "box: " << format_real(iv.lo) << ' ' << format_real(iv.hi) << '\n';
  return out.str();
}

}  // namespace lagcrit
