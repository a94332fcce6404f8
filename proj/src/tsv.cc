// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "heteroim/tsv.hpp"

#include <charconv>
#include <istream>

#include <fmt/format.h>

#include "heteroim/error.hpp"

namespace heteroim {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kDanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::kNoSuchEdge: return "NoSuchEdge";
    case ErrorCode::kEmptyInviterSet: return "EmptyInviterSet";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kGraphTooLargeForEnumeration:
      return "GraphTooLargeForEnumeration";
    case ErrorCode::kInvalidCapacity: return "InvalidCapacity";
    case ErrorCode::kInvalidParameters: return "InvalidParameters";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kSameNode: return "SameNode";
    case ErrorCode::kUniverseMismatch: return "UniverseMismatch";
    case ErrorCode::kInfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace tsv {

std::vector<std::string_view> Split(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void ForEachRow(std::istream& in, std::string_view what,
                const std::function<void(const std::vector<std::string_view>&,
                                         std::size_t)>& fn) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    fn(Split(line), line_number);
  }
  if (in.bad()) {
    throw Error(ErrorCode::kIo, fmt::format("read failure in {}", what));
  }
}

std::uint64_t ParseUInt(std::string_view field, std::string_view what,
                        std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw Error(ErrorCode::kMalformedRow,
                fmt::format("{} line {}: expected non-negative integer, got '{}'",
                            what, line, field));
  }
  return value;
}

double ParseDouble(std::string_view field, std::string_view what,
                   std::size_t line) {
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw Error(ErrorCode::kMalformedRow,
                fmt::format("{} line {}: expected number, got '{}'", what, line,
                            field));
  }
  return value;
}

void ExpectColumns(const std::vector<std::string_view>& fields,
                   std::size_t expected, std::string_view what,
                   std::size_t line) {
  if (fields.size() != expected) {
    throw Error(ErrorCode::kMalformedRow,
                fmt::format("{} line {}: expected {} columns, got {}", what,
                            line, expected, fields.size()));
  }
}

std::ifstream OpenInput(const std::filesystem::path& path,
                        std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) {
    throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  }
  return in;
}

std::ofstream OpenOutput(const std::filesystem::path& path,
                         std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot write '{}'", path.string()));
  }
  return out;
}

std::string FormatDouble(double value) { return fmt::format("{}", value); }

}  // namespace tsv
}  // namespace heteroim
