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

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace heteroim::tsv {

// Fields of one tab-separated line (trailing '\r' stripped).
std::vector<std::string_view> Split(std::string_view line);

// Calls fn(fields, line_number) for every non-empty line.
void ForEachRow(std::istream& in, std::string_view what,
                const std::function<void(const std::vector<std::string_view>&,
                                         std::size_t)>& fn);

// Throw MalformedRow naming `what` and `line` on failure.
std::uint64_t ParseUInt(std::string_view field, std::string_view what,
                        std::size_t line);
double ParseDouble(std::string_view field, std::string_view what,
                   std::size_t line);
void ExpectColumns(const std::vector<std::string_view>& fields,
                   std::size_t expected, std::string_view what,
                   std::size_t line);

// Throw Io on failure.
std::ifstream OpenInput(const std::filesystem::path& path,
                        std::ios::openmode mode = std::ios::in);
std::ofstream OpenOutput(const std::filesystem::path& path,
                         std::ios::openmode mode = std::ios::out);

// Shortest round-trip decimal representation.
std::string FormatDouble(double value);

}  // namespace heteroim::tsv
