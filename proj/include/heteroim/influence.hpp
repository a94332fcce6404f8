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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "heteroim/graph.hpp"

namespace heteroim {

// Interaction capability used in deployment.
inline constexpr std::size_t kDefaultCapability = 4;
inline constexpr std::size_t kUnlimitedCapability =
    std::numeric_limits<std::size_t>::max();

struct InfluenceScores {
  std::string method;
  std::vector<double> scores;
};

// I_H(u): sum of S_uv over the w out-neighbors with the largest S_uv
// (ties by ascending node id). Throws InvalidCapacity for w < 1.
double HeteroInf(const Graph& g, NodeId u, std::size_t w = kDefaultCapability);
InfluenceScores HeteroInfScores(const Graph& g,
                                std::size_t w = kDefaultCapability,
                                unsigned jobs = 1);

std::size_t DegreeInfluence(const Graph& g, NodeId u);
InfluenceScores DegreeScores(const Graph& g);

// k-core numbers of the undirected simple projection (direction and
// weights ignored), by bucket-based minimum-degree peeling.
std::vector<std::uint32_t> CoreNumbers(const Graph& g);
InfluenceScores CorenessScores(const Graph& g);

// Monte-Carlo estimate of I(u) for every node; node u uses base seed
// DeriveStream(seed, u)() so scores do not depend on `jobs`.
InfluenceScores McScores(const Graph& g, std::size_t runs, std::uint64_t seed,
                         unsigned jobs = 1);

// Live-edge enumeration of I(u) for every node (small graphs only).
InfluenceScores ExactScores(const Graph& g, std::size_t max_edges = 20);

// `node_id<TAB>score` rows in internal index order.
void WriteScores(std::ostream& out, const InfluenceScores& scores,
                 const IdMap& ids);

}  // namespace heteroim
