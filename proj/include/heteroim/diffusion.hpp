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
#include <span>
#include <utility>
#include <vector>

#include "heteroim/graph.hpp"
#include "heteroim/random.hpp"

namespace heteroim {

struct CascadeResult {
  // Seeds first (ascending), then activated nodes in activation order.
  std::vector<NodeId> reached;
  // One (parent, child) edge per non-seed reached node.
  std::vector<std::pair<NodeId, NodeId>> activation_edges;

  bool operator==(const CascadeResult&) const = default;
};

// Independent cascade with per-edge success probability S_uv = P_uv * U_v.
// Each newly activated node tries each out-edge once; each hop's frontier is
// processed in ascending node id. Throws UnknownNode for an invalid seed.
CascadeResult SimulateCascade(const Graph& g, std::span<const NodeId> seeds,
                              Rng& rng);

// Same process with the invite and accept stages drawn separately
// (Bernoulli(P_uv), then Bernoulli(U_v)). Activation events have the same
// distribution as SimulateCascade.
CascadeResult SimulateTwoStageCascade(const Graph& g,
                                      std::span<const NodeId> seeds, Rng& rng);

inline constexpr std::size_t kDefaultEnumerationLimit = 20;

// Expected number of nodes reached from `seeds`, seeds excluded, by summing
// over all live-edge worlds. Only edges reachable from the seeds with
// 0 < S < 1 are enumerated; more than `max_edges` of them throws
// GraphTooLargeForEnumeration.
double ExactSpread(const Graph& g, std::span<const NodeId> seeds,
                   std::size_t max_edges = kDefaultEnumerationLimit);

// I(u): expected number of other nodes influenced by u.
double ExactInfluence(const Graph& g, NodeId u,
                      std::size_t max_edges = kDefaultEnumerationLimit);

struct McEstimate {
  double estimate = 0;
  double std_error = 0;
};

// Mean of |reached| - 1 over `runs` cascades from {u}; run r draws from
// DeriveStream(seed, r), so the result is independent of `jobs`.
McEstimate McInfluence(const Graph& g, NodeId u, std::size_t runs,
                       std::uint64_t seed, unsigned jobs = 1);

}  // namespace heteroim
