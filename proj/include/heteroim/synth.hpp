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

#include "heteroim/graph.hpp"
#include "heteroim/metrics.hpp"

namespace heteroim {

enum class DegreeModel { kUniform, kPowerLaw };

struct BetaParams {
  double alpha;
  double beta;
};

// Defaults give mean P = 0.25 and mean U = 0.2, so mean S = 0.05.
struct SynthConfig {
  std::size_t n = 1000;
  std::size_t target_m = 10'000;
  DegreeModel degree_model = DegreeModel::kUniform;
  double exponent = 2.5;  // power-law degree exponent, > 1
  BetaParams invite{1.0, 3.0};
  BetaParams accept{1.0, 4.0};
  std::size_t invite_cap = 4;  // max invitations sent per active user
  double inviter_fraction = 0.1;  // share of nodes active at hop 0
  std::uint64_t seed = 1;
};

// Throws InfeasibleConfig (target_m > n(n-1)) or InvalidParameters.
void ValidateConfig(const SynthConfig& cfg);

// Out-degree weight of each node under the degree model (uniform: all 1;
// power law: rank^(-1/(exponent-1)) assigned to nodes in a seeded random
// order). Sources are drawn proportionally to these weights.
std::vector<double> SourceWeights(const SynthConfig& cfg);

// Directed simple graph: target_m sources drawn by SourceWeights, each paired
// with a uniform target (redrawn on self-loop or duplicate); P and U from the
// Beta models. Fully determined by cfg.seed.
Graph GenerateGraph(const SynthConfig& cfg);

// round(fraction * N) distinct nodes (at least one when fraction > 0).
InviterSet SampleInviters(const Graph& g, double fraction, std::uint64_t seed);

struct SynthEvent {
  InviterSet inviters;
  EventLog log;
};

// One invitation event. Inviters are active at hop 0; each active node, in
// ascending id per hop, draws Bernoulli(P_uv) per out-neighbor, keeps at most
// invite_cap of the drawn invitees (highest P first), and each invitee
// accepts with Bernoulli(U_v). Accepted invitees not yet active join the
// next hop. Only invited rows are logged.
SynthEvent GenerateEventLog(const Graph& g, const SynthConfig& cfg,
                            std::uint64_t seed);

}  // namespace heteroim
