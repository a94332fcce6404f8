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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "heteroim/error.hpp"
#include "heteroim/synth.hpp"
#include "test_util.hpp"

using namespace heteroim;

namespace {

std::vector<double> OutDegrees(const Graph& g) {
  std::vector<double> d;
  for (NodeId u = 0; u < g.node_count(); ++u) d.push_back(static_cast<double>(g.out_degree(u)));
  return d;
}

// Out-degree sample drawn straight from the model: m independent source
// draws with weight rank^(-1/(exponent-1)) (all equal for the uniform model).
std::vector<double> ModelDegrees(std::size_t n, std::size_t m, bool power_law,
                                 double exponent, unsigned seed) {
  std::vector<double> weights(n, 1.0);
  if (power_law) {
    for (std::size_t r = 0; r < n; ++r) {
      weights[r] = std::pow(static_cast<double>(r + 1), -1.0 / (exponent - 1.0));
    }
  }
  std::mt19937_64 gen(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::vector<double> counts(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) counts[pick(gen)] += 1;
  return counts;
}

}  // namespace

TEST_CASE("single node graph has no edges") {
  SynthConfig cfg;
  cfg.n = 1;
  cfg.target_m = 0;
  const Graph g = GenerateGraph(cfg);
  CHECK(g.node_count() == 1);
  CHECK(g.edge_count() == 0);
  cfg.target_m = 1;
  CHECK_THROWS_AS(GenerateGraph(cfg), Error);
}

TEST_CASE("generation is byte-identical for a fixed seed") {
  SynthConfig cfg;
  cfg.n = 300;
  cfg.target_m = 2000;
  cfg.degree_model = DegreeModel::kPowerLaw;
  cfg.seed = 42;
  auto dump = [](const SynthConfig& c) {
    const Graph g = GenerateGraph(c);
    const IdMap ids = IdMap::Identity(g.node_count());
    const auto event = GenerateEventLog(g, c, 7);
    return testing::ToString([&](std::ostream& o) {
      WriteNodes(o, g, ids);
      WriteEdges(o, g, ids);
      WriteInviters(o, event.inviters, ids);
      WriteEventLog(o, event.log, ids);
    });
  };
  CHECK(dump(cfg) == dump(cfg));
  SynthConfig other = cfg;
  other.seed = 43;
  CHECK(dump(cfg) != dump(other));
}

TEST_CASE("edge count and out-degree distribution follow the model") {
  for (auto model : {DegreeModel::kUniform, DegreeModel::kPowerLaw}) {
    SynthConfig cfg;
    cfg.n = 1000;
    cfg.target_m = 10'000;
    cfg.degree_model = model;
    cfg.seed = 2024;
    const Graph g = GenerateGraph(cfg);
    CHECK(std::abs(static_cast<double>(g.edge_count()) - 1e4) <= 100);
    const auto observed = OutDegrees(g);
    const auto expected =
        ModelDegrees(1000, g.edge_count(), model == DegreeModel::kPowerLaw, 2.5, 99);
    const double p = testing::KsPValue(observed, expected);
    INFO("KS p-value " << p);
    CHECK(p > 0.01);

    // Targets are uniform, so in-degrees are near-Poisson with mean m/n.
    double mean = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) mean += static_cast<double>(g.in_degree(v));
    CHECK(mean / 1000.0 == doctest::Approx(10.0).epsilon(0.02));
  }
}

TEST_CASE("dense configurations are exact") {
  SynthConfig cfg;
  cfg.n = 20;
  cfg.target_m = 20 * 19;
  const Graph full = GenerateGraph(cfg);
  CHECK(full.edge_count() == 380);
  cfg.target_m = 300;
  cfg.degree_model = DegreeModel::kPowerLaw;
  CHECK(GenerateGraph(cfg).edge_count() == 300);
}

TEST_CASE("probability models have the configured means") {
  SynthConfig cfg;
  cfg.seed = 5;
  const Graph g = GenerateGraph(cfg);
  double p = 0;
  for (const auto& e : g.edges()) p += e.invite_prob;
  p /= static_cast<double>(g.edge_count());
  // Beta(1,3): mean 0.25, sd 0.194.
  CHECK(std::abs(p - 0.25) < 4 * 0.194 / std::sqrt(static_cast<double>(g.edge_count())));
  double u = 0;
  for (double a : g.accept_probs()) u += a;
  u /= static_cast<double>(g.node_count());
  // Beta(1,4): mean 0.2, sd 0.163.
  CHECK(std::abs(u - 0.2) < 4 * 0.163 / std::sqrt(1000.0));
}

TEST_CASE("invalid configurations are rejected") {
  auto code = [](SynthConfig cfg) {
    try {
      ValidateConfig(cfg);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  SynthConfig cfg;
  cfg.n = 10;
  cfg.target_m = 91;
  CHECK(code(cfg) == ErrorCode::kInfeasibleConfig);
  cfg.target_m = 20;
  cfg.invite = {0.0, 3.0};
  CHECK(code(cfg) == ErrorCode::kInvalidParameters);
  cfg.invite = {1.0, 3.0};
  cfg.invite_cap = 0;
  CHECK(code(cfg) == ErrorCode::kInvalidParameters);
  cfg.invite_cap = 4;
  cfg.degree_model = DegreeModel::kPowerLaw;
  cfg.exponent = 1.0;
  CHECK(code(cfg) == ErrorCode::kInvalidParameters);
  cfg.exponent = 2.5;
  cfg.inviter_fraction = 1.5;
  CHECK(code(cfg) == ErrorCode::kInvalidParameters);
  cfg.inviter_fraction = 0.5;
  CHECK(code(cfg) == ErrorCode::kIo);
}

TEST_CASE("degenerate event probabilities") {
  SynthConfig cfg;
  cfg.inviter_fraction = 1.0;
  const Graph silent(std::vector<double>(4, 1.0),
                     std::vector<Edge>{{0, 1, 0.0}, {1, 2, 0.0}, {2, 3, 0.0}});
  CHECK(GenerateEventLog(silent, cfg, 3).log.empty());

  // Certain chain: whichever node starts, the log walks to the end.
  cfg.inviter_fraction = 0.25;
  const Graph chain(std::vector<double>(4, 1.0),
                    std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto event = GenerateEventLog(chain, cfg, seed);
    REQUIRE(event.inviters.size() == 1);
    const NodeId s = event.inviters.members[0];
    std::vector<Invitation> expected;
    for (NodeId v = s; v + 1 < 4; ++v) expected.push_back({v, v + 1, true, true});
    CHECK(event.log.invitations() == expected);
  }
}

TEST_CASE("per-edge success frequency matches the spread probability") {
  SynthConfig cfg;
  cfg.n = 200;
  cfg.target_m = 1000;
  cfg.seed = 77;
  const Graph g = GenerateGraph(cfg);
  std::size_t max_degree = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) max_degree = std::max(max_degree, g.out_degree(u));
  cfg.invite_cap = max_degree;
  cfg.inviter_fraction = 1.0;
  const int runs = 200;
  std::map<std::pair<NodeId, NodeId>, int> successes;
  for (int r = 0; r < runs; ++r) {
    const auto event = GenerateEventLog(g, cfg, 5000 + r);
    CHECK(event.inviters.size() == 200);
    for (const auto& row : event.log.invitations()) {
      if (row.accepted) ++successes[{row.inviter, row.invitee}];
    }
  }
  std::size_t outside = 0;
  for (const auto& e : g.edges()) {
    const double s = e.invite_prob * g.accept_prob(e.target);
    const double observed = successes[{e.source, e.target}];
    const double sd = std::sqrt(runs * s * (1 - s));
    if (std::abs(observed - runs * s) > 3 * sd + 1e-9) ++outside;
  }
  INFO(outside << " of " << g.edge_count() << " edges outside 3 sigma");
  CHECK(static_cast<double>(outside) <= 0.01 * static_cast<double>(g.edge_count()));
}

TEST_CASE("event invariants hold on power-law graphs") {
  SynthConfig cfg;
  cfg.n = 500;
  cfg.target_m = 5000;
  cfg.degree_model = DegreeModel::kPowerLaw;
  cfg.invite = {2.0, 2.0};
  cfg.accept = {2.0, 1.0};
  cfg.invite_cap = 3;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    cfg.seed = seed;
    const Graph g = GenerateGraph(cfg);
    const auto event = GenerateEventLog(g, cfg, seed * 31);
    CHECK(event.inviters.size() == 50);
    std::set<NodeId> active(event.inviters.members.begin(), event.inviters.members.end());
    std::map<NodeId, int> sent;
    std::set<NodeId> finished;  // users whose hop already ran
    NodeId current = event.log.invitations().empty() ? 0 : event.log.invitations()[0].inviter;
    for (const auto& row : event.log.invitations()) {
      CHECK((!row.accepted || row.invited));
      CHECK(g.has_edge(row.inviter, row.invitee));
      CHECK(active.count(row.inviter) == 1);
      if (row.inviter != current) {
        finished.insert(current);
        current = row.inviter;
      }
      CHECK(finished.count(row.inviter) == 0);  // one invitation round per user
      CHECK(++sent[row.inviter] <= 3);
      if (row.accepted) active.insert(row.invitee);
    }
    // Trajectory edges form a forest with no edge into an initial inviter.
    std::set<NodeId> children;
    for (const auto& [u, v] : event.log.trajectories()) {
      CHECK(children.insert(v).second);
      CHECK_FALSE(std::binary_search(event.inviters.members.begin(),
                                     event.inviters.members.end(), v));
    }
    CHECK(children.size() + event.inviters.size() <= g.node_count());
    CHECK(active.size() == children.size() + event.inviters.size());
  }
}

TEST_CASE("inviter sampling") {
  const Graph g(std::vector<double>(10, 1.0), std::vector<Edge>{});
  CHECK(SampleInviters(g, 0.0, 1).empty());
  CHECK(SampleInviters(g, 0.01, 1).size() == 1);
  CHECK(SampleInviters(g, 0.34, 1).size() == 3);
  CHECK(SampleInviters(g, 1.0, 1).size() == 10);
  CHECK(SampleInviters(g, 0.5, 9).members == SampleInviters(g, 0.5, 9).members);
}
