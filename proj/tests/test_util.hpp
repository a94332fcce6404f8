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

// Shared fixtures and independent reference implementations for tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "heteroim/graph.hpp"
#include "heteroim/metrics.hpp"
#include "heteroim/random.hpp"
#include "heteroim/rrset.hpp"

namespace heteroim::testing {

struct SpreadEdge {
  NodeId source;
  NodeId target;
  double spread;
};

// Graph whose edge (u, v) has S_uv = spread: accept probabilities are 1 and
// invite probabilities carry the value.
inline Graph SpreadGraph(std::size_t n, const std::vector<SpreadEdge>& edges) {
  std::vector<Edge> list;
  for (const auto& e : edges) list.push_back({e.source, e.target, e.spread});
  return Graph(std::vector<double>(n, 1.0), std::move(list));
}

// Random simple digraph with about `m` edges and random P and U.
inline Graph RandomGraph(std::size_t n, std::size_t m, std::uint64_t seed,
                         double max_prob = 1.0) {
  Rng rng(seed);
  std::set<std::pair<NodeId, NodeId>> pairs;
  const std::size_t limit = std::min(m, n * (n - 1));
  while (pairs.size() < limit) {
    const auto u = static_cast<NodeId>(UniformIndex(rng, n));
    const auto v = static_cast<NodeId>(UniformIndex(rng, n));
    if (u != v) pairs.emplace(u, v);
  }
  std::vector<Edge> edges;
  for (const auto& [u, v] : pairs) edges.push_back({u, v, max_prob * Uniform01(rng)});
  std::vector<double> accept(n);
  for (double& a : accept) a = max_prob * Uniform01(rng);
  return Graph(std::move(accept), std::move(edges));
}

// Expected number of nodes reached from `seeds` (excluding seeds), by
// enumerating every live-edge world over all edges.
inline double BruteForceSpread(const Graph& g, const std::vector<NodeId>& seeds) {
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  double total = 0;
  for (std::uint64_t world = 0; world < (std::uint64_t{1} << m); ++world) {
    double prob = 1;
    for (std::size_t i = 0; i < m; ++i) {
      const double s = edges[i].invite_prob * g.accept_prob(edges[i].target);
      prob *= (world >> i & 1) ? s : 1 - s;
    }
    if (prob == 0) continue;
    std::vector<bool> seen(g.node_count(), false);
    for (NodeId s : seeds) seen[s] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < m; ++i) {
        if ((world >> i & 1) && seen[edges[i].source] && !seen[edges[i].target]) {
          seen[edges[i].target] = true;
          grew = true;
        }
      }
    }
    const auto reached = std::count(seen.begin(), seen.end(), true);
    total += prob * static_cast<double>(reached - static_cast<long>(seeds.size()));
  }
  return total;
}

// Asymptotic two-sample Kolmogorov-Smirnov p-value.
inline double KsPValue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  if (lambda < 0.01) return 1.0;  // the series degenerates at zero
  double p = 0;
  for (int k = 1; k <= 100; ++k) {
    p += 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::clamp(p, 0.0, 1.0);
}

// Plain greedy max coverage by rescanning every set. Ties go to the larger
// total incoming spread probability, then the smaller id.
inline std::vector<NodeId> GreedyCoverageOracle(const Graph& g,
                                                const RRSetCollection& c,
                                                std::vector<NodeId> candidates) {
  std::vector<double> strength(g.node_count(), 0.0);
  for (const auto& e : g.edges()) {
    strength[e.target] += e.invite_prob * g.accept_prob(e.target);
  }
  std::vector<std::set<NodeId>> sets;
  for (std::size_t s = 0; s < c.set_count(); ++s) {
    sets.emplace_back(c.members(s).begin(), c.members(s).end());
  }
  std::vector<bool> alive(sets.size(), true);
  std::vector<NodeId> order;
  while (!candidates.empty()) {
    std::size_t best = 0;
    std::size_t best_count = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      std::size_t count = 0;
      for (std::size_t s = 0; s < sets.size(); ++s) {
        count += alive[s] && sets[s].count(candidates[i]);
      }
      const NodeId v = candidates[i];
      const NodeId b = candidates[best];
      if (i == 0 || count > best_count ||
          (count == best_count &&
           (strength[v] > strength[b] || (strength[v] == strength[b] && v < b)))) {
        best = i;
        best_count = count;
      }
    }
    const NodeId pick = candidates[best];
    order.push_back(pick);
    for (std::size_t s = 0; s < sets.size(); ++s) {
      if (sets[s].count(pick)) alive[s] = false;
    }
    candidates.erase(candidates.begin() + static_cast<long>(best));
  }
  return order;
}

// Inviter a=0 with candidates b=1, c=2, d=3. b covers the most RR sets,
// but a shares more sets with d than with b.
struct SharedSetInstance {
  Graph graph;
  RRSetCollection sets;
};

inline SharedSetInstance MakeSharedSetInstance() {
  Graph g = SpreadGraph(11, {{0, 1, 0.5}, {0, 2, 0.5}, {0, 3, 0.5}});
  // {b,e} {b,f} {b,c,g} {b,c,h} {b,a} {d,a,i} {d,a,j} {d,k}
  RRSetCollection c(11,
                    {{1, 4}, {1, 5}, {1, 2, 6}, {1, 2, 7}, {1, 0}, {3, 0, 8},
                     {3, 0, 9}, {3, 10}},
                    {4, 5, 6, 7, 1, 8, 9, 10});
  return {std::move(g), std::move(c)};
}

// X=0 and Y=1 invite three friends each; X's third friend (4) goes on to
// bring in 5, 6, 7 and Y's third friend (10) brings in 11, 12. The other
// friends either decline or spread no further.
inline EventLog TwoInviterLog() {
  auto row = [](NodeId u, NodeId v, bool accepted) {
    return Invitation{u, v, true, accepted};
  };
  return EventLog(13, {row(0, 2, true), row(0, 3, false), row(0, 4, true),
                       row(1, 8, true), row(1, 9, false), row(1, 10, true),
                       row(4, 5, true), row(4, 6, true), row(4, 7, true),
                       row(10, 11, true), row(10, 12, true)},
                  {0, 1});
}

inline std::string ToString(const auto& writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

}  // namespace heteroim::testing
