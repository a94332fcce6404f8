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

#include "heteroim/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "heteroim/error.hpp"
#include "heteroim/parallel.hpp"

namespace heteroim {
namespace {

class CascadeWorkspace {
 public:
  explicit CascadeWorkspace(std::size_t n) : mark_(n, 0) {}

  // Returns the number of reached nodes; fills `result` when non-null.
  template <typename TryEdge>
  std::size_t Run(const Graph& g, std::span<const NodeId> seeds,
                  TryEdge&& try_edge, CascadeResult* result) {
    ++epoch_;
    if (epoch_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      epoch_ = 1;
    }
    frontier_.clear();
    for (NodeId s : seeds) {
      if (!g.contains(s)) {
        throw Error(ErrorCode::kUnknownNode,
                    fmt::format("seed {} is not a node", s));
      }
      if (mark_[s] != epoch_) {
        mark_[s] = epoch_;
        frontier_.push_back(s);
      }
    }
    std::sort(frontier_.begin(), frontier_.end());
    if (result) result->reached = frontier_;
    std::size_t reached = frontier_.size();
    while (!frontier_.empty()) {
      next_.clear();
      for (NodeId u : frontier_) {
        const auto targets = g.out_neighbors(u);
        for (std::size_t i = 0; i < targets.size(); ++i) {
          const NodeId v = targets[i];
          if (mark_[v] == epoch_) continue;
          if (!try_edge(u, i, v)) continue;
          mark_[v] = epoch_;
          next_.push_back(v);
          ++reached;
          if (result) {
            result->reached.push_back(v);
            result->activation_edges.emplace_back(u, v);
          }
        }
      }
      std::sort(next_.begin(), next_.end());
      frontier_.swap(next_);
    }
    return reached;
  }

 private:
  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> next_;
};

}  // namespace

CascadeResult SimulateCascade(const Graph& g, std::span<const NodeId> seeds,
                              Rng& rng) {
  CascadeWorkspace ws(g.node_count());
  CascadeResult result;
  ws.Run(
      g, seeds,
      [&](NodeId u, std::size_t i, NodeId) {
        return Bernoulli(rng, g.out_spread_probs(u)[i]);
      },
      &result);
  return result;
}

CascadeResult SimulateTwoStageCascade(const Graph& g,
                                      std::span<const NodeId> seeds, Rng& rng) {
  CascadeWorkspace ws(g.node_count());
  CascadeResult result;
  ws.Run(
      g, seeds,
      [&](NodeId u, std::size_t i, NodeId v) {
        const bool invited = Bernoulli(rng, g.out_invite_probs(u)[i]);
        const bool accepted = Bernoulli(rng, g.accept_prob(v));
        return invited && accepted;
      },
      &result);
  return result;
}

double ExactSpread(const Graph& g, std::span<const NodeId> seeds,
                   std::size_t max_edges) {
  const std::size_t n = g.node_count();
  for (NodeId s : seeds) {
    if (!g.contains(s)) {
      throw Error(ErrorCode::kUnknownNode, fmt::format("seed {} is not a node", s));
    }
  }
  // Forward closure of the seeds over edges with S > 0; only its out-edges
  // can influence the count.
  std::vector<bool> closure(n, false);
  std::vector<NodeId> stack(seeds.begin(), seeds.end());
  for (NodeId s : seeds) closure[s] = true;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    const auto targets = g.out_neighbors(u);
    const auto spread = g.out_spread_probs(u);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (spread[i] > 0 && !closure[targets[i]]) {
        closure[targets[i]] = true;
        stack.push_back(targets[i]);
      }
    }
  }

  // Per out-edge slot: -1 dead, -2 always live, otherwise a bit index.
  std::vector<std::vector<int>> state(n);
  std::vector<double> uncertain_prob;
  for (NodeId u = 0; u < n; ++u) {
    const auto spread = g.out_spread_probs(u);
    state[u].assign(spread.size(), -1);
    if (!closure[u]) continue;
    for (std::size_t i = 0; i < spread.size(); ++i) {
      if (spread[i] >= 1.0) {
        state[u][i] = -2;
      } else if (spread[i] > 0.0) {
        state[u][i] = static_cast<int>(uncertain_prob.size());
        uncertain_prob.push_back(spread[i]);
      }
    }
  }
  const std::size_t m = uncertain_prob.size();
  if (m > max_edges) {
    throw Error(ErrorCode::kGraphTooLargeForEnumeration,
                fmt::format("{} uncertain edges exceed enumeration limit {}", m,
                            max_edges));
  }

  std::vector<bool> seed_mark(n, false);
  std::size_t seed_count = 0;
  for (NodeId s : seeds) {
    if (!seed_mark[s]) {
      seed_mark[s] = true;
      ++seed_count;
    }
  }

  double expected = 0;
  std::vector<std::uint8_t> visited(n);
  std::vector<NodeId> queue;
  const std::uint64_t worlds = std::uint64_t{1} << m;
  for (std::uint64_t world = 0; world < worlds; ++world) {
    double prob = 1.0;
    for (std::size_t b = 0; b < m; ++b) {
      prob *= ((world >> b) & 1U) ? uncertain_prob[b] : 1.0 - uncertain_prob[b];
    }
    std::fill(visited.begin(), visited.end(), 0);
    queue.clear();
    for (NodeId s = 0; s < n; ++s) {
      if (seed_mark[s]) {
        visited[s] = 1;
        queue.push_back(s);
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      const auto targets = g.out_neighbors(u);
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const int st = state[u][i];
        const bool live = st == -2 || (st >= 0 && ((world >> st) & 1U));
        if (live && !visited[targets[i]]) {
          visited[targets[i]] = 1;
          queue.push_back(targets[i]);
        }
      }
    }
    expected += prob * static_cast<double>(queue.size() - seed_count);
  }
  return expected;
}

double ExactInfluence(const Graph& g, NodeId u, std::size_t max_edges) {
  const NodeId seeds[] = {u};
  return ExactSpread(g, seeds, max_edges);
}

McEstimate McInfluence(const Graph& g, NodeId u, std::size_t runs,
                       std::uint64_t seed, unsigned jobs) {
  if (runs == 0) {
    throw Error(ErrorCode::kInvalidParameters, "runs must be at least 1");
  }
  if (!g.contains(u)) {
    throw Error(ErrorCode::kUnknownNode, fmt::format("seed {} is not a node", u));
  }
  std::vector<std::uint32_t> reach(runs);
  ParallelChunks(runs, jobs, [&](std::size_t begin, std::size_t end) {
    CascadeWorkspace ws(g.node_count());
    const NodeId seeds[] = {u};
    for (std::size_t r = begin; r < end; ++r) {
      Rng rng = DeriveStream(seed, r);
      reach[r] = static_cast<std::uint32_t>(
          ws.Run(
              g, seeds,
              [&](NodeId from, std::size_t i, NodeId) {
                return Bernoulli(rng, g.out_spread_probs(from)[i]);
              },
              nullptr) -
          1);
    }
  });
  double sum = 0;
  for (auto r : reach) sum += r;
  const double mean = sum / static_cast<double>(runs);
  if (runs == 1) return {mean, 0.0};
  double sq = 0;
  for (auto r : reach) sq += (r - mean) * (r - mean);
  const double variance = sq / static_cast<double>(runs - 1);
  return {mean, std::sqrt(variance / static_cast<double>(runs))};
}

}  // namespace heteroim
