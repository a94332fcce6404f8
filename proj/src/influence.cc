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

#include "heteroim/influence.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "heteroim/diffusion.hpp"
#include "heteroim/error.hpp"
#include "heteroim/parallel.hpp"
#include "heteroim/random.hpp"
#include "heteroim/tsv.hpp"

namespace heteroim {

double HeteroInf(const Graph& g, NodeId u, std::size_t w) {
  if (w < 1) {
    throw Error(ErrorCode::kInvalidCapacity,
                "interaction capability must be at least 1");
  }
  if (!g.contains(u)) {
    throw Error(ErrorCode::kUnknownNode, fmt::format("node {} is not a node", u));
  }
  const auto spread = g.out_spread_probs(u);
  // Neighbor lists are id-sorted, so a stable sort on S alone yields the
  // ascending-id tie-break.
  std::vector<double> top(spread.begin(), spread.end());
  const std::size_t take = std::min(w, top.size());
  std::stable_sort(top.begin(), top.end(), std::greater<>());
  double sum = 0;
  for (std::size_t i = 0; i < take; ++i) sum += top[i];
  return sum;
}

InfluenceScores HeteroInfScores(const Graph& g, std::size_t w, unsigned jobs) {
  if (w < 1) {
    throw Error(ErrorCode::kInvalidCapacity,
                "interaction capability must be at least 1");
  }
  InfluenceScores result{"heteroinf", std::vector<double>(g.node_count())};
  ParallelFor(g.node_count(), jobs, [&](std::size_t u) {
    result.scores[u] = HeteroInf(g, static_cast<NodeId>(u), w);
  });
  return result;
}

std::size_t DegreeInfluence(const Graph& g, NodeId u) {
  if (!g.contains(u)) {
    throw Error(ErrorCode::kUnknownNode, fmt::format("node {} is not a node", u));
  }
  return g.out_degree(u);
}

InfluenceScores DegreeScores(const Graph& g) {
  InfluenceScores result{"degree", std::vector<double>(g.node_count())};
  for (NodeId u = 0; u < g.node_count(); ++u) {
    result.scores[u] = static_cast<double>(g.out_degree(u));
  }
  return result;
}

std::vector<std::uint32_t> CoreNumbers(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId u = 0; u < n; ++u) {
    const auto out = g.out_neighbors(u);
    const auto in = g.in_neighbors(u);
    adj[u].reserve(out.size() + in.size());
    std::set_union(out.begin(), out.end(), in.begin(), in.end(),
                   std::back_inserter(adj[u]));
  }

  std::vector<std::uint32_t> degree(n);
  std::uint32_t max_degree = 0;
  for (NodeId u = 0; u < n; ++u) {
    degree[u] = static_cast<std::uint32_t>(adj[u].size());
    max_degree = std::max(max_degree, degree[u]);
  }
  // Nodes ordered by current degree; bin_start[d] is the first slot of
  // degree-d nodes in `order`.
  std::vector<std::size_t> bin_start(max_degree + 2, 0);
  for (NodeId u = 0; u < n; ++u) ++bin_start[degree[u] + 1];
  std::partial_sum(bin_start.begin(), bin_start.end(), bin_start.begin());
  std::vector<NodeId> order(n);
  std::vector<std::size_t> position(n);
  {
    std::vector<std::size_t> cursor(bin_start.begin(), bin_start.end() - 1);
    for (NodeId u = 0; u < n; ++u) {
      position[u] = cursor[degree[u]]++;
      order[position[u]] = u;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId u = order[i];
    for (NodeId v : adj[u]) {
      if (degree[v] > degree[u]) {
        const std::uint32_t dv = degree[v];
        const std::size_t first = bin_start[dv];
        const NodeId w = order[first];
        if (w != v) {
          std::swap(order[position[v]], order[first]);
          std::swap(position[v], position[w]);
        }
        ++bin_start[dv];
        --degree[v];
      }
    }
  }
  return degree;
}

InfluenceScores CorenessScores(const Graph& g) {
  const auto cores = CoreNumbers(g);
  return {"coreness", std::vector<double>(cores.begin(), cores.end())};
}

InfluenceScores McScores(const Graph& g, std::size_t runs, std::uint64_t seed,
                         unsigned jobs) {
  InfluenceScores result{"mc", std::vector<double>(g.node_count())};
  ParallelFor(g.node_count(), jobs, [&](std::size_t u) {
    Rng stream = DeriveStream(seed, u);
    result.scores[u] =
        McInfluence(g, static_cast<NodeId>(u), runs, stream(), 1).estimate;
  });
  return result;
}

InfluenceScores ExactScores(const Graph& g, std::size_t max_edges) {
  InfluenceScores result{"exact", std::vector<double>(g.node_count())};
  for (NodeId u = 0; u < g.node_count(); ++u) {
    result.scores[u] = ExactInfluence(g, u, max_edges);
  }
  return result;
}

void WriteScores(std::ostream& out, const InfluenceScores& scores,
                 const IdMap& ids) {
  for (NodeId u = 0; u < scores.scores.size(); ++u) {
    out << ids.External(u) << '\t' << tsv::FormatDouble(scores.scores[u])
        << '\n';
  }
}

}  // namespace heteroim
