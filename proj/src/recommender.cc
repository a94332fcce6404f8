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

#include "heteroim/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <tuple>

#include <fmt/format.h>

#include "heteroim/error.hpp"
#include "heteroim/parallel.hpp"
#include "heteroim/tsv.hpp"

namespace heteroim {

const InviterList* RecommendationTable::Find(NodeId inviter) const {
  auto it = std::lower_bound(
      lists.begin(), lists.end(), inviter,
      [](const InviterList& l, NodeId v) { return l.inviter < v; });
  if (it == lists.end() || it->inviter != inviter) return nullptr;
  return &*it;
}

std::string CheckTable(const Graph& g, const RecommendationTable& table) {
  for (const auto& list : table.lists) {
    if (list.entries.size() > table.k) {
      return fmt::format("inviter {} has {} entries > k={}", list.inviter,
                         list.entries.size(), table.k);
    }
    std::vector<NodeId> seen;
    for (const auto& e : list.entries) {
      if (e.candidate == list.inviter) {
        return fmt::format("inviter {} recommended to itself", list.inviter);
      }
      if (!g.has_edge(list.inviter, e.candidate)) {
        return fmt::format("candidate {} is not an out-neighbor of {}",
                           e.candidate, list.inviter);
      }
      if (std::find(seen.begin(), seen.end(), e.candidate) != seen.end()) {
        return fmt::format("candidate {} repeated for inviter {}", e.candidate,
                           list.inviter);
      }
      seen.push_back(e.candidate);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------

double HeteroIrScore(double spread, double candidate_influence,
                     const HeteroIrOptions& options) {
  const double first = options.no_first ? 0.0 : spread;
  const double second = options.no_second ? 0.0 : spread * candidate_influence;
  return first + second;
}

RecommendationTable HeteroIr(const Graph& g, const InviterSet& inviters,
                             std::span<const double> influence,
                             const HeteroIrOptions& options) {
  if (inviters.empty()) {
    throw Error(ErrorCode::kEmptyInviterSet, "inviter set is empty");
  }
  if (options.k < 1) {
    throw Error(ErrorCode::kInvalidParameters, "k must be at least 1");
  }
  if (influence.size() != g.node_count()) {
    throw Error(ErrorCode::kInvalidParameters,
                "influence vector must have one value per node");
  }
  RecommendationTable table;
  table.method = "heteroir";
  if (options.no_first) table.method += "-no-first";
  if (options.no_second) table.method += "-no-second";
  table.k = options.k;
  table.lists.resize(inviters.size());
  ParallelFor(inviters.size(), options.jobs, [&](std::size_t i) {
    const NodeId u = inviters.members[i];
    const auto targets = g.out_neighbors(u);
    const auto spread = g.out_spread_probs(u);
    std::vector<RecEntry> scored;
    scored.reserve(targets.size());
    for (std::size_t j = 0; j < targets.size(); ++j) {
      scored.push_back({targets[j],
                        HeteroIrScore(spread[j], influence[targets[j]], options),
                        std::nullopt});
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const RecEntry& a, const RecEntry& b) {
                       return a.score1 > b.score1;
                     });
    if (scored.size() > options.k) scored.resize(options.k);
    table.lists[i] = {u, std::move(scored)};
  });
  return table;
}

RecommendationTable HeteroIr(const Graph& g, const InviterSet& inviters,
                             const HeteroIrOptions& options) {
  const auto influence = HeteroInfScores(g, options.w, options.jobs);
  return HeteroIr(g, inviters, influence.scores, options);
}

// ---------------------------------------------------------------------------

namespace {

struct Pick {
  std::uint64_t coverage;
  double strength;
  NodeId node;
};

// True when a ranks strictly ahead of b.
bool Ahead(const Pick& a, const Pick& b) {
  if (a.coverage != b.coverage) return a.coverage > b.coverage;
  if (a.strength != b.strength) return a.strength > b.strength;
  return a.node < b.node;
}

struct Pending {
  NodeId candidate;
  double rho;
  std::uint64_t coverage;
  std::size_t order;
};

}  // namespace

HeteroImResult HeteroIm(const Graph& g, const InviterSet& inviters,
                        const CandidateSet& candidates,
                        RRSetCollection& collection,
                        const HeteroImOptions& options) {
  if (inviters.empty()) {
    throw Error(ErrorCode::kEmptyInviterSet, "inviter set is empty");
  }
  if (options.k < 1) {
    throw Error(ErrorCode::kInvalidParameters, "k must be at least 1");
  }
  if (collection.node_count() != g.node_count()) {
    throw Error(ErrorCode::kInvalidParameters,
                fmt::format("RR sets cover {} nodes but the graph has {}",
                            collection.node_count(), g.node_count()));
  }
  HeteroImResult result;
  if (collection.set_count() == 0) {
    result.warnings.push_back(
        "RR set collection is empty; candidates ordered by tie-break only");
  }

  std::vector<bool> is_inviter(g.node_count(), false);
  for (NodeId v : inviters.members) is_inviter[v] = true;

  std::vector<double> strength(g.node_count(), 0.0);
  for (NodeId c : candidates.members) {
    if (!g.contains(c)) {
      throw Error(ErrorCode::kUnknownNode,
                  fmt::format("candidate {} is not a node", c));
    }
    for (double s : g.in_spread_probs(c)) strength[c] += s;
  }

  std::map<NodeId, std::vector<Pending>> pending;
  for (NodeId v : inviters.members) pending[v];

  auto select = [&](NodeId u) {
    const std::uint64_t cu = collection.coverage(u);
    result.selection.push_back(u);
    result.selection_coverage.push_back(cu);
    for (NodeId v : g.in_neighbors(u)) {
      if (!is_inviter[v]) continue;
      const double rho =
          static_cast<double>(collection.SharedCount(u, v, options.rho_scope));
      auto& list = pending[v];
      list.push_back({u, rho, cu, list.size()});
    }
    collection.RemoveSetsCovering(u);
  };

  if (options.lazy) {
    auto worse = [](const Pick& a, const Pick& b) { return Ahead(b, a); };
    std::priority_queue<Pick, std::vector<Pick>, decltype(worse)> heap(worse);
    for (NodeId c : candidates.members) {
      heap.push({collection.coverage(c), strength[c], c});
    }
    // Coverage only decreases, so a popped entry whose count is current
    // dominates every stale entry below it.
    while (!heap.empty()) {
      Pick top = heap.top();
      heap.pop();
      const std::uint64_t now = collection.coverage(top.node);
      if (now != top.coverage) {
        top.coverage = now;
        heap.push(top);
        continue;
      }
      select(top.node);
    }
  } else {
    std::vector<NodeId> remaining = candidates.members;
    while (!remaining.empty()) {
      std::size_t best = 0;
      Pick best_pick{collection.coverage(remaining[0]), strength[remaining[0]],
                     remaining[0]};
      for (std::size_t i = 1; i < remaining.size(); ++i) {
        const NodeId c = remaining[i];
        const Pick pick{collection.coverage(c), strength[c], c};
        if (Ahead(pick, best_pick)) {
          best = i;
          best_pick = pick;
        }
      }
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
      select(best_pick.node);
    }
  }

  result.table.method = options.rerank ? "heteroim" : "heteroim-no-rerank";
  result.table.k = options.k;
  for (auto& [inviter, list] : pending) {
    std::sort(list.begin(), list.end(), [&](const Pending& a, const Pending& b) {
      const auto ka = options.rerank ? std::tuple(a.rho, static_cast<double>(a.coverage))
                                     : std::tuple(static_cast<double>(a.coverage), a.rho);
      const auto kb = options.rerank ? std::tuple(b.rho, static_cast<double>(b.coverage))
                                     : std::tuple(static_cast<double>(b.coverage), b.rho);
      if (ka != kb) return ka > kb;
      return a.order < b.order;
    });
    InviterList out{inviter, {}};
    for (std::size_t i = 0; i < list.size() && i < options.k; ++i) {
      out.entries.push_back({list[i].candidate, list[i].rho,
                             static_cast<double>(list[i].coverage)});
    }
    result.table.lists.push_back(std::move(out));
  }
  return result;
}

// ---------------------------------------------------------------------------

PersonalizedPageRank::PersonalizedPageRank(const Graph& g)
    : graph_(&g), dangling_(g.node_count(), false) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.edge_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto targets = g.out_neighbors(u);
    const auto spread = g.out_spread_probs(u);
    if (targets.empty()) {
      dangling_[u] = true;
      continue;
    }
    double total = 0;
    for (double s : spread) total += s;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double weight = total > 0 ? spread[i] / total
                                      : 1.0 / static_cast<double>(targets.size());
      triplets.emplace_back(targets[i], u, weight);
    }
  }
  transition_.resize(n, n);
  transition_.setFromTriplets(triplets.begin(), triplets.end());
}

Eigen::VectorXd PersonalizedPageRank::Scores(NodeId source,
                                             const PprOptions& options) const {
  if (!graph_->contains(source)) {
    throw Error(ErrorCode::kUnknownNode,
                fmt::format("node {} is not a node", source));
  }
  if (!(options.damping > 0.0 && options.damping < 1.0)) {
    throw Error(ErrorCode::kInvalidParameters,
                fmt::format("damping must lie in (0, 1), got {}", options.damping));
  }
  const auto n = static_cast<Eigen::Index>(graph_->node_count());
  const double restart = options.damping;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p[source] = 1.0;
  Eigen::VectorXd next(n);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    double stuck = 0;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (dangling_[static_cast<std::size_t>(v)]) stuck += p[v];
    }
    next.noalias() = (1.0 - restart) * (transition_ * p);
    next[source] += restart + (1.0 - restart) * stuck;
    const double change = (next - p).lpNorm<1>();
    p.swap(next);
    if (change < options.tolerance) break;
  }
  return p;
}

namespace {

std::vector<RecEntry> RankNeighbors(const Graph& g, NodeId u,
                                    const Eigen::VectorXd& scores,
                                    std::size_t k) {
  std::vector<RecEntry> ranked;
  for (NodeId v : g.out_neighbors(u)) ranked.push_back({v, scores[v], std::nullopt});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RecEntry& a, const RecEntry& b) {
                     return a.score1 > b.score1;
                   });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

}  // namespace

std::vector<RecEntry> PprRecommend(const Graph& g, NodeId u, std::size_t k,
                                   const PprOptions& options) {
  const PersonalizedPageRank ppr(g);
  return RankNeighbors(g, u, ppr.Scores(u, options), k);
}

RecommendationTable PprTable(const Graph& g, const InviterSet& inviters,
                             std::size_t k, const PprOptions& options,
                             unsigned jobs) {
  if (inviters.empty()) {
    throw Error(ErrorCode::kEmptyInviterSet, "inviter set is empty");
  }
  const PersonalizedPageRank ppr(g);
  RecommendationTable table;
  table.method = "ppr";
  table.k = k;
  table.lists.resize(inviters.size());
  ParallelFor(inviters.size(), jobs, [&](std::size_t i) {
    const NodeId u = inviters.members[i];
    table.lists[i] = {u, RankNeighbors(g, u, ppr.Scores(u, options), k)};
  });
  return table;
}

// ---------------------------------------------------------------------------

void WriteRecommendations(std::ostream& out, const RecommendationTable& table,
                          const IdMap& ids) {
  for (const auto& list : table.lists) {
    for (std::size_t r = 0; r < list.entries.size(); ++r) {
      const auto& e = list.entries[r];
      out << ids.External(list.inviter) << '\t' << (r + 1) << '\t'
          << ids.External(e.candidate) << '\t' << tsv::FormatDouble(e.score1)
          << '\t';
      if (e.score2) out << tsv::FormatDouble(*e.score2);
      out << '\n';
    }
  }
}

RecommendationTable ReadRecommendations(std::istream& in, IdMap& ids,
                                        std::string method, std::size_t k) {
  std::map<NodeId, InviterList> lists;
  tsv::ForEachRow(in, "recommendations", [&](const auto& f, std::size_t line) {
    tsv::ExpectColumns(f, 5, "recommendations", line);
    const NodeId inviter =
        ids.Intern(tsv::ParseUInt(f[0], "recommendations", line));
    const auto rank = tsv::ParseUInt(f[1], "recommendations", line);
    const NodeId candidate =
        ids.Intern(tsv::ParseUInt(f[2], "recommendations", line));
    RecEntry entry{candidate, tsv::ParseDouble(f[3], "recommendations", line),
                   std::nullopt};
    if (!f[4].empty()) entry.score2 = tsv::ParseDouble(f[4], "recommendations", line);
    auto& list = lists[inviter];
    list.inviter = inviter;
    if (rank != list.entries.size() + 1) {
      throw Error(ErrorCode::kMalformedRow,
                  fmt::format("recommendations line {}: rank {} out of order",
                              line, rank));
    }
    list.entries.push_back(entry);
  });
  RecommendationTable table;
  table.method = std::move(method);
  table.k = k;
  for (auto& [inviter, list] : lists) {
    if (k == 0) table.k = std::max(table.k, list.entries.size());
    table.lists.push_back(std::move(list));
  }
  return table;
}

}  // namespace heteroim
