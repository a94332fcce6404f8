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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "heteroim/graph.hpp"
#include "heteroim/influence.hpp"
#include "heteroim/rrset.hpp"

namespace heteroim {

struct RecEntry {
  NodeId candidate;
  double score1;
  std::optional<double> score2;

  bool operator==(const RecEntry&) const = default;
};

struct InviterList {
  NodeId inviter;
  std::vector<RecEntry> entries;

  bool operator==(const InviterList&) const = default;
};

// One list per inviter, inviters ascending.
struct RecommendationTable {
  std::string method;
  std::size_t k = 0;
  std::vector<InviterList> lists;

  const InviterList* Find(NodeId inviter) const;
  bool operator==(const RecommendationTable&) const = default;
};

// Returns an empty string when every list is at most k long, has no repeated
// candidate, never recommends the inviter to itself, and only recommends
// out-neighbors of the inviter; otherwise a description of the first
// violation.
std::string CheckTable(const Graph& g, const RecommendationTable& table);

// ---------------------------------------------------------------------------
// HeteroIR
// ---------------------------------------------------------------------------

struct HeteroIrOptions {
  std::size_t k = 3;
  std::size_t w = kDefaultCapability;
  bool no_first = false;   // drop the S_uv term
  bool no_second = false;  // drop the S_uv * I_H(v) term
  unsigned jobs = 1;
};

// beta_uv = S_uv + S_uv * I(v), with the ablation flags applied.
double HeteroIrScore(double spread, double candidate_influence,
                     const HeteroIrOptions& options);

// Ranks each inviter's out-neighbors by beta_uv (ties by ascending id) using
// I_H with capability options.w. Throws EmptyInviterSet.
RecommendationTable HeteroIr(const Graph& g, const InviterSet& inviters,
                             const HeteroIrOptions& options);

// As above with a caller-supplied per-node influence in place of I_H.
RecommendationTable HeteroIr(const Graph& g, const InviterSet& inviters,
                             std::span<const double> influence,
                             const HeteroIrOptions& options);

// ---------------------------------------------------------------------------
// HeteroIM
// ---------------------------------------------------------------------------

struct HeteroImOptions {
  std::size_t k = 3;
  bool rerank = true;
  // Collection over which rho_uv is counted at selection time.
  SetScope rho_scope = SetScope::kAlive;
  // Lazy (priority queue) or eager argmax; both give the same sequence.
  bool lazy = true;
};

struct HeteroImResult {
  RecommendationTable table;
  std::vector<NodeId> selection;                // argmax picks in order
  std::vector<std::uint64_t> selection_coverage;  // c_u at each pick
  std::vector<std::string> warnings;
};

// Greedy max-coverage over the candidates: repeatedly take the candidate
// with the most alive RR sets (ties: larger sum of incoming S, then smaller
// id), append it to the list of every inviter with an edge to it with score
// (rho, c), and remove the RR sets it covers. Lists are then sorted by
// (rho, c) descending with rerank, by (c, rho) without, and cut to k.
// Mutates `collection` (covered sets end up dead).
HeteroImResult HeteroIm(const Graph& g, const InviterSet& inviters,
                        const CandidateSet& candidates,
                        RRSetCollection& collection,
                        const HeteroImOptions& options);

// ---------------------------------------------------------------------------
// Personalized PageRank baseline
// ---------------------------------------------------------------------------

struct PprOptions {
  // Probability of restarting at the source at every step.
  double damping = 0.15;
  double tolerance = 1e-10;
  std::size_t max_iterations = 10'000;
};

class PersonalizedPageRank {
 public:
  // Transition weights from u are proportional to S_uv over u's out-edges
  // (uniform if they are all zero); a walk at a node without out-edges
  // restarts.
  explicit PersonalizedPageRank(const Graph& g);

  // Power iteration until the L1 change drops below options.tolerance.
  // Throws UnknownNode or InvalidParameters (damping outside (0,1)).
  Eigen::VectorXd Scores(NodeId source, const PprOptions& options) const;

  // Transition matrix, column u holding the distribution of the next step
  // from u (zero for nodes without out-edges).
  const Eigen::SparseMatrix<double>& transition() const { return transition_; }
  bool dangling(NodeId u) const { return dangling_[u]; }

 private:
  const Graph* graph_;
  Eigen::SparseMatrix<double> transition_;
  std::vector<bool> dangling_;
};

std::vector<RecEntry> PprRecommend(const Graph& g, NodeId u, std::size_t k,
                                   const PprOptions& options = {});
RecommendationTable PprTable(const Graph& g, const InviterSet& inviters,
                             std::size_t k, const PprOptions& options = {},
                             unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Recommendations file
// ---------------------------------------------------------------------------

// `inviter_id<TAB>rank<TAB>candidate_id<TAB>score1<TAB>score2`, ranks
// 1-based, score2 empty when absent.
void WriteRecommendations(std::ostream& out, const RecommendationTable& table,
                          const IdMap& ids);

// Ids are interned into `ids`; rows must be grouped by inviter with ranks
// 1, 2, ... Throws MalformedRow.
RecommendationTable ReadRecommendations(std::istream& in, IdMap& ids,
                                        std::string method = "",
                                        std::size_t k = 0);

}  // namespace heteroim
