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
#include <string>
#include <utility>
#include <vector>

#include "heteroim/graph.hpp"
#include "heteroim/influence.hpp"
#include "heteroim/recommender.hpp"

namespace heteroim {

struct Invitation {
  NodeId inviter;
  NodeId invitee;
  bool invited;
  bool accepted;

  bool operator==(const Invitation&) const = default;
};

// Realized event: invitation rows in event order and the spread forest they
// induce.
class EventLog {
 public:
  EventLog() = default;
  // Throws MalformedRow if a row is accepted but not invited. The trajectory
  // forest is derived by replaying the rows: an accepted row (u, v) is a
  // trajectory edge iff v has not yet appeared as an inviter or been reached.
  // `roots` are the users active before the first row (the event's initial
  // inviters); without them an initial inviter that sent nothing would look
  // like a fresh recruit.
  EventLog(std::size_t node_count, std::vector<Invitation> invitations,
           const std::vector<NodeId>& roots = {});

  std::size_t node_count() const { return node_count_; }
  const std::vector<Invitation>& invitations() const { return invitations_; }
  const std::vector<std::pair<NodeId, NodeId>>& trajectories() const {
    return trajectories_;
  }
  bool empty() const { return invitations_.empty(); }

  // Invitees v with an invited-and-accepted row from u, ascending.
  const std::vector<NodeId>& successes(NodeId u) const;
  bool succeeded(NodeId u, NodeId v) const;

  // Nodes reachable from v along trajectory edges, excluding v, ascending.
  std::vector<NodeId> Downstream(NodeId v) const;
  // {v} plus Downstream(v).
  std::vector<NodeId> Coverage(NodeId v) const;

 private:
  std::size_t node_count_ = 0;
  std::vector<Invitation> invitations_;
  std::vector<std::pair<NodeId, NodeId>> trajectories_;
  std::vector<std::vector<NodeId>> successes_;
  std::vector<std::vector<NodeId>> children_;
};

// `inviter<TAB>invitee<TAB>invited(0|1)<TAB>accepted(0|1)`, ids interned.
// `roots` holds external ids of the initially active users.
EventLog ReadEventLog(std::istream& in, IdMap& ids,
                      const std::vector<ExternalId>& roots = {});
void WriteEventLog(std::ostream& out, const EventLog& log, const IdMap& ids);

// ---------------------------------------------------------------------------

enum class IdealMode { kAuto, kExact, kGreedy };

struct SpreadResult {
  std::size_t spread = 0;
  std::size_t ispread = 0;
  double nspread = 0;
  bool ideal_exact = true;  // false if any inviter used the greedy ideal
  std::size_t non_spreading = 0;  // recommended ids unknown to the log
};

// Threshold on C(|successes|, k) below which the ideal list is enumerated.
inline constexpr std::uint64_t kExactIdealLimit = 10'000;

// Per inviter, the ideal k friends maximizing that inviter's deduplicated
// coverage among its successful invitees.
std::vector<NodeId> IdealList(const EventLog& log, NodeId inviter,
                              std::size_t k, IdealMode mode = IdealMode::kAuto,
                              bool* used_exact = nullptr);

// Spread@K: size of the union over inviters of Coverage(v) for every v in
// the inviter's top-K with a successful logged spread. ISpread@K: same over
// the ideal lists. NSpread@K = Spread / ISpread (0 if ISpread is 0).
SpreadResult SpreadEval(const RecommendationTable& recs, const EventLog& log,
                        std::size_t k, IdealMode mode = IdealMode::kAuto);

struct RankingResult {
  double value = 0;
  std::size_t evaluated_inviters = 0;
  bool no_relevant = false;  // no inviter had a relevant candidate
};

// Relevant = invited-and-accepted rows from the inviter. Means over inviters
// of the table with at least one relevant candidate.
RankingResult RecallAtK(const RecommendationTable& recs, const EventLog& log,
                        std::size_t k);
RankingResult NdcgAtK(const RecommendationTable& recs, const EventLog& log,
                      std::size_t k);

// Indices of the k largest scores, ties by ascending index.
std::vector<NodeId> TopK(const std::vector<double>& scores, std::size_t k);

// |top-k(predicted) ∩ top-k(truth)| / k. Throws UniverseMismatch if the
// vectors differ in length, InvalidParameters unless 1 <= k <= N.
double HitAtK(const InfluenceScores& predicted, const InfluenceScores& truth,
              std::size_t k);

// ---------------------------------------------------------------------------

struct MetricRow {
  std::string method;
  std::string metric;
  std::size_t k;
  double value;
};

struct EvalReport {
  std::vector<MetricRow> rows;
  std::vector<std::string> notes;

  void Add(std::string method, std::string metric, std::size_t k, double value);
  // First matching value; throws InvalidParameters when absent.
  double Get(const std::string& method, const std::string& metric,
             std::size_t k) const;
};

// Adds nspread, spread, ispread, recall and ndcg rows for every K.
void EvaluateTable(EvalReport& report, const RecommendationTable& recs,
                   const EventLog& log, const std::vector<std::size_t>& ks,
                   IdealMode mode = IdealMode::kAuto);

// `method<TAB>metric<TAB>K<TAB>value`, one row per line.
void WriteReport(std::ostream& out, const EvalReport& report);
// {"rows": [{"method", "metric", "k", "value"}...], "notes": [...]}
void WriteReportJson(std::ostream& out, const EvalReport& report);

}  // namespace heteroim
