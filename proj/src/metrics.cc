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

#include "heteroim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "heteroim/error.hpp"
#include "heteroim/tsv.hpp"

namespace heteroim {

EventLog::EventLog(std::size_t node_count, std::vector<Invitation> invitations,
                   const std::vector<NodeId>& roots)
    : node_count_(node_count),
      invitations_(std::move(invitations)),
      successes_(node_count),
      children_(node_count) {
  std::vector<bool> reached(node_count, false);
  for (NodeId r : roots) {
    if (r >= node_count) {
      throw Error(ErrorCode::kMalformedRow,
                  fmt::format("initial user {} lies outside [0, {})", r, node_count));
    }
    reached[r] = true;
  }
  for (std::size_t i = 0; i < invitations_.size(); ++i) {
    const Invitation& row = invitations_[i];
    if (row.inviter >= node_count || row.invitee >= node_count) {
      throw Error(ErrorCode::kMalformedRow,
                  fmt::format("event row {} references a node outside [0, {})",
                              i, node_count));
    }
    if (row.accepted && !row.invited) {
      throw Error(ErrorCode::kMalformedRow,
                  fmt::format("event row {} accepted without an invitation", i));
    }
    reached[row.inviter] = true;
    if (!row.accepted) continue;
    successes_[row.inviter].push_back(row.invitee);
    if (!reached[row.invitee]) {
      reached[row.invitee] = true;
      trajectories_.emplace_back(row.inviter, row.invitee);
      children_[row.inviter].push_back(row.invitee);
    }
  }
  for (auto& s : successes_) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
}

const std::vector<NodeId>& EventLog::successes(NodeId u) const {
  static const std::vector<NodeId> kNone;
  return u < node_count_ ? successes_[u] : kNone;
}

bool EventLog::succeeded(NodeId u, NodeId v) const {
  const auto& s = successes(u);
  return std::binary_search(s.begin(), s.end(), v);
}

std::vector<NodeId> EventLog::Downstream(NodeId v) const {
  std::vector<NodeId> result;
  if (v >= node_count_) return result;
  std::vector<NodeId> stack(children_[v].begin(), children_[v].end());
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    result.push_back(x);
    stack.insert(stack.end(), children_[x].begin(), children_[x].end());
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<NodeId> EventLog::Coverage(NodeId v) const {
  auto result = Downstream(v);
  result.insert(std::upper_bound(result.begin(), result.end(), v), v);
  return result;
}

EventLog ReadEventLog(std::istream& in, IdMap& ids,
                      const std::vector<ExternalId>& roots) {
  std::vector<Invitation> rows;
  auto flag = [](std::string_view f, std::size_t line) {
    if (f == "0") return false;
    if (f == "1") return true;
    throw Error(ErrorCode::kMalformedRow,
                fmt::format("log line {}: flag must be 0 or 1, got '{}'", line, f));
  };
  tsv::ForEachRow(in, "log", [&](const auto& f, std::size_t line) {
    tsv::ExpectColumns(f, 4, "log", line);
    const NodeId u = ids.Intern(tsv::ParseUInt(f[0], "log", line));
    const NodeId v = ids.Intern(tsv::ParseUInt(f[1], "log", line));
    rows.push_back({u, v, flag(f[2], line), flag(f[3], line)});
  });
  std::vector<NodeId> root_ids;
  for (ExternalId r : roots) root_ids.push_back(ids.Intern(r));
  return EventLog(ids.size(), std::move(rows), root_ids);
}

void WriteEventLog(std::ostream& out, const EventLog& log, const IdMap& ids) {
  for (const auto& row : log.invitations()) {
    out << ids.External(row.inviter) << '\t' << ids.External(row.invitee)
        << '\t' << (row.invited ? 1 : 0) << '\t' << (row.accepted ? 1 : 0)
        << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

// Saturating C(n, k).
std::uint64_t Choose(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (r > 1e18L) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(std::llround(r));
}

class UnionCounter {
 public:
  explicit UnionCounter(std::size_t n) : mark_(n, 0) {}
  void Reset() {
    if (++epoch_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      epoch_ = 1;
    }
    size_ = 0;
  }
  void Add(const std::vector<NodeId>& nodes) {
    for (NodeId v : nodes) {
      if (mark_[v] != epoch_) {
        mark_[v] = epoch_;
        ++size_;
      }
    }
  }
  std::size_t Gain(const std::vector<NodeId>& nodes) const {
    std::size_t g = 0;
    for (NodeId v : nodes) g += mark_[v] != epoch_;
    return g;
  }
  std::size_t size() const { return size_; }

 private:
  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
  std::size_t size_ = 0;
};

}  // namespace

std::vector<NodeId> IdealList(const EventLog& log, NodeId inviter,
                              std::size_t k, IdealMode mode, bool* used_exact) {
  const auto& friends = log.successes(inviter);
  if (used_exact) *used_exact = true;
  if (friends.size() <= k) return friends;

  std::vector<std::vector<NodeId>> cover;
  cover.reserve(friends.size());
  for (NodeId v : friends) cover.push_back(log.Coverage(v));

  const bool exact =
      mode == IdealMode::kExact ||
      (mode == IdealMode::kAuto && Choose(friends.size(), k) <= kExactIdealLimit);
  UnionCounter counter(log.node_count());
  std::vector<std::size_t> best;
  if (exact) {
    // Lexicographic enumeration; the first maximal combination wins.
    std::vector<std::size_t> combo(k);
    std::iota(combo.begin(), combo.end(), 0);
    std::size_t best_size = 0;
    const std::size_t n = friends.size();
    while (true) {
      counter.Reset();
      for (std::size_t i : combo) counter.Add(cover[i]);
      if (best.empty() || counter.size() > best_size) {
        best = combo;
        best_size = counter.size();
      }
      std::size_t pos = k;
      while (pos > 0 && combo[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++combo[pos - 1];
      for (std::size_t j = pos; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  } else {
    if (used_exact) *used_exact = false;
    counter.Reset();
    std::vector<bool> taken(friends.size(), false);
    for (std::size_t step = 0; step < k; ++step) {
      std::size_t pick = friends.size();
      std::size_t gain = 0;
      for (std::size_t i = 0; i < friends.size(); ++i) {
        if (taken[i]) continue;
        const std::size_t g = counter.Gain(cover[i]);
        if (pick == friends.size() || g > gain) {
          pick = i;
          gain = g;
        }
      }
      taken[pick] = true;
      counter.Add(cover[pick]);
      best.push_back(pick);
    }
    std::sort(best.begin(), best.end());
  }
  std::vector<NodeId> result;
  for (std::size_t i : best) result.push_back(friends[i]);
  return result;
}

SpreadResult SpreadEval(const RecommendationTable& recs, const EventLog& log,
                        std::size_t k, IdealMode mode) {
  if (k < 1) throw Error(ErrorCode::kInvalidParameters, "K must be at least 1");
  SpreadResult result;
  UnionCounter achieved(log.node_count());
  UnionCounter ideal(log.node_count());
  achieved.Reset();
  ideal.Reset();
  for (const auto& list : recs.lists) {
    const std::size_t top = std::min(k, list.entries.size());
    for (std::size_t r = 0; r < top; ++r) {
      const NodeId v = list.entries[r].candidate;
      if (v >= log.node_count() || list.inviter >= log.node_count()) {
        ++result.non_spreading;
        continue;
      }
      if (log.succeeded(list.inviter, v)) achieved.Add(log.Coverage(v));
    }
    if (list.inviter >= log.node_count()) continue;
    bool exact = true;
    for (NodeId v : IdealList(log, list.inviter, k, mode, &exact)) {
      ideal.Add(log.Coverage(v));
    }
    result.ideal_exact = result.ideal_exact && exact;
  }
  result.spread = achieved.size();
  result.ispread = ideal.size();
  result.nspread = result.ispread == 0
                       ? 0.0
                       : static_cast<double>(result.spread) /
                             static_cast<double>(result.ispread);
  return result;
}

namespace {

template <typename PerInviter>
RankingResult MeanOverRelevant(const RecommendationTable& recs,
                               const EventLog& log, std::size_t k,
                               PerInviter&& per_inviter) {
  if (k < 1) throw Error(ErrorCode::kInvalidParameters, "K must be at least 1");
  RankingResult result;
  double sum = 0;
  for (const auto& list : recs.lists) {
    const auto& relevant = log.successes(list.inviter);
    if (relevant.empty()) continue;
    std::vector<bool> hit;
    const std::size_t top = std::min(k, list.entries.size());
    for (std::size_t r = 0; r < top; ++r) {
      hit.push_back(std::binary_search(relevant.begin(), relevant.end(),
                                       list.entries[r].candidate));
    }
    sum += per_inviter(hit, relevant.size());
    ++result.evaluated_inviters;
  }
  if (result.evaluated_inviters == 0) {
    result.no_relevant = true;
    return result;
  }
  result.value = sum / static_cast<double>(result.evaluated_inviters);
  return result;
}

}  // namespace

RankingResult RecallAtK(const RecommendationTable& recs, const EventLog& log,
                        std::size_t k) {
  return MeanOverRelevant(recs, log, k,
                          [](const std::vector<bool>& hit, std::size_t rel) {
                            const auto hits = std::count(hit.begin(), hit.end(), true);
                            return static_cast<double>(hits) /
                                   static_cast<double>(rel);
                          });
}

RankingResult NdcgAtK(const RecommendationTable& recs, const EventLog& log,
                      std::size_t k) {
  return MeanOverRelevant(
      recs, log, k, [k](const std::vector<bool>& hit, std::size_t rel) {
        double dcg = 0;
        for (std::size_t i = 0; i < hit.size(); ++i) {
          if (hit[i]) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
        }
        double idcg = 0;
        for (std::size_t i = 0; i < std::min(k, rel); ++i) {
          idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
        }
        return dcg / idcg;
      });
}

std::vector<NodeId> TopK(const std::vector<double>& scores, std::size_t k) {
  std::vector<NodeId> order(scores.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  k = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), [&](NodeId a, NodeId b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  order.resize(k);
  return order;
}

double HitAtK(const InfluenceScores& predicted, const InfluenceScores& truth,
              std::size_t k) {
  if (predicted.scores.size() != truth.scores.size()) {
    throw Error(ErrorCode::kUniverseMismatch,
                fmt::format("score vectors cover {} and {} nodes",
                            predicted.scores.size(), truth.scores.size()));
  }
  if (k < 1 || k > truth.scores.size()) {
    throw Error(ErrorCode::kInvalidParameters,
                fmt::format("K must lie in [1, {}], got {}", truth.scores.size(), k));
  }
  auto a = TopK(predicted.scores, k);
  auto b = TopK(truth.scores, k);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<NodeId> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(k);
}

// ---------------------------------------------------------------------------

void EvalReport::Add(std::string method, std::string metric, std::size_t k,
                     double value) {
  rows.push_back({std::move(method), std::move(metric), k, value});
}

double EvalReport::Get(const std::string& method, const std::string& metric,
                       std::size_t k) const {
  for (const auto& row : rows) {
    if (row.method == method && row.metric == metric && row.k == k) {
      return row.value;
    }
  }
  throw Error(ErrorCode::kInvalidParameters,
              fmt::format("no {} @{} for method {}", metric, k, method));
}

void EvaluateTable(EvalReport& report, const RecommendationTable& recs,
                   const EventLog& log, const std::vector<std::size_t>& ks,
                   IdealMode mode) {
  for (std::size_t k : ks) {
    const auto spread = SpreadEval(recs, log, k, mode);
    report.Add(recs.method, "nspread", k, spread.nspread);
    report.Add(recs.method, "spread", k, static_cast<double>(spread.spread));
    report.Add(recs.method, "ispread", k, static_cast<double>(spread.ispread));
    if (!spread.ideal_exact) {
      report.notes.push_back(
          fmt::format("{}: ISpread@{} used the greedy ideal", recs.method, k));
    }
    if (spread.non_spreading > 0) {
      report.notes.push_back(fmt::format(
          "{}: {} recommended ids absent from the log treated as non-spreading",
          recs.method, spread.non_spreading));
    }
    const auto recall = RecallAtK(recs, log, k);
    const auto ndcg = NdcgAtK(recs, log, k);
    report.Add(recs.method, "recall", k, recall.value);
    report.Add(recs.method, "ndcg", k, ndcg.value);
    if (recall.no_relevant) {
      report.notes.push_back(fmt::format(
          "{}: no inviter has a relevant candidate; recall/ndcg@{} set to 0",
          recs.method, k));
    }
  }
}

void WriteReport(std::ostream& out, const EvalReport& report) {
  for (const auto& row : report.rows) {
    out << row.method << '\t' << row.metric << '\t' << row.k << '\t'
        << tsv::FormatDouble(row.value) << '\n';
  }
}

void WriteReportJson(std::ostream& out, const EvalReport& report) {
  nlohmann::json doc;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : report.rows) {
    doc["rows"].push_back({{"method", row.method},
                           {"metric", row.metric},
                           {"k", row.k},
                           {"value", row.value}});
  }
  doc["notes"] = report.notes;
  out << doc.dump(2) << '\n';
}

}  // namespace heteroim
