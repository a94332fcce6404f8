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

#include "heteroim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "heteroim/error.hpp"
#include "heteroim/tsv.hpp"

namespace heteroim {
namespace {

bool IsProbability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

NodeId IdMap::Intern(ExternalId id) {
  auto [it, inserted] =
      index_.try_emplace(id, static_cast<NodeId>(external_.size()));
  if (inserted) external_.push_back(id);
  return it->second;
}

std::optional<NodeId> IdMap::Find(ExternalId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

IdMap IdMap::Identity(std::size_t n) {
  IdMap map;
  for (std::size_t i = 0; i < n; ++i) map.Intern(i);
  return map;
}

Graph::Graph(std::vector<double> accept_prob, std::vector<Edge> edges)
    : accept_prob_(std::move(accept_prob)) {
  const std::size_t n = accept_prob_.size();
  for (std::size_t v = 0; v < n; ++v) {
    if (!IsProbability(accept_prob_[v])) {
      throw Error(ErrorCode::kProbabilityOutOfRange,
                  fmt::format("accept probability of node {} is {}", v,
                              accept_prob_[v]));
    }
  }
  for (const Edge& e : edges) {
    if (e.source >= n || e.target >= n) {
      throw Error(ErrorCode::kDanglingEndpoint,
                  fmt::format("edge ({}, {}) references a node outside [0, {})",
                              e.source, e.target, n));
    }
    if (e.source == e.target) {
      throw Error(ErrorCode::kSelfLoop,
                  fmt::format("self-loop on node {}", e.source));
    }
    if (!IsProbability(e.invite_prob)) {
      throw Error(ErrorCode::kProbabilityOutOfRange,
                  fmt::format("invite probability of edge ({}, {}) is {}",
                              e.source, e.target, e.invite_prob));
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].source == edges[i - 1].source &&
        edges[i].target == edges[i - 1].target) {
      throw Error(ErrorCode::kDuplicateEdge,
                  fmt::format("duplicate edge ({}, {})", edges[i].source,
                              edges[i].target));
    }
  }

  const std::size_t m = edges.size();
  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const Edge& e : edges) {
    ++out_offsets_[e.source + 1];
    ++in_offsets_[e.target + 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
    in_offsets_[v + 1] += in_offsets_[v];
  }
  out_targets_.resize(m);
  out_invite_.resize(m);
  out_spread_.resize(m);
  in_sources_.resize(m);
  in_invite_.resize(m);
  in_spread_.resize(m);
  std::vector<std::size_t> in_cursor(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Edge& e = edges[i];
    const double s = e.invite_prob * accept_prob_[e.target];
    out_targets_[i] = e.target;
    out_invite_[i] = e.invite_prob;
    out_spread_[i] = s;
    const std::size_t j = in_cursor[e.target]++;
    in_sources_[j] = e.source;
    in_invite_[j] = e.invite_prob;
    in_spread_[j] = s;
  }
}

std::optional<double> Graph::invite_prob(NodeId u, NodeId v) const {
  if (u >= node_count()) return std::nullopt;
  const auto targets = out_neighbors(u);
  const auto it = std::lower_bound(targets.begin(), targets.end(), v);
  if (it == targets.end() || *it != v) return std::nullopt;
  return out_invite_probs(u)[static_cast<std::size_t>(it - targets.begin())];
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> result;
  result.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    const auto targets = out_neighbors(u);
    const auto probs = out_invite_probs(u);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      result.push_back({u, targets[i], probs[i]});
    }
  }
  return result;
}

Graph Graph::WithAcceptProbs(std::vector<double> accept_prob) const {
  if (accept_prob.size() != node_count()) {
    throw Error(ErrorCode::kInvalidParameters,
                "accept probability vector has the wrong length");
  }
  return Graph(std::move(accept_prob), edges());
}

double SpreadProb(const Graph& g, NodeId u, NodeId v) {
  const auto p = g.invite_prob(u, v);
  if (!p) {
    throw Error(ErrorCode::kNoSuchEdge, fmt::format("no edge ({}, {})", u, v));
  }
  return *p * g.accept_prob(v);
}

InviterSet MakeInviterSet(const Graph& g, std::vector<NodeId> members) {
  for (NodeId v : members) {
    if (!g.contains(v)) {
      throw Error(ErrorCode::kUnknownNode,
                  fmt::format("inviter {} is not a node", v));
    }
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return InviterSet{std::move(members)};
}

CandidateSet DeriveCandidates(const Graph& g, const InviterSet& inviters) {
  if (inviters.empty()) {
    throw Error(ErrorCode::kEmptyInviterSet, "inviter set is empty");
  }
  std::vector<bool> seen(g.node_count(), false);
  CandidateSet result;
  for (NodeId u : inviters.members) {
    for (NodeId v : g.out_neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        result.members.push_back(v);
      }
    }
  }
  std::sort(result.members.begin(), result.members.end());
  return result;
}

LoadedGraph LoadGraph(std::istream& nodes, std::istream& edges) {
  LoadedGraph loaded;
  std::vector<double> accept;
  tsv::ForEachRow(nodes, "nodes", [&](const auto& fields, std::size_t line) {
    tsv::ExpectColumns(fields, 2, "nodes", line);
    const ExternalId id = tsv::ParseUInt(fields[0], "nodes", line);
    const double u = tsv::ParseDouble(fields[1], "nodes", line);
    if (loaded.ids.Find(id)) {
      throw Error(ErrorCode::kMalformedRow,
                  fmt::format("nodes line {}: node {} declared twice", line, id));
    }
    if (!IsProbability(u)) {
      throw Error(ErrorCode::kProbabilityOutOfRange,
                  fmt::format("nodes line {}: accept probability {}", line, u));
    }
    loaded.ids.Intern(id);
    accept.push_back(u);
  });
  std::vector<Edge> edge_list;
  tsv::ForEachRow(edges, "edges", [&](const auto& fields, std::size_t line) {
    tsv::ExpectColumns(fields, 3, "edges", line);
    const ExternalId src = tsv::ParseUInt(fields[0], "edges", line);
    const ExternalId dst = tsv::ParseUInt(fields[1], "edges", line);
    const double p = tsv::ParseDouble(fields[2], "edges", line);
    if (src == dst) {
      throw Error(ErrorCode::kSelfLoop,
                  fmt::format("edges line {}: self-loop on {}", line, src));
    }
    const auto u = loaded.ids.Find(src);
    const auto v = loaded.ids.Find(dst);
    if (!u || !v) {
      throw Error(ErrorCode::kDanglingEndpoint,
                  fmt::format("edges line {}: node {} has no accept probability",
                              line, u ? dst : src));
    }
    if (!IsProbability(p)) {
      throw Error(ErrorCode::kProbabilityOutOfRange,
                  fmt::format("edges line {}: invite probability {}", line, p));
    }
    edge_list.push_back({*u, *v, p});
  });
  loaded.graph = Graph(std::move(accept), std::move(edge_list));
  return loaded;
}

LoadedGraph LoadGraphFiles(const std::filesystem::path& nodes,
                           const std::filesystem::path& edges) {
  auto nodes_in = tsv::OpenInput(nodes);
  auto edges_in = tsv::OpenInput(edges);
  return LoadGraph(nodes_in, edges_in);
}

InviterSet LoadInviters(std::istream& in, const LoadedGraph& loaded) {
  std::vector<NodeId> members;
  tsv::ForEachRow(in, "inviters", [&](const auto& fields, std::size_t line) {
    tsv::ExpectColumns(fields, 1, "inviters", line);
    const ExternalId id = tsv::ParseUInt(fields[0], "inviters", line);
    const auto index = loaded.ids.Find(id);
    if (!index) {
      throw Error(ErrorCode::kUnknownNode,
                  fmt::format("inviters line {}: unknown node {}", line, id));
    }
    members.push_back(*index);
  });
  return MakeInviterSet(loaded.graph, std::move(members));
}

InviterSet LoadInvitersFile(const std::filesystem::path& path,
                            const LoadedGraph& loaded) {
  auto in = tsv::OpenInput(path);
  return LoadInviters(in, loaded);
}

void WriteNodes(std::ostream& out, const Graph& g, const IdMap& ids) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << ids.External(v) << '\t' << tsv::FormatDouble(g.accept_prob(v))
        << '\n';
  }
}

void WriteEdges(std::ostream& out, const Graph& g, const IdMap& ids) {
  for (const Edge& e : g.edges()) {
    out << ids.External(e.source) << '\t' << ids.External(e.target) << '\t'
        << tsv::FormatDouble(e.invite_prob) << '\n';
  }
}

void WriteIdMap(std::ostream& out, const IdMap& ids) {
  for (NodeId v = 0; v < ids.size(); ++v) {
    out << ids.External(v) << '\t' << v << '\n';
  }
}

void WriteInviters(std::ostream& out, const InviterSet& inviters,
                   const IdMap& ids) {
  for (NodeId v : inviters.members) out << ids.External(v) << '\n';
}

}  // namespace heteroim
