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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace heteroim {

using NodeId = std::uint32_t;
using ExternalId = std::uint64_t;

struct Edge {
  NodeId source;
  NodeId target;
  double invite_prob;
};

// Dense internal index <-> external 64-bit id, in first-appearance order.
class IdMap {
 public:
  NodeId Intern(ExternalId id);
  std::optional<NodeId> Find(ExternalId id) const;
  ExternalId External(NodeId index) const { return external_.at(index); }
  std::size_t size() const { return external_.size(); }

  static IdMap Identity(std::size_t n);

 private:
  std::vector<ExternalId> external_;
  std::unordered_map<ExternalId, NodeId> index_;
};

// Immutable directed graph with invite probabilities P on edges and accept
// probabilities U on nodes, stored as forward and reverse CSR. Neighbor
// lists are sorted by node id. The per-edge spread probability
// S_uv = P_uv * U_v is precomputed for both directions.
class Graph {
 public:
  Graph() = default;

  // Throws Error on any invariant violation: endpoint out of range
  // (DanglingEndpoint), u == v (SelfLoop), duplicate (u, v) (DuplicateEdge),
  // or a probability outside [0, 1] (ProbabilityOutOfRange).
  Graph(std::vector<double> accept_prob, std::vector<Edge> edges);

  std::size_t node_count() const { return accept_prob_.size(); }
  std::size_t edge_count() const { return out_targets_.size(); }

  std::span<const NodeId> out_neighbors(NodeId u) const {
    return Slice(out_targets_, out_offsets_, u);
  }
  std::span<const double> out_invite_probs(NodeId u) const {
    return Slice(out_invite_, out_offsets_, u);
  }
  std::span<const double> out_spread_probs(NodeId u) const {
    return Slice(out_spread_, out_offsets_, u);
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    return Slice(in_sources_, in_offsets_, v);
  }
  std::span<const double> in_invite_probs(NodeId v) const {
    return Slice(in_invite_, in_offsets_, v);
  }
  std::span<const double> in_spread_probs(NodeId v) const {
    return Slice(in_spread_, in_offsets_, v);
  }
  std::size_t out_degree(NodeId u) const {
    return out_offsets_[u + 1] - out_offsets_[u];
  }
  std::size_t in_degree(NodeId v) const {
    return in_offsets_[v + 1] - in_offsets_[v];
  }

  double accept_prob(NodeId v) const { return accept_prob_[v]; }
  std::span<const double> accept_probs() const { return accept_prob_; }

  std::optional<double> invite_prob(NodeId u, NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const { return invite_prob(u, v).has_value(); }
  bool contains(NodeId v) const { return v < node_count(); }

  // Edges in ascending (source, target) order.
  std::vector<Edge> edges() const;

  // Same topology and P, different U. Used by the homogeneous-probability
  // ablation, which sets every U_v to 1 during sampling.
  Graph WithAcceptProbs(std::vector<double> accept_prob) const;

 private:
  template <typename T>
  static std::span<const T> Slice(const std::vector<T>& data,
                                  const std::vector<std::size_t>& offsets,
                                  NodeId u) {
    return std::span<const T>(data).subspan(offsets[u],
                                            offsets[u + 1] - offsets[u]);
  }

  std::vector<double> accept_prob_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<double> out_invite_;
  std::vector<double> out_spread_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> in_sources_;
  std::vector<double> in_invite_;
  std::vector<double> in_spread_;
};

// P_uv * U_v. Throws NoSuchEdge if (u, v) is not an edge.
double SpreadProb(const Graph& g, NodeId u, NodeId v);

// Sorted, duplicate-free node sets.
struct InviterSet {
  std::vector<NodeId> members;
  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
};

struct CandidateSet {
  std::vector<NodeId> members;
  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
};

// Sorts and deduplicates; throws UnknownNode for ids outside the graph.
InviterSet MakeInviterSet(const Graph& g, std::vector<NodeId> members);

// Union of out-neighbors of all inviters. Throws EmptyInviterSet.
CandidateSet DeriveCandidates(const Graph& g, const InviterSet& inviters);

struct LoadedGraph {
  Graph graph;
  IdMap ids;
};

// Tab-separated `node_id<TAB>accept_prob` and
// `src_id<TAB>dst_id<TAB>invite_prob` rows, no header. Node indices follow
// first appearance in the nodes stream.
LoadedGraph LoadGraph(std::istream& nodes, std::istream& edges);
LoadedGraph LoadGraphFiles(const std::filesystem::path& nodes,
                           const std::filesystem::path& edges);

// One external node id per line.
InviterSet LoadInviters(std::istream& in, const LoadedGraph& loaded);
InviterSet LoadInvitersFile(const std::filesystem::path& path,
                            const LoadedGraph& loaded);

void WriteNodes(std::ostream& out, const Graph& g, const IdMap& ids);
void WriteEdges(std::ostream& out, const Graph& g, const IdMap& ids);
void WriteIdMap(std::ostream& out, const IdMap& ids);
void WriteInviters(std::ostream& out, const InviterSet& inviters,
                   const IdMap& ids);

}  // namespace heteroim
