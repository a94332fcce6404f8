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
#include <span>
#include <string>
#include <vector>

#include "heteroim/graph.hpp"

namespace heteroim {

// ---------------------------------------------------------------------------
// RR-set budget
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultRnCap = 10'000'000;

struct RNParameters {
  std::size_t node_count = 0;                  // n_p
  std::size_t k = 0;                           // recommendation length
  double epsilon = 0.1;
  double delta = 0.001;
  std::vector<std::size_t> inviter_out_degrees;  // C_u; chi = size()
  std::uint64_t cap = kDefaultRnCap;

  std::size_t chi() const { return inviter_out_degrees.size(); }
};

struct RNResult {
  int i_max = 0;
  double theta = 0;
  double log_binomial_sum = 0;  // ln prod_u C(C_u, k)
  double rn_exact = 0;          // 2^i_max * theta before rounding and capping
  std::uint64_t rn = 0;
  bool capped = false;            // rn clamped to cap
  bool i_max_clamped = false;     // n_p <= k chi eps^2; i_max forced to 1
  bool binomial_clamped = false;  // some C_u < k; factor taken as 1
  std::vector<std::string> warnings;
};

// RN = 2^i_max * theta with
//   i_max = ceil(log2(n_p / (k chi eps^2)))
//   theta = 2 (sqrt(ln(6/delta)) / 2 + sqrt((ln prod C(C_u,k) + ln(6/delta)) / 2))^2
// Throws InvalidParameters unless eps, delta in (0,1), k >= 1, n_p >= 1 and
// chi >= 1.
RNResult ComputeRn(const RNParameters& p);

// ln C(n, k) via log-gamma; 0 when n < k.
double LogBinomial(std::size_t n, std::size_t k);

// ---------------------------------------------------------------------------
// RR-set collection
// ---------------------------------------------------------------------------

enum class SamplingStrategy : std::uint32_t { kUniform = 0, kRandomSource = 1 };

enum class SetScope { kAlive, kAll };

// Bag of reverse-reachable sets with an inverted node -> set index and
// logical removal. Set ids are stable; members of each set are sorted.
class RRSetCollection {
 public:
  RRSetCollection() = default;
  // Each sets[i] must contain sources[i]; members are sorted and
  // deduplicated. Throws InvalidParameters otherwise.
  RRSetCollection(std::size_t node_count, std::vector<std::vector<NodeId>> sets,
                  std::vector<NodeId> sources);
  // Flat form: set i is members[offsets[i], offsets[i+1]), already sorted.
  static RRSetCollection FromFlat(std::size_t node_count,
                                  std::vector<std::size_t> offsets,
                                  std::vector<NodeId> members,
                                  std::vector<NodeId> sources);

  std::size_t node_count() const { return coverage_.size(); }
  std::size_t set_count() const { return sources_.size(); }
  std::size_t alive_count() const { return alive_count_; }

  std::span<const NodeId> members(std::size_t set) const {
    return std::span<const NodeId>(members_).subspan(
        offsets_[set], offsets_[set + 1] - offsets_[set]);
  }
  NodeId source(std::size_t set) const { return sources_[set]; }
  bool alive(std::size_t set) const { return alive_[set] != 0; }

  // Ids of all sets that contain v (alive or not), ascending.
  std::span<const std::uint32_t> containing(NodeId v) const {
    return std::span<const std::uint32_t>(index_).subspan(
        index_offsets_[v], index_offsets_[v + 1] - index_offsets_[v]);
  }
  std::vector<std::uint32_t> containing(NodeId v, SetScope scope) const;

  // Number of alive sets containing v.
  std::uint64_t coverage(NodeId v) const { return coverage_[v]; }
  std::vector<std::uint64_t> CoverageCounts(std::span<const NodeId> nodes) const;

  // Number of sets containing both i and j. Throws SameNode if i == j.
  std::uint64_t SharedCount(NodeId i, NodeId j,
                            SetScope scope = SetScope::kAlive) const;

  // Marks every alive set containing u dead; returns how many.
  std::size_t RemoveSetsCovering(NodeId u);

  // Sampling provenance recorded in dumps.
  std::uint64_t seed = 0;
  SamplingStrategy strategy = SamplingStrategy::kUniform;
  std::uint64_t requested_count = 0;
  std::vector<std::string> warnings;

 private:
  void BuildIndex(std::size_t node_count);

  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> members_;
  std::vector<NodeId> sources_;
  std::vector<std::uint8_t> alive_;
  std::size_t alive_count_ = 0;
  std::vector<std::size_t> index_offsets_{0};
  std::vector<std::uint32_t> index_;
  std::vector<std::uint64_t> coverage_;
};

// Free-function spellings of the collection queries.
std::vector<std::uint64_t> CoverageCounts(const RRSetCollection& c,
                                          std::span<const NodeId> nodes);
std::uint64_t SharedRrCount(const RRSetCollection& c, NodeId i, NodeId j,
                            SetScope scope = SetScope::kAlive);
std::size_t RemoveSetsCovering(RRSetCollection& c, NodeId u);

// Samples `count` RR sets. Set i picks a source (kUniform: block i / per,
// with per = floor(count / N) sets per node and the remainder dropped;
// kRandomSource: uniform from stream i), then grows the set by reverse BFS
// in which each in-edge (u -> x) is kept with probability S_ux, drawing
// from DeriveStream(seed, i). If count < N under kUniform the call falls
// back to kRandomSource and records a warning. Throws EmptyGraph or
// InvalidParameters (count == 0).
RRSetCollection SampleRrSets(const Graph& g, std::uint64_t count,
                             SamplingStrategy strategy, std::uint64_t seed,
                             unsigned jobs = 1);

// Little-endian binary dump: magic "HIRR", u32 version, u64 N, u64 set
// count, u64 seed, u32 strategy, then per set u32 source, u32 length and
// the sorted u32 members. Removal state is not stored.
void WriteRrSets(std::ostream& out, const RRSetCollection& c);
RRSetCollection ReadRrSets(std::istream& in);
void WriteRrSetsFile(const std::filesystem::path& path,
                     const RRSetCollection& c);
RRSetCollection ReadRrSetsFile(const std::filesystem::path& path);

}  // namespace heteroim
