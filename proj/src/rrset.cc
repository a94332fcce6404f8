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

#include "heteroim/rrset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "heteroim/error.hpp"
#include "heteroim/parallel.hpp"
#include "heteroim/random.hpp"
#include "heteroim/tsv.hpp"

namespace heteroim {

double LogBinomial(std::size_t n, std::size_t k) {
  if (n < k) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

RNResult ComputeRn(const RNParameters& p) {
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) {
    throw Error(ErrorCode::kInvalidParameters,
                fmt::format("epsilon must lie in (0, 1), got {}", p.epsilon));
  }
  if (!(p.delta > 0.0 && p.delta < 1.0)) {
    throw Error(ErrorCode::kInvalidParameters,
                fmt::format("delta must lie in (0, 1), got {}", p.delta));
  }
  if (p.k < 1) {
    throw Error(ErrorCode::kInvalidParameters, "k must be at least 1");
  }
  if (p.node_count < 1 || p.chi() < 1) {
    throw Error(ErrorCode::kInvalidParameters,
                "node count and inviter count must be at least 1");
  }

  RNResult r;
  const double ratio = static_cast<double>(p.node_count) /
                       (static_cast<double>(p.k) *
                        static_cast<double>(p.chi()) * p.epsilon * p.epsilon);
  const double log2_ratio = std::log2(ratio);
  if (log2_ratio <= 0.0) {
    r.i_max = 1;
    r.i_max_clamped = true;
    r.warnings.push_back(fmt::format(
        "n_p / (k chi eps^2) = {} <= 1; i_max clamped to 1", ratio));
  } else {
    r.i_max = static_cast<int>(std::ceil(log2_ratio));
  }

  std::size_t short_inviters = 0;
  for (std::size_t c : p.inviter_out_degrees) {
    if (c < p.k) {
      ++short_inviters;
    } else {
      r.log_binomial_sum += LogBinomial(c, p.k);
    }
  }
  if (short_inviters > 0) {
    r.binomial_clamped = true;
    r.warnings.push_back(fmt::format(
        "{} inviters have fewer than k={} candidates; their binomial factor "
        "is taken as 1",
        short_inviters, p.k));
  }

  const double log_term = std::log(6.0 / p.delta);
  const double root = 0.5 * std::sqrt(log_term) +
                      std::sqrt(0.5 * (r.log_binomial_sum + log_term));
  r.theta = 2.0 * root * root;
  r.rn_exact = std::ldexp(r.theta, r.i_max);

  const double ceiled = std::ceil(r.rn_exact);
  if (ceiled > static_cast<double>(p.cap)) {
    r.rn = p.cap;
    r.capped = true;
    r.warnings.push_back(
        fmt::format("RN = {} exceeds cap {}; clamped", ceiled, p.cap));
  } else {
    r.rn = static_cast<std::uint64_t>(ceiled);
  }
  return r;
}

// ---------------------------------------------------------------------------

RRSetCollection::RRSetCollection(std::size_t node_count,
                                 std::vector<std::vector<NodeId>> sets,
                                 std::vector<NodeId> sources) {
  if (sets.size() != sources.size()) {
    throw Error(ErrorCode::kInvalidParameters,
                "one source per RR set is required");
  }
  offsets_.assign(1, 0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto& set = sets[i];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (!std::binary_search(set.begin(), set.end(), sources[i])) {
      throw Error(ErrorCode::kInvalidParameters,
                  fmt::format("RR set {} does not contain its source", i));
    }
    if (!set.empty() && set.back() >= node_count) {
      throw Error(ErrorCode::kInvalidParameters,
                  fmt::format("RR set {} has a member outside [0, {})", i,
                              node_count));
    }
    members_.insert(members_.end(), set.begin(), set.end());
    offsets_.push_back(members_.size());
  }
  sources_ = std::move(sources);
  BuildIndex(node_count);
}

RRSetCollection RRSetCollection::FromFlat(std::size_t node_count,
                                          std::vector<std::size_t> offsets,
                                          std::vector<NodeId> members,
                                          std::vector<NodeId> sources) {
  RRSetCollection c;
  c.offsets_ = std::move(offsets);
  c.members_ = std::move(members);
  c.sources_ = std::move(sources);
  c.BuildIndex(node_count);
  return c;
}

void RRSetCollection::BuildIndex(std::size_t node_count) {
  if (sources_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidParameters, "too many RR sets");
  }
  alive_.assign(sources_.size(), 1);
  alive_count_ = sources_.size();
  coverage_.assign(node_count, 0);
  for (NodeId v : members_) ++coverage_[v];
  index_offsets_.assign(node_count + 1, 0);
  for (std::size_t v = 0; v < node_count; ++v) {
    index_offsets_[v + 1] = index_offsets_[v] + coverage_[v];
  }
  index_.resize(members_.size());
  std::vector<std::size_t> cursor(index_offsets_.begin(),
                                  index_offsets_.end() - 1);
  for (std::size_t s = 0; s < sources_.size(); ++s) {
    for (NodeId v : members(s)) index_[cursor[v]++] = static_cast<std::uint32_t>(s);
  }
}

std::vector<std::uint32_t> RRSetCollection::containing(NodeId v,
                                                       SetScope scope) const {
  std::vector<std::uint32_t> result;
  for (std::uint32_t s : containing(v)) {
    if (scope == SetScope::kAll || alive_[s]) result.push_back(s);
  }
  return result;
}

std::vector<std::uint64_t> RRSetCollection::CoverageCounts(
    std::span<const NodeId> nodes) const {
  std::vector<std::uint64_t> result;
  result.reserve(nodes.size());
  for (NodeId v : nodes) {
    result.push_back(v < coverage_.size() ? coverage_[v] : 0);
  }
  return result;
}

std::uint64_t RRSetCollection::SharedCount(NodeId i, NodeId j,
                                           SetScope scope) const {
  if (i == j) {
    throw Error(ErrorCode::kSameNode,
                fmt::format("shared count needs two distinct nodes, got {}", i));
  }
  if (i >= node_count() || j >= node_count()) return 0;
  const auto a = containing(i);
  const auto b = containing(j);
  std::uint64_t count = 0;
  std::size_t x = 0;
  std::size_t y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x] < b[y]) {
      ++x;
    } else if (b[y] < a[x]) {
      ++y;
    } else {
      if (scope == SetScope::kAll || alive_[a[x]]) ++count;
      ++x;
      ++y;
    }
  }
  return count;
}

std::size_t RRSetCollection::RemoveSetsCovering(NodeId u) {
  if (u >= node_count()) return 0;
  std::size_t removed = 0;
  for (std::uint32_t s : containing(u)) {
    if (!alive_[s]) continue;
    alive_[s] = 0;
    --alive_count_;
    ++removed;
    for (NodeId v : members(s)) --coverage_[v];
  }
  return removed;
}

std::vector<std::uint64_t> CoverageCounts(const RRSetCollection& c,
                                          std::span<const NodeId> nodes) {
  return c.CoverageCounts(nodes);
}

std::uint64_t SharedRrCount(const RRSetCollection& c, NodeId i, NodeId j,
                            SetScope scope) {
  return c.SharedCount(i, j, scope);
}

std::size_t RemoveSetsCovering(RRSetCollection& c, NodeId u) {
  return c.RemoveSetsCovering(u);
}

// ---------------------------------------------------------------------------

namespace {

struct SampleChunk {
  std::vector<std::size_t> lengths;
  std::vector<NodeId> members;
  std::vector<NodeId> sources;
};

class ReverseSampler {
 public:
  explicit ReverseSampler(const Graph& g) : g_(g), mark_(g.node_count(), 0) {}

  // Appends the sorted RR set rooted at `source` to `out`.
  void Sample(NodeId source, Rng& rng, std::vector<NodeId>& out) {
    if (++epoch_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      epoch_ = 1;
    }
    const std::size_t start = out.size();
    frontier_.assign(1, source);
    mark_[source] = epoch_;
    out.push_back(source);
    while (!frontier_.empty()) {
      next_.clear();
      for (NodeId x : frontier_) {
        const auto sources = g_.in_neighbors(x);
        const auto spread = g_.in_spread_probs(x);
        for (std::size_t i = 0; i < sources.size(); ++i) {
          const NodeId u = sources[i];
          if (mark_[u] == epoch_) continue;
          if (!Bernoulli(rng, spread[i])) continue;
          mark_[u] = epoch_;
          next_.push_back(u);
          out.push_back(u);
        }
      }
      std::sort(next_.begin(), next_.end());
      frontier_.swap(next_);
    }
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(start), out.end());
  }

 private:
  const Graph& g_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> next_;
};

}  // namespace

RRSetCollection SampleRrSets(const Graph& g, std::uint64_t count,
                             SamplingStrategy strategy, std::uint64_t seed,
                             unsigned jobs) {
  const std::size_t n = g.node_count();
  if (n == 0) throw Error(ErrorCode::kEmptyGraph, "graph has no nodes");
  if (count == 0) {
    throw Error(ErrorCode::kInvalidParameters, "RR set count must be >= 1");
  }
  if (count > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidParameters,
                fmt::format("RR set count {} exceeds 2^32 - 1", count));
  }

  std::vector<std::string> warnings;
  std::uint64_t effective = count;
  std::uint64_t per_node = 0;
  if (strategy == SamplingStrategy::kUniform) {
    per_node = count / n;
    if (per_node == 0) {
      strategy = SamplingStrategy::kRandomSource;
      warnings.push_back(fmt::format(
          "RN = {} < N = {}; uniform sampling falls back to random sources",
          count, n));
    } else {
      effective = per_node * n;
      if (effective != count) {
        warnings.push_back(fmt::format(
            "uniform sampling drops remainder: {} sets requested, {} sampled",
            count, effective));
      }
    }
  }

  const std::size_t total = static_cast<std::size_t>(effective);
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, total);
  std::vector<SampleChunk> chunks(workers);
  // Same chunk boundaries as ParallelChunks, so chunk w covers
  // [total*w/workers, total*(w+1)/workers).
  ParallelFor(workers, static_cast<unsigned>(workers), [&](std::size_t w) {
    const std::size_t begin = total * w / workers;
    const std::size_t end = total * (w + 1) / workers;
    SampleChunk& chunk = chunks[w];
    ReverseSampler sampler(g);
    chunk.lengths.reserve(end - begin);
    chunk.sources.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = DeriveStream(seed, i);
      const NodeId source =
          strategy == SamplingStrategy::kUniform
              ? static_cast<NodeId>(i / per_node)
              : static_cast<NodeId>(UniformIndex(rng, n));
      const std::size_t before = chunk.members.size();
      sampler.Sample(source, rng, chunk.members);
      chunk.lengths.push_back(chunk.members.size() - before);
      chunk.sources.push_back(source);
    }
  });

  std::vector<std::size_t> offsets{0};
  offsets.reserve(total + 1);
  std::vector<NodeId> members;
  std::vector<NodeId> sources;
  sources.reserve(total);
  std::size_t member_total = 0;
  for (const auto& chunk : chunks) member_total += chunk.members.size();
  members.reserve(member_total);
  for (auto& chunk : chunks) {
    for (std::size_t len : chunk.lengths) offsets.push_back(offsets.back() + len);
    members.insert(members.end(), chunk.members.begin(), chunk.members.end());
    sources.insert(sources.end(), chunk.sources.begin(), chunk.sources.end());
    chunk = SampleChunk{};
  }

  RRSetCollection c = RRSetCollection::FromFlat(n, std::move(offsets),
                                                std::move(members),
                                                std::move(sources));
  c.seed = seed;
  c.strategy = strategy;
  c.requested_count = count;
  c.warnings = std::move(warnings);
  return c;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<char, 4> kMagic = {'H', 'I', 'R', 'R'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void PutLe(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T GetLe(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw Error(ErrorCode::kIo, "truncated RR set dump");
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  return static_cast<T>(value);
}

}  // namespace

void WriteRrSets(std::ostream& out, const RRSetCollection& c) {
  out.write(kMagic.data(), kMagic.size());
  PutLe<std::uint32_t>(out, kVersion);
  PutLe<std::uint64_t>(out, c.node_count());
  PutLe<std::uint64_t>(out, c.set_count());
  PutLe<std::uint64_t>(out, c.seed);
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(c.strategy));
  for (std::size_t s = 0; s < c.set_count(); ++s) {
    const auto members = c.members(s);
    PutLe<std::uint32_t>(out, c.source(s));
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(members.size()));
    for (NodeId v : members) PutLe<std::uint32_t>(out, v);
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing RR set dump");
}

RRSetCollection ReadRrSets(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) {
    throw Error(ErrorCode::kIo, "not an RR set dump (bad magic)");
  }
  const auto version = GetLe<std::uint32_t>(in);
  if (version != kVersion) {
    throw Error(ErrorCode::kIo,
                fmt::format("unsupported RR set dump version {}", version));
  }
  const auto n = GetLe<std::uint64_t>(in);
  const auto count = GetLe<std::uint64_t>(in);
  const auto seed = GetLe<std::uint64_t>(in);
  const auto strategy = GetLe<std::uint32_t>(in);
  if (strategy > 1) throw Error(ErrorCode::kIo, "unknown sampling strategy");

  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> members;
  std::vector<NodeId> sources;
  for (std::uint64_t s = 0; s < count; ++s) {
    const auto source = GetLe<std::uint32_t>(in);
    const auto length = GetLe<std::uint32_t>(in);
    bool has_source = false;
    for (std::uint32_t i = 0; i < length; ++i) {
      const auto v = GetLe<std::uint32_t>(in);
      if (v >= n || (i > 0 && v <= members.back())) {
        throw Error(ErrorCode::kIo,
                    fmt::format("RR set {} in dump is not sorted within [0, {})",
                                s, n));
      }
      has_source |= v == source;
      members.push_back(v);
    }
    if (!has_source) {
      throw Error(ErrorCode::kIo,
                  fmt::format("RR set {} in dump lacks its source", s));
    }
    offsets.push_back(members.size());
    sources.push_back(source);
  }
  RRSetCollection c = RRSetCollection::FromFlat(
      static_cast<std::size_t>(n), std::move(offsets), std::move(members),
      std::move(sources));
  c.seed = seed;
  c.strategy = static_cast<SamplingStrategy>(strategy);
  c.requested_count = count;
  return c;
}

void WriteRrSetsFile(const std::filesystem::path& path,
                     const RRSetCollection& c) {
  auto out = tsv::OpenOutput(path, std::ios::out | std::ios::binary);
  WriteRrSets(out, c);
}

RRSetCollection ReadRrSetsFile(const std::filesystem::path& path) {
  auto in = tsv::OpenInput(path, std::ios::in | std::ios::binary);
  return ReadRrSets(in);
}

}  // namespace heteroim
