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

#include "heteroim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include <fmt/format.h>

#include "heteroim/error.hpp"
#include "heteroim/random.hpp"

namespace heteroim {
namespace {

double SampleBeta(Rng& rng, const BetaParams& p) {
  std::gamma_distribution<double> x(p.alpha, 1.0);
  std::gamma_distribution<double> y(p.beta, 1.0);
  const double a = x(rng);
  const double b = y(rng);
  if (a + b == 0.0) return 0.5;
  return a / (a + b);
}

class WeightedSampler {
 public:
  explicit WeightedSampler(const std::vector<double>& weights)
      : cumulative_(weights.size()) {
    std::partial_sum(weights.begin(), weights.end(), cumulative_.begin());
  }
  std::size_t operator()(Rng& rng) const {
    const double x = Uniform01(rng) * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                 cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

void ValidateConfig(const SynthConfig& cfg) {
  if (cfg.n < 1) throw Error(ErrorCode::kInvalidParameters, "n must be >= 1");
  const double max_edges =
      static_cast<double>(cfg.n) * static_cast<double>(cfg.n - 1);
  if (static_cast<double>(cfg.target_m) > max_edges) {
    throw Error(ErrorCode::kInfeasibleConfig,
                fmt::format("{} edges requested but a simple digraph on {} "
                            "nodes has at most {}",
                            cfg.target_m, cfg.n, max_edges));
  }
  for (const auto& b : {cfg.invite, cfg.accept}) {
    if (!(b.alpha > 0 && b.beta > 0)) {
      throw Error(ErrorCode::kInvalidParameters,
                  "Beta parameters must be positive");
    }
  }
  if (cfg.invite_cap < 1) {
    throw Error(ErrorCode::kInvalidParameters, "invite_cap must be >= 1");
  }
  if (cfg.degree_model == DegreeModel::kPowerLaw && !(cfg.exponent > 1.0)) {
    throw Error(ErrorCode::kInvalidParameters,
                "power-law exponent must be greater than 1");
  }
  if (!(cfg.inviter_fraction >= 0.0 && cfg.inviter_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameters,
                "inviter fraction must lie in [0, 1]");
  }
}

std::vector<double> SourceWeights(const SynthConfig& cfg) {
  std::vector<double> w(cfg.n, 1.0);
  if (cfg.degree_model == DegreeModel::kUniform) return w;
  const double power = -1.0 / (cfg.exponent - 1.0);
  std::vector<std::size_t> rank(cfg.n);
  std::iota(rank.begin(), rank.end(), 0);
  Rng rng = DeriveStream(cfg.seed, 0);
  for (std::size_t i = cfg.n; i > 1; --i) {
    std::swap(rank[i - 1], rank[UniformIndex(rng, i)]);
  }
  for (std::size_t v = 0; v < cfg.n; ++v) {
    w[v] = std::pow(static_cast<double>(rank[v] + 1), power);
  }
  return w;
}

Graph GenerateGraph(const SynthConfig& cfg) {
  ValidateConfig(cfg);
  const std::size_t n = cfg.n;
  const auto weights = SourceWeights(cfg);
  Rng topo = DeriveStream(cfg.seed, 1);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(cfg.target_m);

  if (2 * cfg.target_m <= n * (n - 1)) {
    const WeightedSampler pick_source(weights);
    std::vector<std::size_t> out_degree(n, 0);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(cfg.target_m * 2);
    std::size_t guard = 0;
    const std::size_t max_draws = 100 * cfg.target_m + 1000;
    while (pairs.size() < cfg.target_m && guard++ < max_draws) {
      const std::size_t u = pick_source(topo);
      if (out_degree[u] + 1 >= n) continue;  // saturated source
      // Redraw only the target so out-degrees follow the source model.
      while (true) {
        const std::size_t v = UniformIndex(topo, n);
        if (v == u) continue;
        if (seen.insert(static_cast<std::uint64_t>(u) * n + v).second) {
          pairs.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
          ++out_degree[u];
          break;
        }
      }
    }
  } else {
    // Dense: weighted sampling without replacement over all ordered pairs
    // (Efraimidis-Spirakis keys log(U) / w).
    std::vector<std::pair<double, std::uint64_t>> keyed;
    keyed.reserve(n * (n - 1));
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        if (u == v) continue;
        const double r = std::max(Uniform01(topo), 0x1.0p-60);
        keyed.emplace_back(std::log(r) / weights[u],
                           static_cast<std::uint64_t>(u) * n + v);
      }
    }
    std::nth_element(keyed.begin(),
                     keyed.begin() + static_cast<std::ptrdiff_t>(cfg.target_m),
                     keyed.end(), std::greater<>());
    keyed.resize(cfg.target_m);
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    for (const auto& [key, code] : keyed) {
      pairs.emplace_back(static_cast<NodeId>(code / n),
                         static_cast<NodeId>(code % n));
    }
  }

  std::sort(pairs.begin(), pairs.end());
  Rng probs = DeriveStream(cfg.seed, 2);
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back({u, v, SampleBeta(probs, cfg.invite)});
  Rng accept_rng = DeriveStream(cfg.seed, 3);
  std::vector<double> accept(n);
  for (double& a : accept) a = SampleBeta(accept_rng, cfg.accept);
  return Graph(std::move(accept), std::move(edges));
}

InviterSet SampleInviters(const Graph& g, double fraction, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  std::size_t count =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (fraction > 0 && count == 0 && n > 0) count = 1;
  count = std::min(count, n);
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  Rng rng = DeriveStream(seed, 0);
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(nodes[i], nodes[i + UniformIndex(rng, n - i)]);
  }
  nodes.resize(count);
  return MakeInviterSet(g, std::move(nodes));
}

SynthEvent GenerateEventLog(const Graph& g, const SynthConfig& cfg,
                            std::uint64_t seed) {
  if (cfg.invite_cap < 1) {
    throw Error(ErrorCode::kInvalidParameters, "invite_cap must be >= 1");
  }
  SynthEvent event;
  event.inviters = SampleInviters(g, cfg.inviter_fraction, seed);
  Rng rng = DeriveStream(seed, 1);

  std::vector<bool> active(g.node_count(), false);
  std::vector<NodeId> frontier = event.inviters.members;
  for (NodeId s : frontier) active[s] = true;
  std::vector<Invitation> rows;
  std::vector<NodeId> next;
  std::vector<std::size_t> drawn;
  while (!frontier.empty()) {
    next.clear();
    for (NodeId u : frontier) {
      const auto targets = g.out_neighbors(u);
      const auto invite = g.out_invite_probs(u);
      drawn.clear();
      for (std::size_t i = 0; i < targets.size(); ++i) {
        if (Bernoulli(rng, invite[i])) drawn.push_back(i);
      }
      std::stable_sort(drawn.begin(), drawn.end(),
                       [&](std::size_t a, std::size_t b) { return invite[a] > invite[b]; });
      if (drawn.size() > cfg.invite_cap) drawn.resize(cfg.invite_cap);
      for (std::size_t i : drawn) {
        const NodeId v = targets[i];
        const bool accepted = Bernoulli(rng, g.accept_prob(v));
        rows.push_back({u, v, true, accepted});
        if (accepted && !active[v]) {
          active[v] = true;
          next.push_back(v);
        }
      }
    }
    std::sort(next.begin(), next.end());
    frontier.swap(next);
  }
  event.log = EventLog(g.node_count(), std::move(rows), event.inviters.members);
  return event;
}

}  // namespace heteroim
