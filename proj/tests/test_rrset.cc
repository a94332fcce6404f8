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

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "heteroim/diffusion.hpp"
#include "heteroim/error.hpp"
#include "heteroim/rrset.hpp"
#include "test_util.hpp"

using namespace heteroim;
using testing::SpreadGraph;

namespace {

RNParameters Params(std::size_t n, std::size_t k, std::vector<std::size_t> degrees,
                    double eps = 0.1, double delta = 1e-3) {
  RNParameters p;
  p.node_count = n;
  p.k = k;
  p.epsilon = eps;
  p.delta = delta;
  p.inviter_out_degrees = std::move(degrees);
  return p;
}

// sets [{a,b},{a},{b}] with a=0, b=1
RRSetCollection Small() {
  return RRSetCollection(2, {{0, 1}, {0}, {1}}, {0, 0, 1});
}

}  // namespace

TEST_CASE("RN for the reference configuration") {
  const auto r = ComputeRn(Params(1000, 3, std::vector<std::size_t>(10, 10)));
  CHECK(r.i_max == 12);
  // Independent evaluation: C(10, 3) = 120 for each of the 10 inviters.
  const double l = std::log(6.0 / 1e-3);
  const double log_binom = 10 * std::log(120.0);
  const double theta =
      2 * std::pow(0.5 * std::sqrt(l) + std::sqrt(0.5 * (log_binom + l)), 2);
  CHECK(r.theta == doctest::Approx(theta).epsilon(1e-12));
  CHECK(r.theta == doctest::Approx(92.3).epsilon(1e-3));
  CHECK(r.rn == static_cast<std::uint64_t>(std::ceil(4096 * theta)));
  CHECK(static_cast<double>(r.rn) == doctest::Approx(3.78e5).epsilon(2e-3));
  CHECK_FALSE(r.capped);
  CHECK(r.warnings.empty());
}

TEST_CASE("RN degenerate factors and clamps") {
  // C_u < k contributes ln 1.
  const auto small = ComputeRn(Params(1000, 3, {2, 10}));
  const auto alone = ComputeRn(Params(1000, 3, {3, 10}));
  CHECK(small.binomial_clamped);
  CHECK_FALSE(alone.binomial_clamped);
  CHECK(small.log_binomial_sum == doctest::Approx(std::log(120.0)));
  CHECK(small.log_binomial_sum == doctest::Approx(alone.log_binomial_sum));
  CHECK_FALSE(small.warnings.empty());

  // chi = 1 and C_u = k leave only the delta terms.
  const double delta = 0.01;
  const auto one = ComputeRn(Params(500, 4, {4}, 0.1, delta));
  const double l = std::log(6.0 / delta);
  CHECK(one.theta ==
        doctest::Approx(2 * std::pow(0.5 * std::sqrt(l) + std::sqrt(0.5 * l), 2))
            .epsilon(1e-12));

  // n_p <= k chi eps^2 clamps i_max to 1.
  const auto clamped = ComputeRn(Params(10, 5, std::vector<std::size_t>(300, 6)));
  CHECK(clamped.i_max == 1);
  CHECK(clamped.i_max_clamped);

  auto capped_params = Params(1'000'000, 1, {50}, 0.01);
  capped_params.cap = 1000;
  const auto capped = ComputeRn(capped_params);
  CHECK(capped.capped);
  CHECK(capped.rn == 1000);
  CHECK(capped.rn_exact > 1000);
}

TEST_CASE("RN parameter validation") {
  auto expect_invalid = [](RNParameters p) {
    try {
      ComputeRn(p);
      FAIL("expected InvalidParameters");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidParameters);
    }
  };
  expect_invalid(Params(100, 3, {5}, 0.0));
  expect_invalid(Params(100, 3, {5}, 1.0));
  expect_invalid(Params(100, 3, {5}, 0.1, 0.0));
  expect_invalid(Params(100, 3, {5}, 0.1, 1.5));
  expect_invalid(Params(100, 0, {5}));
  expect_invalid(Params(100, 3, {}));
}

TEST_CASE("log binomial") {
  CHECK(LogBinomial(10, 3) == doctest::Approx(std::log(120.0)).epsilon(1e-12));
  CHECK(LogBinomial(5, 5) == doctest::Approx(0.0));
  CHECK(LogBinomial(2, 3) == 0.0);
}

TEST_CASE("RR sets on certain and impossible edges") {
  // a=0 -> b=1 with S = 1
  const Graph g = SpreadGraph(2, {{0, 1, 1.0}});
  const auto c = SampleRrSets(g, 10, SamplingStrategy::kUniform, 3);
  REQUIRE(c.set_count() == 10);
  for (std::size_t s = 0; s < c.set_count(); ++s) {
    const auto m = c.members(s);
    if (c.source(s) == 1) {
      CHECK(std::vector<NodeId>(m.begin(), m.end()) == std::vector<NodeId>{0, 1});
    } else {
      CHECK(std::vector<NodeId>(m.begin(), m.end()) == std::vector<NodeId>{0});
    }
  }
  const Graph zero = SpreadGraph(4, {{0, 1, 0.0}, {1, 2, 0.0}, {3, 2, 0.0}});
  const auto z = SampleRrSets(zero, 40, SamplingStrategy::kRandomSource, 3);
  for (std::size_t s = 0; s < z.set_count(); ++s) {
    REQUIRE(z.members(s).size() == 1);
    CHECK(z.members(s)[0] == z.source(s));
  }
}

TEST_CASE("sampling errors") {
  const Graph empty(std::vector<double>{}, std::vector<Edge>{});
  try {
    SampleRrSets(empty, 5, SamplingStrategy::kUniform, 1);
    FAIL("expected EmptyGraph");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyGraph);
  }
  const Graph g = SpreadGraph(2, {{0, 1, 0.5}});
  CHECK_THROWS_AS(SampleRrSets(g, 0, SamplingStrategy::kUniform, 1), Error);
}

TEST_CASE("uniform strategy sources every node equally") {
  const Graph g = testing::RandomGraph(30, 100, 9);
  const auto c = SampleRrSets(g, 30 * 7 + 5, SamplingStrategy::kUniform, 4);
  CHECK(c.set_count() == 210);
  CHECK(c.requested_count == 215);
  CHECK(c.warnings.size() == 1);
  std::map<NodeId, int> sources;
  for (std::size_t s = 0; s < c.set_count(); ++s) ++sources[c.source(s)];
  CHECK(sources.size() == 30);
  for (const auto& [v, count] : sources) CHECK(count == 7);

  const auto fallback = SampleRrSets(g, 12, SamplingStrategy::kUniform, 4);
  CHECK(fallback.set_count() == 12);
  CHECK(fallback.strategy == SamplingStrategy::kRandomSource);
  CHECK(fallback.warnings.size() == 1);
}

TEST_CASE("RR set structure and determinism across job counts") {
  const Graph g = testing::RandomGraph(60, 500, 31);
  for (auto strategy : {SamplingStrategy::kUniform, SamplingStrategy::kRandomSource}) {
    const auto a = SampleRrSets(g, 3000, strategy, 77, 1);
    const auto b = SampleRrSets(g, 3000, strategy, 77, 5);
    REQUIRE(a.set_count() == b.set_count());
    for (std::size_t s = 0; s < a.set_count(); ++s) {
      const auto m = a.members(s);
      CHECK(std::vector<NodeId>(m.begin(), m.end()) ==
            std::vector<NodeId>(b.members(s).begin(), b.members(s).end()));
      CHECK(a.source(s) == b.source(s));
      CHECK(std::is_sorted(m.begin(), m.end()));
      CHECK(std::adjacent_find(m.begin(), m.end()) == m.end());
      CHECK(std::binary_search(m.begin(), m.end(), a.source(s)));
      CHECK(m.size() <= g.node_count());
    }
    const auto other = SampleRrSets(g, 3000, strategy, 78, 1);
    bool differs = false;
    for (std::size_t s = 0; s < a.set_count() && !differs; ++s) {
      differs = a.members(s).size() != other.members(s).size();
    }
    CHECK(differs);
  }
}

TEST_CASE("coverage counting and removal") {
  auto c = Small();
  const std::vector<NodeId> ab{0, 1};
  CHECK(CoverageCounts(c, ab) == std::vector<std::uint64_t>{2, 2});
  CHECK(RemoveSetsCovering(c, 0) == 2);
  CHECK(CoverageCounts(c, ab) == std::vector<std::uint64_t>{0, 1});
  CHECK(c.alive_count() == 1);

  RRSetCollection wide(4, {{0, 1}, {0}, {1}}, {0, 0, 1});
  const std::vector<NodeId> absent{3};
  CHECK(CoverageCounts(wide, absent) == std::vector<std::uint64_t>{0});
  CHECK(RemoveSetsCovering(wide, 3) == 0);

  const Graph g = testing::RandomGraph(25, 120, 2);
  auto sampled = SampleRrSets(g, 500, SamplingStrategy::kUniform, 1);
  std::size_t total = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    total += RemoveSetsCovering(sampled, v);
    CHECK(sampled.coverage(v) == 0);
  }
  CHECK(total == sampled.set_count());
  CHECK(sampled.alive_count() == 0);
}

TEST_CASE("shared set counts") {
  // [{a,b},{a},{b,a}]
  RRSetCollection c(2, {{0, 1}, {0}, {1, 0}}, {0, 0, 1});
  CHECK(SharedRrCount(c, 0, 1) == 2);
  RRSetCollection disjoint(3, {{0}, {1}, {2}}, {0, 1, 2});
  CHECK(SharedRrCount(disjoint, 0, 1) == 0);
  try {
    SharedRrCount(c, 1, 1);
    FAIL("expected SameNode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSameNode);
  }
}

TEST_CASE("shared counts are symmetric and match pairwise intersection") {
  const Graph g = testing::RandomGraph(20, 90, 13);
  auto c = SampleRrSets(g, 2000, SamplingStrategy::kRandomSource, 6);
  std::vector<std::set<NodeId>> sets;
  for (std::size_t s = 0; s < c.set_count(); ++s) {
    sets.emplace_back(c.members(s).begin(), c.members(s).end());
  }
  RemoveSetsCovering(c, 4);
  RemoveSetsCovering(c, 11);
  for (NodeId i = 0; i < 20; ++i) {
    for (NodeId j = 0; j < 20; ++j) {
      if (i == j) continue;
      std::uint64_t all = 0, alive = 0;
      for (std::size_t s = 0; s < sets.size(); ++s) {
        if (sets[s].count(i) && sets[s].count(j)) {
          ++all;
          alive += c.alive(s);
        }
      }
      CHECK(c.SharedCount(i, j, SetScope::kAll) == all);
      CHECK(c.SharedCount(i, j, SetScope::kAlive) == alive);
      CHECK(c.SharedCount(i, j) == c.SharedCount(j, i));
    }
  }
  // Index is the inverse of membership over alive sets.
  for (NodeId v = 0; v < 20; ++v) {
    std::vector<std::uint32_t> expected;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      if (c.alive(s) && sets[s].count(v)) expected.push_back(static_cast<std::uint32_t>(s));
    }
    CHECK(c.containing(v, SetScope::kAlive) == expected);
    CHECK(c.coverage(v) == expected.size());
  }
}

TEST_CASE("coverage fraction estimates influence plus one") {
  const Graph g = testing::RandomGraph(8, 11, 41);
  const std::uint64_t count = 8 * 40'000;
  for (auto strategy : {SamplingStrategy::kUniform, SamplingStrategy::kRandomSource}) {
    const auto c = SampleRrSets(g, count, strategy, 5);
    const double n = static_cast<double>(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const double sigma = ExactInfluence(g, u) + 1;
      const double p = sigma / n;
      const double frac =
          static_cast<double>(c.coverage(u)) / static_cast<double>(c.set_count());
      const double se = std::sqrt(p * (1 - p) / static_cast<double>(c.set_count()));
      CHECK(std::abs(frac - p) <= 3 * se + 1e-12);
    }
  }
}

TEST_CASE("binary dump round-trips and rejects corrupt input") {
  const Graph g = testing::RandomGraph(15, 60, 8);
  auto c = SampleRrSets(g, 300, SamplingStrategy::kUniform, 12);
  std::stringstream buf;
  WriteRrSets(buf, c);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "HIRR");
  std::istringstream in(bytes);
  const auto back = ReadRrSets(in);
  CHECK(back.node_count() == c.node_count());
  CHECK(back.set_count() == c.set_count());
  CHECK(back.seed == 12);
  CHECK(back.strategy == SamplingStrategy::kUniform);
  for (std::size_t s = 0; s < c.set_count(); ++s) {
    CHECK(back.source(s) == c.source(s));
    CHECK(std::equal(back.members(s).begin(), back.members(s).end(),
                     c.members(s).begin(), c.members(s).end()));
  }
  // Little-endian header: N follows magic and version.
  CHECK(static_cast<unsigned char>(bytes[8]) == 15);

  std::istringstream bad_magic("HIRX" + bytes.substr(4));
  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  for (auto* stream : {&bad_magic, &truncated}) {
    try {
      ReadRrSets(*stream);
      FAIL("expected an I/O error");
    } catch (const Error& e) {
      CHECK(e.is_io());
    }
  }
}
