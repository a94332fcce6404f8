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

#include <algorithm>
#include <sstream>

#include "heteroim/error.hpp"
#include "heteroim/graph.hpp"
#include "test_util.hpp"

using namespace heteroim;

namespace {

LoadedGraph LoadText(const std::string& nodes, const std::string& edges) {
  std::istringstream n(nodes), e(edges);
  return LoadGraph(n, e);
}

ErrorCode LoadError(const std::string& nodes, const std::string& edges) {
  try {
    LoadText(nodes, edges);
  } catch (const Error& err) {
    return err.code();
  }
  FAIL("expected a load error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("two-node graph loads with its spread probability") {
  const auto loaded = LoadText("0\t1.0\n1\t0.5\n", "0\t1\t0.8\n");
  const Graph& g = loaded.graph;
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(SpreadProb(g, 0, 1) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(g.in_neighbors(1).size() == 1);
  CHECK(g.in_neighbors(1)[0] == 0);
}

TEST_CASE("loader rejects invalid rows") {
  const std::string nodes = "0\t1.0\n1\t0.5\n";
  CHECK(LoadError(nodes, "0\t0\t0.5\n") == ErrorCode::kSelfLoop);
  CHECK(LoadError(nodes, "0\t7\t0.5\n") == ErrorCode::kDanglingEndpoint);
  CHECK(LoadError(nodes, "0\t1\n") == ErrorCode::kMalformedRow);
  CHECK(LoadError(nodes, "0\t1\tabc\n") == ErrorCode::kMalformedRow);
  CHECK(LoadError("0\tx\n", "") == ErrorCode::kMalformedRow);
  CHECK(LoadError("0\t1.0\n0\t0.2\n", "") == ErrorCode::kMalformedRow);
  CHECK(LoadError(nodes, "0\t1\t1.5\n") == ErrorCode::kProbabilityOutOfRange);
  CHECK(LoadError("0\t-0.1\n", "") == ErrorCode::kProbabilityOutOfRange);
  CHECK(LoadError(nodes, "0\t1\t0.5\n0\t1\t0.6\n") == ErrorCode::kDuplicateEdge);
}

TEST_CASE("external ids are remapped densely in first-appearance order") {
  const auto loaded = LoadText("1000\t0.1\n7\t0.2\n42\t0.3\n", "42\t1000\t0.5\n");
  CHECK(loaded.ids.External(0) == 1000);
  CHECK(loaded.ids.External(1) == 7);
  CHECK(loaded.ids.External(2) == 42);
  CHECK(loaded.graph.has_edge(2, 0));
  CHECK(loaded.graph.accept_prob(1) == 0.2);
  std::ostringstream map;
  WriteIdMap(map, loaded.ids);
  CHECK(map.str() == "1000\t0\n7\t1\n42\t2\n");
}

TEST_CASE("spread probability arithmetic") {
  const Graph g(std::vector<double>{1.0, 0.5, 0.3, 1.0},
                std::vector<Edge>{{0, 1, 0.8}, {0, 2, 0.0}, {1, 3, 1.0}});
  CHECK(SpreadProb(g, 0, 1) == doctest::Approx(0.4));
  CHECK(SpreadProb(g, 0, 2) == 0.0);
  CHECK(SpreadProb(g, 1, 3) == 1.0);
  CHECK_THROWS_AS(SpreadProb(g, 1, 0), Error);
  try {
    SpreadProb(g, 3, 0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoSuchEdge);
  }
}

TEST_CASE("candidate derivation") {
  // a=0, b=1, c=2
  const Graph g1(std::vector<double>(3, 1.0), {{0, 1, 0.5}, {0, 2, 0.5}});
  CHECK(DeriveCandidates(g1, MakeInviterSet(g1, {0})).members ==
        std::vector<NodeId>{1, 2});

  const Graph g2(std::vector<double>(2, 1.0), {{0, 1, 0.5}, {1, 0, 0.5}});
  CHECK(DeriveCandidates(g2, MakeInviterSet(g2, {0, 1})).members ==
        std::vector<NodeId>{0, 1});

  const Graph g3(std::vector<double>(2, 1.0), {{1, 0, 0.5}});
  CHECK(DeriveCandidates(g3, MakeInviterSet(g3, {0})).empty());

  try {
    DeriveCandidates(g1, InviterSet{});
    FAIL("expected EmptyInviterSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyInviterSet);
  }
  CHECK_THROWS_AS(MakeInviterSet(g1, {5}), Error);
}

TEST_CASE("inviter file resolves external ids") {
  const auto loaded = LoadText("10\t1\n20\t1\n", "10\t20\t0.5\n");
  std::istringstream good("20\n10\n20\n");
  CHECK(LoadInviters(good, loaded).members == std::vector<NodeId>{0, 1});
  std::istringstream bad("30\n");
  try {
    LoadInviters(bad, loaded);
    FAIL("expected UnknownNode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownNode);
  }
}

TEST_CASE("in-adjacency is the exact transpose of out-adjacency") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = testing::RandomGraph(40, 300, seed);
    std::vector<std::tuple<NodeId, NodeId, double>> forward, rebuilt;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const auto t = g.out_neighbors(u);
      const auto p = g.out_invite_probs(u);
      const auto s = g.out_spread_probs(u);
      CHECK(std::is_sorted(t.begin(), t.end()));
      for (std::size_t i = 0; i < t.size(); ++i) {
        forward.emplace_back(u, t[i], p[i]);
        CHECK(s[i] >= 0.0);
        CHECK(s[i] <= std::min(p[i], g.accept_prob(t[i])));
      }
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const auto src = g.in_neighbors(v);
      const auto p = g.in_invite_probs(v);
      for (std::size_t i = 0; i < src.size(); ++i) rebuilt.emplace_back(src[i], v, p[i]);
    }
    std::sort(rebuilt.begin(), rebuilt.end());
    CHECK(forward == rebuilt);
  }
}

TEST_CASE("loading is deterministic and writers round-trip") {
  const Graph g = testing::RandomGraph(30, 120, 11);
  const IdMap ids = IdMap::Identity(g.node_count());
  const auto nodes = testing::ToString([&](std::ostream& o) { WriteNodes(o, g, ids); });
  const auto edges = testing::ToString([&](std::ostream& o) { WriteEdges(o, g, ids); });
  const auto a = LoadText(nodes, edges);
  const auto b = LoadText(nodes, edges);
  const auto a_edges = a.graph.edges();
  const auto b_edges = b.graph.edges();
  REQUIRE(a_edges.size() == g.edge_count());
  for (std::size_t i = 0; i < a_edges.size(); ++i) {
    CHECK(a_edges[i].source == b_edges[i].source);
    CHECK(a_edges[i].target == b_edges[i].target);
    CHECK(a_edges[i].invite_prob == b_edges[i].invite_prob);
    CHECK(a_edges[i].invite_prob == g.edges()[i].invite_prob);
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    CHECK(a.graph.accept_prob(v) == g.accept_prob(v));
    CHECK(a.ids.External(v) == b.ids.External(v));
  }
  CHECK(testing::ToString([&](std::ostream& o) { WriteEdges(o, a.graph, a.ids); }) ==
        edges);
}

TEST_CASE("empty lines are ignored and missing files are I/O errors") {
  const auto loaded = LoadText("0\t1\n\n1\t1\n", "\n0\t1\t0.5\n");
  CHECK(loaded.graph.node_count() == 2);
  try {
    LoadGraphFiles("/nonexistent/nodes.tsv", "/nonexistent/edges.tsv");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.is_io());
  }
}
