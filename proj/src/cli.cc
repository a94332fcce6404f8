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

#include "heteroim/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "heteroim/error.hpp"
#include "heteroim/graph.hpp"
#include "heteroim/influence.hpp"
#include "heteroim/metrics.hpp"
#include "heteroim/random.hpp"
#include "heteroim/recommender.hpp"
#include "heteroim/rrset.hpp"
#include "heteroim/synth.hpp"
#include "heteroim/tsv.hpp"

namespace heteroim::cli {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

Error Invalid(const std::string& what) {
  return Error(ErrorCode::kInvalidParameters, what);
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

std::uint64_t ParseCount(const std::string& text, const std::string& what) {
  return tsv::ParseUInt(text, what, 0);
}

// "10x10,5" -> ten 10s then a 5.
std::vector<std::size_t> ParseDegrees(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : SplitList(text)) {
    const auto x = item.find('x');
    if (x == std::string::npos) {
      out.push_back(ParseCount(item, "--degrees"));
    } else {
      const auto value = ParseCount(item.substr(0, x), "--degrees");
      const auto times = ParseCount(item.substr(x + 1), "--degrees");
      out.insert(out.end(), times, value);
    }
  }
  return out;
}

std::vector<std::size_t> ParseKs(const std::string& text) {
  std::vector<std::size_t> ks;
  for (const auto& item : SplitList(text)) {
    const auto k = ParseCount(item, "--k");
    if (k < 1) throw Invalid("K values must be >= 1");
    ks.push_back(k);
  }
  return ks;
}

// NAME=FILE; a bare FILE is named by its stem.
std::pair<std::string, std::string> SplitNamed(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) return {fs::path(arg).stem().string(), arg};
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

template <typename Fn>
void WithOutput(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file = tsv::OpenOutput(path);
  fn(file);
  file.flush();
  if (!file) throw Error(ErrorCode::kIo, fmt::format("failed writing {}", path));
}

void PrintWarnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

std::uint64_t RequireSeed(const std::optional<std::uint64_t>& seed,
                          const std::string& what) {
  if (!seed) throw Invalid(what + " is stochastic and requires --seed");
  return *seed;
}

// ---------------------------------------------------------------------------

struct GraphArgs {
  std::string nodes;
  std::string edges;
  std::string inviters;
  std::string idmap;
};

void AddGraphArgs(CLI::App* sub, GraphArgs& args, bool inviters) {
  sub->add_option("--nodes", args.nodes, "node file: id<TAB>accept_prob")->required();
  sub->add_option("--edges", args.edges, "edge file: src<TAB>dst<TAB>invite_prob")
      ->required();
  if (inviters) {
    sub->add_option("--inviters", args.inviters, "inviter file: one id per line")
        ->required();
  }
  sub->add_option("--idmap", args.idmap,
                  "write the external-to-internal id map here");
}

LoadedGraph Load(const GraphArgs& args) {
  auto loaded = LoadGraphFiles(args.nodes, args.edges);
  if (!args.idmap.empty()) {
    std::ofstream out = tsv::OpenOutput(args.idmap);
    WriteIdMap(out, loaded.ids);
  }
  return loaded;
}

struct RrArgs {
  std::size_t k = 3;
  double epsilon = 0.1;
  std::optional<double> delta;
  std::uint64_t count = 0;
  std::uint64_t cap = kDefaultRnCap;
  bool random_source = false;
  bool no_hsp = false;
  std::string rrsets;
};

void AddRrArgs(CLI::App* sub, RrArgs& args, bool loadable) {
  sub->add_option("--eps", args.epsilon, "RN error constant epsilon");
  sub->add_option("--delta", args.delta, "RN error constant delta (default 1/N)");
  sub->add_option("--count", args.count, "RR set count, overriding RN");
  sub->add_option("--cap", args.cap, "upper bound on RN");
  sub->add_flag("--random-source", args.random_source,
                "draw RR sources at random instead of uniformly per node");
  sub->add_flag("--no-hsp", args.no_hsp,
                "sample with accept probabilities set to 1");
  if (loadable) {
    sub->add_option("--rrsets", args.rrsets, "load RR sets instead of sampling");
  }
}

RRSetCollection BuildCollection(const Graph& g, const InviterSet& inviters,
                                const RrArgs& args,
                                const std::optional<std::uint64_t>& seed,
                                unsigned jobs, std::ostream& err) {
  if (!args.rrsets.empty()) {
    auto c = ReadRrSetsFile(args.rrsets);
    if (c.node_count() != g.node_count()) {
      throw Error(ErrorCode::kUniverseMismatch,
                  fmt::format("RR sets cover {} nodes but the graph has {}",
                              c.node_count(), g.node_count()));
    }
    return c;
  }
  const std::uint64_t s = RequireSeed(seed, "RR sampling");
  std::uint64_t count = args.count;
  if (count == 0) {
    RNParameters p;
    p.node_count = g.node_count();
    p.k = args.k;
    p.epsilon = args.epsilon;
    p.delta = args.delta.value_or(1.0 / static_cast<double>(g.node_count()));
    p.cap = args.cap;
    for (NodeId u : inviters.members) p.inviter_out_degrees.push_back(g.out_degree(u));
    const auto rn = ComputeRn(p);
    PrintWarnings(err, rn.warnings);
    count = rn.rn;
  }
  const auto strategy = args.random_source ? SamplingStrategy::kRandomSource
                                           : SamplingStrategy::kUniform;
  RRSetCollection c;
  if (args.no_hsp) {
    const Graph homogeneous =
        g.WithAcceptProbs(std::vector<double>(g.node_count(), 1.0));
    c = SampleRrSets(homogeneous, count, strategy, s, jobs);
  } else {
    c = SampleRrSets(g, count, strategy, s, jobs);
  }
  PrintWarnings(err, c.warnings);
  return c;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string out_dir;
  SynthConfig cfg;
  std::string degree_model = "uniform";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> event_seed;
};

int RunSynth(SynthArgs& a, std::ostream& err) {
  a.cfg.seed = RequireSeed(a.seed, "synth");
  if (a.degree_model == "uniform") {
    a.cfg.degree_model = DegreeModel::kUniform;
  } else if (a.degree_model == "powerlaw") {
    a.cfg.degree_model = DegreeModel::kPowerLaw;
  } else {
    throw Invalid("--degree-model must be uniform or powerlaw");
  }
  const Graph g = GenerateGraph(a.cfg);
  const std::uint64_t event_seed =
      a.event_seed.value_or(DeriveStream(a.cfg.seed, 0x5eed)());
  const SynthEvent event = GenerateEventLog(g, a.cfg, event_seed);
  const IdMap ids = IdMap::Identity(g.node_count());

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, fmt::format("cannot create {}", a.out_dir));
  const fs::path dir(a.out_dir);
  WithOutput((dir / "nodes.tsv").string(), err,
             [&](std::ostream& o) { WriteNodes(o, g, ids); });
  WithOutput((dir / "edges.tsv").string(), err,
             [&](std::ostream& o) { WriteEdges(o, g, ids); });
  WithOutput((dir / "inviters.tsv").string(), err,
             [&](std::ostream& o) { WriteInviters(o, event.inviters, ids); });
  WithOutput((dir / "log.tsv").string(), err,
             [&](std::ostream& o) { WriteEventLog(o, event.log, ids); });
  if (g.edge_count() != a.cfg.target_m) {
    err << fmt::format("warning: realized {} edges of {} requested\n",
                       g.edge_count(), a.cfg.target_m);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct InfluenceArgs {
  GraphArgs graph;
  std::string method = "heteroinf";
  std::size_t w = kDefaultCapability;
  bool unlimited = false;
  std::size_t runs = 10'000;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string out;
};

int RunInfluence(const InfluenceArgs& a, std::ostream& out) {
  const auto loaded = Load(a.graph);
  const Graph& g = loaded.graph;
  InfluenceScores scores;
  if (a.method == "heteroinf") {
    scores = HeteroInfScores(g, a.unlimited ? kUnlimitedCapability : a.w, a.jobs);
  } else if (a.method == "degree") {
    scores = DegreeScores(g);
  } else if (a.method == "coreness") {
    scores = CorenessScores(g);
  } else if (a.method == "mc") {
    scores = McScores(g, a.runs, RequireSeed(a.seed, "mc influence"), a.jobs);
  } else if (a.method == "exact") {
    scores = ExactScores(g);
  } else {
    throw Invalid("--method must be heteroinf, degree, coreness, mc or exact");
  }
  WithOutput(a.out, out, [&](std::ostream& o) { WriteScores(o, scores, loaded.ids); });
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct RnArgs {
  std::size_t n = 0;
  std::size_t k = 3;
  std::optional<std::size_t> chi;
  double epsilon = 0.1;
  std::optional<double> delta;
  std::string degrees;
  std::uint64_t cap = kDefaultRnCap;
};

int RunRn(const RnArgs& a, std::ostream& out, std::ostream& err) {
  RNParameters p;
  p.node_count = a.n;
  p.k = a.k;
  p.epsilon = a.epsilon;
  p.delta = a.delta.value_or(a.n > 0 ? 1.0 / static_cast<double>(a.n) : 0.0);
  p.cap = a.cap;
  p.inviter_out_degrees = ParseDegrees(a.degrees);
  if (a.chi && *a.chi != p.chi()) {
    throw Invalid(fmt::format("--chi {} but --degrees lists {} inviters", *a.chi,
                              p.chi()));
  }
  const auto r = ComputeRn(p);
  PrintWarnings(err, r.warnings);
  out << "i_max=" << r.i_max << '\n'
      << "theta=" << tsv::FormatDouble(r.theta) << '\n'
      << "rn=" << r.rn << '\n'
      << "rn_exact=" << tsv::FormatDouble(r.rn_exact) << '\n'
      << "capped=" << (r.capped ? 1 : 0) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  GraphArgs graph;
  RrArgs rr;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string out;
};

int RunSample(const SampleArgs& a, std::ostream& err) {
  const auto loaded = Load(a.graph);
  const auto inviters = LoadInvitersFile(a.graph.inviters, loaded);
  const auto c = BuildCollection(loaded.graph, inviters, a.rr, a.seed, a.jobs, err);
  WriteRrSetsFile(a.out, c);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct RecommendArgs {
  GraphArgs graph;
  RrArgs rr;
  std::string method = "heteroim";
  std::size_t w = kDefaultCapability;
  bool no_first = false;
  bool no_second = false;
  bool no_rerank = false;
  std::string rho_over = "alive";
  double damping = PprOptions{}.damping;
  double tolerance = PprOptions{}.tolerance;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string out;
};

int RunRecommend(RecommendArgs& a, std::ostream& out, std::ostream& err) {
  const auto loaded = Load(a.graph);
  const Graph& g = loaded.graph;
  const auto inviters = LoadInvitersFile(a.graph.inviters, loaded);
  if (a.rr.k < 1) throw Invalid("--k must be >= 1");
  RecommendationTable table;
  if (a.method == "heteroir") {
    HeteroIrOptions opts;
    opts.k = a.rr.k;
    opts.w = a.w;
    opts.no_first = a.no_first;
    opts.no_second = a.no_second;
    opts.jobs = a.jobs;
    table = HeteroIr(g, inviters, opts);
  } else if (a.method == "heteroim") {
    HeteroImOptions opts;
    opts.k = a.rr.k;
    opts.rerank = !a.no_rerank;
    if (a.rho_over == "alive") {
      opts.rho_scope = SetScope::kAlive;
    } else if (a.rho_over == "all") {
      opts.rho_scope = SetScope::kAll;
    } else {
      throw Invalid("--rho-over must be alive or all");
    }
    auto collection = BuildCollection(g, inviters, a.rr, a.seed, a.jobs, err);
    const auto candidates = DeriveCandidates(g, inviters);
    auto result = HeteroIm(g, inviters, candidates, collection, opts);
    PrintWarnings(err, result.warnings);
    table = std::move(result.table);
  } else if (a.method == "ppr") {
    PprOptions opts;
    opts.damping = a.damping;
    opts.tolerance = a.tolerance;
    table = PprTable(g, inviters, a.rr.k, opts, a.jobs);
  } else {
    throw Invalid("--method must be heteroir, heteroim or ppr");
  }
  WithOutput(a.out, out,
             [&](std::ostream& o) { WriteRecommendations(o, table, loaded.ids); });
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string log;
  std::string inviters;
  std::string nodes;
  std::vector<std::string> recs;
  std::string ks = "1,2,3";
  std::string ideal = "auto";
  std::vector<std::string> influence;
  std::string truth;
  std::string hit_ks;
  std::string out;
  std::string json;
};

// Scores keyed by external id, ordered ascending.
std::map<ExternalId, double> ReadScoresFile(const std::string& path) {
  std::ifstream in = tsv::OpenInput(path);
  std::map<ExternalId, double> scores;
  tsv::ForEachRow(in, "scores", [&](const auto& f, std::size_t line) {
    tsv::ExpectColumns(f, 2, "scores", line);
    const auto id = tsv::ParseUInt(f[0], "scores", line);
    if (!scores.emplace(id, tsv::ParseDouble(f[1], "scores", line)).second) {
      throw Error(ErrorCode::kMalformedRow,
                  fmt::format("scores line {}: duplicate id {}", line, id));
    }
  });
  return scores;
}

InfluenceScores Align(const std::string& method,
                      const std::map<ExternalId, double>& scores,
                      const std::map<ExternalId, double>& universe) {
  if (scores.size() != universe.size() ||
      !std::equal(scores.begin(), scores.end(), universe.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw Error(ErrorCode::kUniverseMismatch,
                fmt::format("{} scores cover a different node set than the truth",
                            method));
  }
  InfluenceScores aligned{method, {}};
  aligned.scores.reserve(scores.size());
  for (const auto& [id, s] : scores) aligned.scores.push_back(s);
  return aligned;
}

int RunEval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto ks = ParseKs(a.ks);
  IdealMode mode;
  if (a.ideal == "auto") {
    mode = IdealMode::kAuto;
  } else if (a.ideal == "exact") {
    mode = IdealMode::kExact;
  } else if (a.ideal == "greedy") {
    mode = IdealMode::kGreedy;
  } else {
    throw Invalid("--ideal must be auto, exact or greedy");
  }

  IdMap ids;
  if (!a.nodes.empty()) {
    std::ifstream in = tsv::OpenInput(a.nodes);
    tsv::ForEachRow(in, "nodes", [&](const auto& f, std::size_t line) {
      ids.Intern(tsv::ParseUInt(f[0], "nodes", line));
    });
  }
  std::vector<RecommendationTable> tables;
  for (const auto& arg : a.recs) {
    const auto [name, path] = SplitNamed(arg);
    std::ifstream in = tsv::OpenInput(path);
    tables.push_back(ReadRecommendations(in, ids, name));
  }
  EventLog log;
  if (!a.log.empty()) {
    std::ifstream in = tsv::OpenInput(a.log);
    std::vector<ExternalId> roots;
    if (!a.inviters.empty()) {
      std::ifstream roots_in = tsv::OpenInput(a.inviters);
      tsv::ForEachRow(roots_in, "inviters", [&](const auto& f, std::size_t line) {
        roots.push_back(tsv::ParseUInt(f[0], "inviters", line));
      });
    }
    log = ReadEventLog(in, ids, roots);
  } else if (!tables.empty()) {
    throw Invalid("--recs requires --log");
  }

  EvalReport report;
  for (const auto& table : tables) {
    EvaluateTable(report, table, log, ks, mode);
  }
  if (!a.influence.empty()) {
    if (a.truth.empty()) throw Invalid("--influence requires --truth");
    const auto truth_raw = ReadScoresFile(a.truth);
    const auto truth = Align("truth", truth_raw, truth_raw);
    const auto hit_ks = a.hit_ks.empty() ? ks : ParseKs(a.hit_ks);
    for (const auto& arg : a.influence) {
      const auto [name, path] = SplitNamed(arg);
      const auto predicted = Align(name, ReadScoresFile(path), truth_raw);
      for (std::size_t k : hit_ks) {
        report.Add(name, "hit", k, HitAtK(predicted, truth, k));
      }
    }
  }
  for (const auto& note : report.notes) err << "note: " << note << '\n';
  WithOutput(a.out, out, [&](std::ostream& o) { WriteReport(o, report); });
  if (!a.json.empty()) {
    WithOutput(a.json, out, [&](std::ostream& o) { WriteReportJson(o, report); });
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Heterogeneous influence estimation and friend recommendation",
               "heteroim"};
  app.require_subcommand(1);
  app.fallthrough(false);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a graph and an event log");
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--n", synth.cfg.n, "node count");
  synth_cmd->add_option("--m", synth.cfg.target_m, "target edge count");
  synth_cmd->add_option("--degree-model", synth.degree_model, "uniform or powerlaw");
  synth_cmd->add_option("--exponent", synth.cfg.exponent, "power-law exponent");
  synth_cmd->add_option("--invite-alpha", synth.cfg.invite.alpha);
  synth_cmd->add_option("--invite-beta", synth.cfg.invite.beta);
  synth_cmd->add_option("--accept-alpha", synth.cfg.accept.alpha);
  synth_cmd->add_option("--accept-beta", synth.cfg.accept.beta);
  synth_cmd->add_option("--invite-cap", synth.cfg.invite_cap,
                        "max invitations per active user");
  synth_cmd->add_option("--inviter-fraction", synth.cfg.inviter_fraction,
                        "share of nodes active at the start of the event");
  synth_cmd->add_option("--seed", synth.seed, "graph seed");
  synth_cmd->add_option("--event-seed", synth.event_seed,
                        "event seed (default derived from --seed)");

  InfluenceArgs influence;
  auto* influence_cmd = app.add_subcommand("influence", "score node influence");
  AddGraphArgs(influence_cmd, influence.graph, false);
  influence_cmd->add_option("--method", influence.method,
                            "heteroinf, degree, coreness, mc or exact");
  influence_cmd->add_option("--w", influence.w, "interaction capability");
  influence_cmd->add_flag("--unlimited", influence.unlimited,
                          "sum every out-edge (w = infinity)");
  influence_cmd->add_option("--runs", influence.runs, "Monte Carlo runs per node");
  influence_cmd->add_option("--seed", influence.seed);
  influence_cmd->add_option("--jobs", influence.jobs);
  influence_cmd->add_option("--out", influence.out, "output file (default stdout)");

  RnArgs rn;
  auto* rn_cmd = app.add_subcommand("rn", "print the RR set budget");
  rn_cmd->add_option("--n", rn.n, "node count")->required();
  rn_cmd->add_option("--k", rn.k, "recommendation length");
  rn_cmd->add_option("--chi", rn.chi, "inviter count (checked against --degrees)");
  rn_cmd->add_option("--eps", rn.epsilon);
  rn_cmd->add_option("--delta", rn.delta, "default 1/n");
  rn_cmd->add_option("--degrees", rn.degrees,
                     "inviter out-degrees, e.g. 10x10 or 4,7,9")
      ->required();
  rn_cmd->add_option("--cap", rn.cap);

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "sample and dump RR sets");
  AddGraphArgs(sample_cmd, sample.graph, true);
  sample_cmd->add_option("--k", sample.rr.k, "recommendation length for RN");
  AddRrArgs(sample_cmd, sample.rr, false);
  sample_cmd->add_option("--seed", sample.seed);
  sample_cmd->add_option("--jobs", sample.jobs);
  sample_cmd->add_option("--out", sample.out, "binary RR set file")->required();

  RecommendArgs rec;
  auto* rec_cmd = app.add_subcommand("recommend", "build recommendation lists");
  AddGraphArgs(rec_cmd, rec.graph, true);
  rec_cmd->add_option("--method", rec.method, "heteroir, heteroim or ppr");
  rec_cmd->add_option("--k", rec.rr.k, "list length");
  rec_cmd->add_option("--w", rec.w, "interaction capability");
  rec_cmd->add_flag("--no-first", rec.no_first, "drop the direct spread term");
  rec_cmd->add_flag("--no-second", rec.no_second, "drop the second-order term");
  rec_cmd->add_flag("--no-rerank", rec.no_rerank, "order lists by coverage only");
  rec_cmd->add_option("--rho-over", rec.rho_over,
                      "shared-set counts over alive or all sets");
  AddRrArgs(rec_cmd, rec.rr, true);
  rec_cmd->add_option("--damping", rec.damping, "PPR restart probability");
  rec_cmd->add_option("--tol", rec.tolerance, "PPR L1 tolerance");
  rec_cmd->add_option("--seed", rec.seed);
  rec_cmd->add_option("--jobs", rec.jobs);
  rec_cmd->add_option("--out", rec.out, "output file (default stdout)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate recommendations and scores");
  eval_cmd->add_option("--log", eval.log, "event log");
  eval_cmd->add_option("--inviters", eval.inviters,
                       "users active before the first logged row");
  eval_cmd->add_option("--nodes", eval.nodes, "node file fixing the id universe");
  eval_cmd->add_option("--recs", eval.recs, "NAME=FILE recommendation tables");
  eval_cmd->add_option("--k", eval.ks, "comma-separated K values");
  eval_cmd->add_option("--ideal", eval.ideal, "auto, exact or greedy");
  eval_cmd->add_option("--influence", eval.influence, "NAME=FILE influence scores");
  eval_cmd->add_option("--truth", eval.truth, "ground-truth influence scores");
  eval_cmd->add_option("--hit-k", eval.hit_ks, "K values for Hit@K (default --k)");
  eval_cmd->add_option("--out", eval.out, "text report (default stdout)");
  eval_cmd->add_option("--json", eval.json, "JSON report");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitValidation;
  }

  try {
    if (synth_cmd->parsed()) return RunSynth(synth, err);
    if (influence_cmd->parsed()) return RunInfluence(influence, out);
    if (rn_cmd->parsed()) return RunRn(rn, out, err);
    if (sample_cmd->parsed()) return RunSample(sample, err);
    if (rec_cmd->parsed()) return RunRecommend(rec, out, err);
    if (eval_cmd->parsed()) return RunEval(eval, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_io() ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  err << app.help();
  return kExitValidation;
}

}  // namespace heteroim::cli
