#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

#include "oracles.hpp"
#include "properties.hpp"
#include "scirank/auth.hpp"
#include "scirank/synthetic.hpp"

using namespace scirank;

namespace {

using Strings = std::vector<std::string>;
using Edges = std::vector<std::pair<std::string, std::string>>;
using PairSet = std::set<std::pair<std::string, std::string>>;

BibRecord by(std::string id, Strings authors) {
  return {std::move(id), "t", "", {}, std::move(authors), std::nullopt, std::nullopt};
}

RankedList listing(const Corpus& c) {
  RankedList r;
  for (const auto& rec : c.records()) r.entries.push_back({rec.doc_id, 1.0});
  return r;
}

}  // namespace

TEST(Graph, OneBylineIsATriangle) {
  Corpus c({by("d", {"A", "B", "C"})});
  auto g = build_graph(listing(c), c);
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.edges(), (Edges{{"A", "B"}, {"A", "C"}, {"B", "C"}}));
}

TEST(Graph, SingleAuthorsAreIsolated) {
  Corpus c({by("d1", {"A"}), by("d2", {"B"})});
  auto g = build_graph(listing(c), c);
  EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Graph, EdgesMatchPairEnumeration) {
  auto c = synthetic::random_corpus(8, {.n_docs = 50});
  auto g = build_graph(listing(c), c);
  PairSet want;
  std::set<std::string> nodes;
  for (const auto& r : c.records())
    for (const auto& a : r.authors) {
      nodes.insert(a);
      for (const auto& b : r.authors)
        if (a < b) want.insert({a, b});
    }
  EXPECT_EQ(g.names(), Strings(nodes.begin(), nodes.end()));
  auto got = g.edges();
  EXPECT_EQ(PairSet(got.begin(), got.end()), want);
}

TEST(Betweenness, Path) {
  auto m = betweenness(CoauthorGraph({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}}));
  EXPECT_EQ(*m.get("B"), 1.0);
  EXPECT_EQ(*m.get("A"), 0.0);
  EXPECT_EQ(*m.get("C"), 0.0);
}

TEST(Betweenness, Star) {
  auto m = betweenness(CoauthorGraph({"X", "P", "Q", "R"}, {{"X", "P"}, {"X", "Q"}, {"X", "R"}}));
  EXPECT_EQ(*m.get("X"), 3.0);
  for (const char* leaf : {"P", "Q", "R"}) EXPECT_EQ(*m.get(leaf), 0.0);
  EXPECT_EQ(m.a_max(), 3.0);
}

TEST(Betweenness, CompleteGraph) {
  Strings n{"A", "B", "C", "D"};
  Edges e;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) e.push_back({n[i], n[j]});
  auto m = betweenness(CoauthorGraph(n, e));
  for (const auto& [_, v] : m.values()) EXPECT_EQ(v, 0.0);
}

TEST(Betweenness, MatchesPathEnumeration) {
  synthetic::Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    auto err = props::check_betweenness(rng, 7, 1e-9);
    ASSERT_TRUE(err.empty()) << "graph " << i << ": " << err;
  }
}

TEST(Betweenness, MatchesPairDependencyOnLargerGraphs) {
  synthetic::Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    std::size_t n = 10 + rng.below(40);
    auto adj = oracle::random_graph(rng, n, 3.0 / static_cast<double>(n));
    auto want = oracle::betweenness_by_counts(adj);
    auto got = betweenness(props::to_graph(adj));
    for (std::size_t v = 0; v < n; ++v) EXPECT_NEAR(*got.get(props::node_name(v)), want[v], 1e-9);
  }
}

TEST(Betweenness, ComponentsAreIndependent) {
  synthetic::Rng rng(31);
  auto a = oracle::random_graph(rng, 9, 0.35);
  auto b = oracle::random_graph(rng, 8, 0.35);
  oracle::Adj both = a;
  for (const auto& nb : b) {
    std::set<std::size_t> shifted;
    for (auto v : nb) shifted.insert(v + a.size());
    both.push_back(shifted);
  }
  auto ga = betweenness(props::to_graph(a));
  auto gb = betweenness(props::to_graph(b));
  auto gboth = betweenness(props::to_graph(both));
  for (std::size_t v = 0; v < a.size(); ++v)
    EXPECT_NEAR(*gboth.get(props::node_name(v)), *ga.get(props::node_name(v)), 1e-12);
  for (std::size_t v = 0; v < b.size(); ++v)
    EXPECT_NEAR(*gboth.get(props::node_name(v + a.size())), *gb.get(props::node_name(v)), 1e-12);
}

TEST(Betweenness, ParallelIsBitIdentical) {
  synthetic::Rng rng(5);
  auto g = props::to_graph(oracle::random_graph(rng, 300, 0.02));
  auto seq = betweenness(g, {.threads = 1});
  for (unsigned t : {2u, 3u, 8u, 0u}) {
    auto par = betweenness(g, {.threads = t});
    for (const auto& [name, v] : seq.values()) {
      double p = *par.get(name);
      EXPECT_EQ(std::memcmp(&p, &v, sizeof v), 0) << name << " threads=" << t;
    }
  }
}

TEST(Betweenness, NodeCeiling) {
  CoauthorGraph g({"A", "B", "C", "D"}, {{"A", "B"}});
  EXPECT_THROW(betweenness(g, {.max_nodes = 3}), GraphTooLarge);
  EXPECT_NO_THROW(betweenness(g, {.max_nodes = 4}));
}

TEST(Betweenness, EmptyGraph) { EXPECT_TRUE(betweenness(CoauthorGraph{}).empty()); }

TEST(Centrality, TopBreaksTiesByName) {
  CentralityMap m({{"C", 1.0}, {"A", 1.0}, {"B", 2.0}, {"D", 0.0}});
  auto top = m.top(3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].first, "B");
  EXPECT_EQ(top[1].first, "A");
  EXPECT_EQ(top[2].first, "C");
}

TEST(DocWeight, Examples) {
  CentralityMap m({{"A", 0.0}, {"B", 2.5}});
  EXPECT_EQ(doc_weight(by("d", {"A", "B"}), m), 2.5);
  EXPECT_EQ(doc_weight(by("d", {}), m), 0.0);
  EXPECT_EQ(doc_weight(by("d", {"Unknown"}), m), 0.0);
}

TEST(DocWeight, MatchesMaxOverLookups) {
  auto c = synthetic::random_corpus(12, {.n_docs = 20});
  auto cmap = betweenness(build_graph(listing(c), c));
  for (const auto& r : c.records()) {
    double want = 0.0;
    for (const auto& a : r.authors) want = std::max(want, cmap.values().at(a));
    EXPECT_EQ(doc_weight(r, cmap), want) << r.doc_id;
  }
}

TEST(AuthorRerank, AllZeroKeepsOrder) {
  Corpus c({by("z", {"A"}), by("y", {"B"}), by("x", {"C"})});
  auto in = listing(c);
  auto out = author_rerank(in, betweenness(build_graph(in, c)), c);
  EXPECT_EQ(out.doc_ids(), in.doc_ids());
  EXPECT_EQ(out.label, RankingLabel::AUTH);
}

TEST(AuthorRerank, MostCentralFirst) {
  Corpus c({by("d1", {"P"}), by("d2", {"X", "P"}), by("d3", {"X", "Q"}), by("d4", {"Q", "R"})});
  auto in = listing(c);
  auto out = author_rerank(in, betweenness(build_graph(in, c)), c);
  // Path P - X - Q - R: X and Q both mediate two pairs; d2 precedes d3 in the input.
  EXPECT_EQ(out.doc_ids(), (Strings{"d2", "d3", "d4", "d1"}));
}

TEST(AuthorRerank, MatchesBruteForceSort) {
  auto c = synthetic::random_corpus(14, {.n_docs = 40});
  synthetic::Rng rng(14);
  auto in = props::random_result(rng, c, 40);
  auto cmap = betweenness(build_graph(in, c));
  std::vector<std::pair<double, std::size_t>> keyed;
  for (std::size_t i = 0; i < in.entries.size(); ++i) {
    double w = 0.0;
    for (const auto& a : c.at(in.entries[i].doc_id).authors) w = std::max(w, cmap.values().at(a));
    keyed.push_back({-w, i});
  }
  std::sort(keyed.begin(), keyed.end());
  Strings want;
  for (auto& [_, i] : keyed) want.push_back(in.entries[i].doc_id);
  EXPECT_EQ(author_rerank(in, cmap, c).doc_ids(), want);
}

TEST(AuthorWeight, Examples) {
  CentralityMap m({{"A", 4.0}, {"B", 2.0}, {"L", 0.0}});
  EXPECT_EQ(author_weight(by("d", {"A"}), m), 1.0);
  EXPECT_EQ(author_weight(by("d", {"B"}), m), 0.5);
  EXPECT_EQ(author_weight(by("d", {"L"}), m), 0.0);
  EXPECT_EQ(author_weight(by("d", {"A"}), CentralityMap({{"A", 0.0}})), 0.0);
}

TEST(GraphFiles, Format) {
  CoauthorGraph g({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
  std::ostringstream e, n;
  write_edge_list(e, g);
  write_node_list(n, betweenness(g));
  EXPECT_EQ(e.str(), "A\tB\nB\tC\n");
  EXPECT_EQ(n.str(), "A\t0.000000\nB\t1.000000\nC\t0.000000\n");
}
