#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "scirank/search.hpp"
#include "scirank/synthetic.hpp"

using namespace scirank;

namespace {

BibRecord doc(std::string id, std::string title, std::vector<std::string> terms = {}) {
  return {std::move(id), std::move(title), "", std::move(terms), {}, std::nullopt, std::nullopt};
}

using Strings = std::vector<std::string>;

}  // namespace

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Financial Crisis!"), (Strings{"financial", "crisis"}));
  EXPECT_EQ(tokenize(""), Strings{});
  EXPECT_EQ(tokenize("tf-idf 2009"), (Strings{"tf", "idf", "2009"}));
  EXPECT_EQ(tokenize("a b cd"), Strings{"cd"});
  EXPECT_EQ(tokenize("Arbeitslosigkeit \xc3\xb6konomie"), (Strings{"arbeitslosigkeit", "\xc3\xb6konomie"}));
}

TEST(ControlledKey, Normalizes) {
  EXPECT_EQ(controlled_key("  Labor   Market\tPolicy "), "labor market policy");
}

TEST(Index, SingleDoc) {
  auto ix = build_index(Corpus({doc("d1", "unemployment")}));
  EXPECT_EQ(ix.df(Field::Freetext, "unemployment"), 1u);
}

TEST(Index, EmptyCorpus) {
  auto ix = build_index(Corpus{});
  EXPECT_EQ(ix.n_docs(), 0u);
  EXPECT_TRUE(ix.postings(Field::Freetext, "anything").empty());
  EXPECT_TRUE(search_all(ix, make_query("anything")).empty());
}

TEST(Index, DfMatchesScan) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto c = synthetic::random_corpus(seed, {.n_docs = 10});
    auto ix = build_index(c);
    std::map<std::string, std::size_t> free_df, ctl_df, auth_df;
    for (const auto& r : c.records()) {
      auto toks = tokenize(r.title + " " + r.abstract);
      for (const auto& t : std::set<std::string>(toks.begin(), toks.end())) ++free_df[t];
      for (const auto& t : r.controlled_terms) ++ctl_df[controlled_key(t)];
      for (const auto& a : r.authors) ++auth_df[a];
    }
    EXPECT_EQ(ix.field(Field::Freetext).size(), free_df.size());
    for (const auto& [t, n] : free_df) EXPECT_EQ(ix.df(Field::Freetext, t), n) << t;
    for (const auto& [t, n] : ctl_df) EXPECT_EQ(ix.df(Field::Controlled, t), n) << t;
    for (const auto& [t, n] : auth_df) EXPECT_EQ(ix.df(Field::Author, t), n) << t;
  }
}

TEST(Tfidf, AbsentTermIsEmpty) {
  auto ix = build_index(Corpus({doc("d1", "unemployment")}));
  EXPECT_TRUE(search_tfidf(ix, make_query("poverty"), 10).empty());
}

TEST(Tfidf, WorkedExample) {
  auto ix = build_index(Corpus({doc("d1", "alpha alpha alpha"), doc("d2", "alpha beta"),
                                doc("d3", "beta"), doc("d4", "gamma")}));
  auto r = search_tfidf(ix, make_query("alpha"), 10);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r.entries[0].doc_id, "d1");
  EXPECT_NEAR(r.entries[0].score, 1.4546471909787544, 1e-12);
  EXPECT_NEAR(r.entries[1].score, 0.6931471805599453, 1e-12);
  EXPECT_EQ(r.label, RankingLabel::TFIDF);
}

TEST(Tfidf, TieBreakByDocId) {
  auto ix = build_index(Corpus({doc("c", "poverty"), doc("b", "poverty"), doc("a", "other")}));
  auto r = search_tfidf(ix, make_query("poverty"), 10);
  EXPECT_EQ(r.doc_ids(), (Strings{"b", "c"}));
  EXPECT_EQ(r.entries[0].score, r.entries[1].score);
}

TEST(Tfidf, TermInEveryDocScoresZero) {
  auto ix = build_index(Corpus({doc("a", "poverty"), doc("b", "poverty")}));
  EXPECT_TRUE(search_all(ix, make_query("poverty")).empty());
}

TEST(Tfidf, RepeatedQueryTermCountsOnce) {
  auto c = synthetic::random_corpus(9);
  auto ix = build_index(c);
  EXPECT_EQ(search_all(ix, make_query("w1 w1 w1")).entries, search_all(ix, make_query("w1")).entries);
}

TEST(Tfidf, ExpansionMatchesControlledField) {
  auto ix = build_index(Corpus({doc("a", "x1", {"Labor Market Policy"}), doc("b", "x2"), doc("c", "x3")}));
  Query q = make_query("nothing");
  q.expansion_terms = {"labor  market policy"};
  auto r = search_all(ix, q);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.entries[0].doc_id, "a");
  EXPECT_NEAR(r.entries[0].score, std::log(3.0), 1e-12);
}

TEST(Tfidf, MatchesScanOracle) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto c = synthetic::random_corpus(seed);
    auto ix = build_index(c);
    synthetic::Rng rng(seed * 31);
    for (int trial = 0; trial < 10; ++trial) {
      Query q = make_query("w" + std::to_string(rng.below(40)) + " w" + std::to_string(rng.below(40)));
      q.expansion_terms = {"c" + std::to_string(rng.below(12))};
      auto want = oracle::tfidf(c, q.terms, q.expansion_terms);
      auto got = search_all(ix, q);
      ASSERT_EQ(got.size(), want.size());
      for (const auto& e : got.entries) EXPECT_NEAR(e.score, want.at(e.doc_id), 1e-12);
      EXPECT_TRUE(std::is_sorted(got.entries.begin(), got.entries.end(), score_order));
    }
  }
}

TEST(Tfidf, LimitTruncatesTopOfFullRanking) {
  auto c = synthetic::random_corpus(2);
  auto ix = build_index(c);
  auto q = make_query("w0 w3 w5");
  auto all = search_all(ix, q);
  auto top = search_tfidf(ix, q, 5);
  ASSERT_EQ(top.size(), 5u);
  EXPECT_TRUE(std::equal(top.entries.begin(), top.entries.end(), all.entries.begin()));
  EXPECT_THROW(search_tfidf(ix, q, 0), ArgumentError);
}

TEST(Tfidf, NonMatchingDocKeepsSingleTermOrder) {
  auto c = synthetic::random_corpus(4);
  auto recs = c.records();
  recs.push_back(doc("zz-extra", "unrelated words only"));
  auto a = build_index(c);
  auto b = build_index(Corpus(recs));
  for (int w = 0; w < 40; ++w) {
    auto q = make_query("w" + std::to_string(w));
    EXPECT_EQ(search_all(a, q).doc_ids(), search_all(b, q).doc_ids()) << w;
  }
}

TEST(Normalize, Examples) {
  RankedList r;
  r.entries = {{"a", 2.0}, {"b", 1.0}, {"c", 0.5}};
  auto n = normalize(r);
  EXPECT_DOUBLE_EQ(n.entries[0].score, 1.0);
  EXPECT_DOUBLE_EQ(n.entries[1].score, 0.5);
  EXPECT_DOUBLE_EQ(n.entries[2].score, 0.25);
  RankedList one;
  one.entries = {{"x", 7.3}};
  EXPECT_EQ(normalize(one).entries[0].score, 1.0);
  EXPECT_TRUE(normalize(RankedList{}).empty());
}

TEST(Normalize, RandomProperty) {
  synthetic::Rng rng(77);
  RankedList r;
  for (int i = 0; i < 100; ++i) r.entries.push_back({"d" + std::to_string(i), 0.01 + 100 * rng.uniform()});
  std::sort(r.entries.begin(), r.entries.end(), score_order);
  auto n = normalize(r);
  double mx = 0;
  for (const auto& e : n.entries) mx = std::max(mx, e.score);
  EXPECT_EQ(mx, 1.0);
  EXPECT_EQ(n.doc_ids(), r.doc_ids());
  auto twice = normalize(n);
  for (std::size_t i = 0; i < n.size(); ++i) EXPECT_NEAR(twice.entries[i].score, n.entries[i].score, 1e-15);
}

TEST(IndexFile, RoundTrip) {
  auto c = synthetic::random_corpus(5);
  auto ix = build_index(c);
  std::stringstream buf;
  save_index(buf, ix);
  auto back = load_index(buf);
  EXPECT_EQ(back.corpus(), c);
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    const auto& want = ix.field(static_cast<Field>(f));
    const auto& got = back.field(static_cast<Field>(f));
    ASSERT_EQ(got.size(), want.size());
    for (const auto& [t, pl] : want) EXPECT_EQ(got.at(t), pl);
  }
}

TEST(IndexFile, BadMagic) {
  std::stringstream buf("NOTANIDX\x01\x00\x00\x00");
  EXPECT_THROW(load_index(buf), IoError);
}
