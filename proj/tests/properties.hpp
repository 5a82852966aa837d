#pragma once

// Property checks shared by the unit tests and the acceptance runner. Each
// returns an empty string on success, otherwise a description of the first
// violation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scirank/scirank.hpp"
#include "scirank/synthetic.hpp"

namespace props {

using namespace scirank;

inline std::string node_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "n%03zu", i);
  return buf;
}

inline CoauthorGraph to_graph(const oracle::Adj& adj) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    names.push_back(node_name(u));
    for (auto v : adj[u])
      if (u < v) edges.emplace_back(node_name(u), node_name(v));
  }
  return CoauthorGraph(names, edges);
}

// Brandes against explicit path enumeration on one random graph.
inline std::string check_betweenness(synthetic::Rng& rng, std::size_t max_nodes, double tol) {
  std::size_t n = 1 + rng.below(max_nodes);
  auto adj = oracle::random_graph(rng, n, 0.2 + 0.6 * rng.uniform());
  auto want = oracle::betweenness_by_paths(adj);
  auto got = betweenness(to_graph(adj));
  for (std::size_t v = 0; v < n; ++v) {
    double g = *got.get(node_name(v));
    if (!(std::fabs(g - want[v]) <= tol))
      return "node " + node_name(v) + " of " + std::to_string(n) + ": got " + std::to_string(g) +
             ", want " + std::to_string(want[v]);
  }
  return {};
}

// A random subset of the corpus in random order with random positive scores.
inline RankedList random_result(synthetic::Rng& rng, const Corpus& c, std::size_t max_size) {
  std::vector<std::size_t> idx(c.n_docs());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  rng.shuffle(idx);
  idx.resize(std::min(idx.size(), rng.below(max_size + 1)));
  RankedList r;
  for (auto i : idx) r.entries.push_back({c[i].doc_id, 0.001 + rng.uniform()});
  return r;
}

inline std::string check_bradfordize(const RankedList& in, const Corpus& corpus) {
  auto ranking = journal_counts(in, corpus);
  auto out = bradfordize(in, ranking, corpus);
  auto a = in.doc_ids();
  auto b = out.doc_ids();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) return "output is not a permutation of the input";

  auto key = [&](const std::string& id) -> std::string {
    const auto* k = journal_key_of(corpus, id);
    return k ? *k : std::string();
  };
  std::map<std::string, std::size_t> in_pos;
  for (std::size_t i = 0; i < in.entries.size(); ++i) in_pos[in.entries[i].doc_id] = i;

  std::set<std::string> closed;
  std::string prev;
  bool seen_none = false;
  std::size_t prev_rank = 0;
  std::map<std::string, std::size_t> last_in_pos;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    const auto& id = out.entries[i].doc_id;
    auto k = key(id);
    if (k.empty()) {
      seen_none = true;
      if (out.entries[i].score != 0.0) return "journal-less doc " + id + " has a nonzero score";
    } else {
      if (seen_none) return "journal doc " + id + " after a journal-less doc";
      if (k != prev) {
        if (closed.contains(k)) return "journal " + k + " is not contiguous";
        if (!prev.empty()) closed.insert(prev);
        auto r = *ranking.rank(k);
        if (i > 0 && r < prev_rank) return "journal blocks out of ranking order at " + id;
        prev_rank = r;
      }
      if (out.entries[i].score != static_cast<double>(ranking.count(k)))
        return "score of " + id + " is not its journal count";
    }
    prev = k;
    auto group = k.empty() ? std::string("\x01none") : k;
    auto p = in_pos[id];
    if (last_in_pos.contains(group) && last_in_pos[group] > p)
      return "input order not kept inside " + group;
    last_in_pos[group] = p;
  }
  return {};
}

inline std::string check_zones(const JournalRanking& ranking) {
  if (ranking.empty()) return {};
  auto z = bradford_zones(ranking);
  std::vector<std::string> joined = z.core;
  joined.insert(joined.end(), z.zone2.begin(), z.zone2.end());
  joined.insert(joined.end(), z.zone3.begin(), z.zone3.end());
  std::vector<std::string> keys;
  for (const auto& e : ranking.entries()) keys.push_back(e.journal_key);
  if (joined != keys) return "zones do not partition the ranking in order";
  const std::size_t total = ranking.total_articles();
  if (z.core_articles + z.zone2_articles + z.zone3_articles != total) return "zone totals do not add up";
  const double third = static_cast<double>(total) / 3.0;
  const double slack = static_cast<double>(ranking.j_max());
  for (auto n : {z.core_articles, z.zone2_articles, z.zone3_articles})
    if (std::fabs(static_cast<double>(n) - third) > slack)
      return "zone with " + std::to_string(n) + " articles is more than one journal count from " +
             std::to_string(third);
  return {};
}

inline FilterChain random_filter_chain(synthetic::Rng& rng) {
  FilterChain c;
  for (std::size_t n = 1 + rng.below(4); n > 0; --n) {
    switch (rng.below(3)) {
      case 0: c.steps.push_back(ChainStep::brad_core()); break;
      case 1: c.steps.push_back(ChainStep::brad_top(1 + rng.below(4))); break;
      default: c.steps.push_back(ChainStep::auth(1 + rng.below(5))); break;
    }
  }
  return c;
}

inline bool subset_of(const RankedList& a, const RankedList& b) {
  auto ids = b.doc_ids();
  std::set<std::string> s(ids.begin(), ids.end());
  for (const auto& e : a.entries)
    if (!s.contains(e.doc_id)) return false;
  return true;
}

// Walks the chain step by step; every output must be inside its input, and the
// last output must agree with run_chain.
inline std::string check_chain_shrinks(const Query& q, const FilterChain& chain, const ServiceContext& ctx) {
  const auto& corpus = ctx.index.corpus();
  RankedList cur = search_all(ctx.index, q);
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const auto& s = chain.steps[i];
    auto next = s.kind == StepKind::Brad ? brad_filter(cur, s, corpus) : auth_filter(cur, s, corpus, ctx.centrality);
    if (!subset_of(next, cur))
      return "step " + std::to_string(i + 1) + " of " + to_string(chain) + " added documents";
    cur = std::move(next);
  }
  if (run_chain(q, chain, ctx).doc_ids() != cur.doc_ids()) return "run_chain disagrees with the step walk";
  return {};
}

// Full combined pipeline recomputed from raw records with the oracles.
struct CombinedAudit {
  std::size_t checked = 0;
  std::size_t discarded = 0;
  double max_error = 0.0;
  std::string failure;
};

inline void audit_combined(const Corpus& corpus, const ServiceContext& ctx, const std::string& text,
                           CombinedAudit& audit, double tol) {
  auto q = make_query(text);
  auto raw = oracle::tfidf(corpus, q.terms);
  double mx = 0.0;
  for (const auto& [_, s] : raw) mx = std::max(mx, s);

  std::map<std::string, std::size_t> tally;
  std::vector<const BibRecord*> docs;
  for (const auto& [id, _] : raw) {
    const auto& r = corpus.at(id);
    docs.push_back(&r);
    if (r.journal) ++tally[r.journal->key()];
  }
  std::size_t jmax = 0;
  for (const auto& [_, n] : tally) jmax = std::max(jmax, n);

  auto g = oracle::author_graph(docs);
  auto bc = oracle::betweenness_by_counts(g.adj);
  std::map<std::string, double> central;
  double amax = 0.0;
  for (std::size_t i = 0; i < g.names.size(); ++i) {
    central[g.names[i]] = bc[i];
    amax = std::max(amax, bc[i]);
  }

  auto got = combined_rerank(q, ctx);
  std::map<std::string, std::pair<double, Factors>> shown;
  for (std::size_t i = 0; i < got.ranked.entries.size(); ++i)
    shown[got.ranked.entries[i].doc_id] = {got.ranked.entries[i].score, got.factors[i]};

  auto fail = [&](const std::string& why) {
    if (audit.failure.empty()) audit.failure = "\"" + text + "\": " + why;
  };
  if (!std::is_sorted(got.ranked.entries.begin(), got.ranked.entries.end(), score_order))
    fail("ranking is not in score order");
  if (got.considered != raw.size()) fail("considered count differs from the oracle result set");
  std::size_t dropped = 0;
  for (const auto& [id, s] : raw) {
    const auto& r = corpus.at(id);
    double tn = s / mx;
    double wj = r.journal ? static_cast<double>(tally[r.journal->key()]) / static_cast<double>(jmax) : 0.0;
    double best = 0.0;
    for (const auto& a : r.authors) best = std::max(best, central[a]);
    double wa = amax > 0.0 ? best / amax : 0.0;
    double want = tn * wj * wa;
    auto it = shown.find(id);
    if (it == shown.end()) {
      ++dropped;
      if (wj != 0.0 && wa != 0.0) fail("discarded " + id + " has no zero factor");
      continue;
    }
    ++audit.checked;
    const auto& [score, f] = it->second;
    double err = std::max({std::fabs(score - want), std::fabs(f.tfidf_norm - tn), std::fabs(f.w_j - wj),
                           std::fabs(f.w_a - wa), std::fabs(score - f.product())});
    audit.max_error = std::max(audit.max_error, err);
    if (!(err <= tol)) fail(id + " differs from the recomputed score by " + std::to_string(err));
  }
  if (dropped != got.discarded.total) fail("discard count mismatch");
  if (got.ranked.entries.size() + dropped != raw.size()) fail("ranked doc outside the oracle result set");
  audit.discarded += dropped;
}

}  // namespace props
