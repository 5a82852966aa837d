#pragma once

// Service composition: sequential filter chains and the multiplicative
// tfidf * W_j * W_a combined ranking.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "scirank/auth.hpp"
#include "scirank/brad.hpp"
#include "scirank/error.hpp"
#include "scirank/search.hpp"
#include "scirank/str.hpp"

namespace scirank {

enum class StepKind { Str, Brad, Auth };
enum class BradMode { CoreZone, TopJournals };

struct ChainStep {
  StepKind kind = StepKind::Brad;
  BradMode brad_mode = BradMode::CoreZone;
  // STR: expansion size; BRAD top-m: journal count; AUTH: author count.
  std::size_t param = 0;

  static ChainStep str(std::size_t k) { return {StepKind::Str, BradMode::CoreZone, k}; }
  static ChainStep brad_core() { return {StepKind::Brad, BradMode::CoreZone, 0}; }
  static ChainStep brad_top(std::size_t m) { return {StepKind::Brad, BradMode::TopJournals, m}; }
  static ChainStep auth(std::size_t a) { return {StepKind::Auth, BradMode::CoreZone, a}; }

  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

struct FilterChain {
  std::vector<ChainStep> steps;

  friend bool operator==(const FilterChain&, const FilterChain&) = default;
};

inline constexpr std::size_t kDefaultAuthTop = 1;

// Throws ArgumentError("chain", ...) unless the chain is runnable: at least one
// step, STR only in first position, BRAD top-m and AUTH counts positive.
inline void check_chain(const FilterChain& chain) {
  if (chain.steps.empty()) throw ArgumentError("chain", "chain needs at least one step");
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const auto& s = chain.steps[i];
    switch (s.kind) {
      case StepKind::Str:
        if (i != 0) throw ArgumentError("chain", "str may only be the first chain step");
        break;
      case StepKind::Brad:
        if (s.brad_mode == BradMode::TopJournals && s.param == 0)
          throw ArgumentError("chain", "brad journal count must be positive");
        break;
      case StepKind::Auth:
        if (s.param == 0) throw ArgumentError("chain", "auth author count must be positive");
        break;
    }
  }
}

// Parses "str:4,brad:core,auth:1". Bare names take defaults (str:4,
// brad:core, auth:1); "brad:N" keeps the top N journals.
inline FilterChain parse_chain(std::string_view spec) {
  auto number = [](std::string_view text, std::string_view step) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || text.empty())
      throw ArgumentError("chain", "invalid parameter \"" + std::string(text) + "\" for step \"" +
                                       std::string(step) + "\"");
    return v;
  };

  FilterChain chain;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    auto comma = spec.find(',', pos);
    auto item = trim(spec.substr(pos, comma == std::string_view::npos ? spec.npos : comma - pos));
    if (item.empty()) throw ArgumentError("chain", "empty chain step");
    auto colon = item.find(':');
    std::string name = item.substr(0, colon);
    std::string_view arg;
    if (colon != std::string::npos) arg = std::string_view(item).substr(colon + 1);

    if (name == "str") {
      chain.steps.push_back(ChainStep::str(arg.empty() && colon == std::string::npos
                                               ? kDefaultExpansion
                                               : number(arg, name)));
    } else if (name == "brad") {
      if (colon == std::string::npos || arg == "core")
        chain.steps.push_back(ChainStep::brad_core());
      else
        chain.steps.push_back(ChainStep::brad_top(number(arg, name)));
    } else if (name == "auth") {
      chain.steps.push_back(
          ChainStep::auth(colon == std::string::npos ? kDefaultAuthTop : number(arg, name)));
    } else {
      throw ArgumentError("chain", "unknown chain step \"" + name + "\"");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  check_chain(chain);
  return chain;
}

inline std::string to_string(const FilterChain& chain) {
  std::string out;
  for (const auto& s : chain.steps) {
    if (!out.empty()) out += ',';
    switch (s.kind) {
      case StepKind::Str: out += "str:" + std::to_string(s.param); break;
      case StepKind::Brad:
        out += s.brad_mode == BradMode::CoreZone ? std::string("brad:core")
                                                 : "brad:" + std::to_string(s.param);
        break;
      case StepKind::Auth: out += "auth:" + std::to_string(s.param); break;
    }
  }
  return out;
}

// Read-only inputs shared by every composed service.
struct ServiceContext {
  const IndexedCorpus& index;
  const AssociationModel* model = nullptr;
  BetweennessOptions centrality{};
};

inline Query expand_with(const ServiceContext& ctx, Query q, std::size_t k) {
  if (k == 0) return q;
  if (!ctx.model) throw ArgumentError("expand", "query expansion requires a trained STR model");
  return expand(std::move(q), *ctx.model, k);
}

// BRAD filter step: keep documents of the selected journals, in bradfordized order.
inline RankedList brad_filter(const RankedList& current, const ChainStep& step,
                              const Corpus& corpus) {
  auto ranking = journal_counts(current, corpus);
  RankedList out{current.query, {}, RankingLabel::BRAD};
  if (ranking.empty()) return out;
  std::unordered_set<std::string> keep;
  if (step.brad_mode == BradMode::CoreZone) {
    auto zones = bradford_zones(ranking);
    keep.insert(zones.core.begin(), zones.core.end());
  } else {
    for (std::size_t i = 0; i < std::min(step.param, ranking.size()); ++i)
      keep.insert(ranking.entries()[i].journal_key);
  }
  for (auto& e : bradfordize(current, ranking, corpus).entries) {
    const auto* key = journal_key_of(corpus, e.doc_id);
    if (key && keep.contains(*key)) out.entries.push_back(std::move(e));
  }
  return out;
}

// The a most central authors with positive betweenness, ties by name.
inline std::set<std::string> top_authors(const CentralityMap& cmap, std::size_t a) {
  std::set<std::string> out;
  for (auto& [name, v] : cmap.top(a)) {
    if (v > 0.0) out.insert(name);
  }
  return out;
}

// AUTH filter step: keep documents whose most central author is one of the
// top-a authors of the current set, in author_rerank order.
inline RankedList auth_filter(const RankedList& current, const ChainStep& step,
                              const Corpus& corpus, const BetweennessOptions& opt) {
  auto cmap = betweenness(build_graph(current, corpus), opt);
  auto top = top_authors(cmap, step.param);
  RankedList out{current.query, {}, RankingLabel::AUTH};
  for (auto& e : author_rerank(current, cmap, corpus).entries) {
    const auto* r = corpus.find(e.doc_id);
    if (!r || e.score <= 0.0) continue;
    bool keep = std::any_of(r->authors.begin(), r->authors.end(), [&](const std::string& a) {
      auto v = cmap.get(a);
      return v && *v == e.score && top.contains(a);
    });
    if (keep) out.entries.push_back(std::move(e));
  }
  return out;
}

// Runs the chain over the full tf-idf result set of the (possibly expanded)
// query. Scores of the output are those of the last re-ranking step.
inline RankedList run_chain(const Query& query, const FilterChain& chain,
                            const ServiceContext& ctx) {
  check_chain(chain);
  Query q = query;
  std::size_t first = 0;
  if (chain.steps.front().kind == StepKind::Str) {
    q = expand_with(ctx, std::move(q), chain.steps.front().param);
    first = 1;
  }
  const auto& corpus = ctx.index.corpus();
  RankedList current = search_all(ctx.index, q);
  for (std::size_t i = first; i < chain.steps.size(); ++i) {
    const auto& step = chain.steps[i];
    if (step.kind == StepKind::Brad)
      current = brad_filter(current, step, corpus);
    else
      current = auth_filter(current, step, corpus, ctx.centrality);
  }
  current.label = RankingLabel::CHAIN;
  return current;
}

// ---------------------------------------------------------------------------
// Combined score
// ---------------------------------------------------------------------------

struct Factors {
  double tfidf_norm = 0.0;
  double w_j = 0.0;
  double w_a = 0.0;

  double product() const noexcept { return tfidf_norm * w_j * w_a; }

  friend bool operator==(const Factors&, const Factors&) = default;
};

inline double combined_score(double tfidf_norm, double w_j, double w_a) noexcept {
  return tfidf_norm * w_j * w_a;
}

inline double combined_score(const BibRecord& d, double tfidf_norm, const JournalRanking& ranking,
                             const CentralityMap& cmap) {
  return combined_score(tfidf_norm, journal_weight(d, ranking), author_weight(d, cmap));
}

// Documents dropped for a zero factor. A document with both factors zero is
// counted in both columns.
struct DiscardReport {
  std::size_t total = 0;
  std::size_t zero_journal_weight = 0;
  std::size_t zero_author_weight = 0;

  friend bool operator==(const DiscardReport&, const DiscardReport&) = default;
};

struct CombinedResult {
  RankedList ranked;
  std::vector<Factors> factors;  // parallel to ranked.entries
  DiscardReport discarded;
  std::size_t considered = 0;    // size of the underlying tf-idf result set
};

// Journal ranking and centrality come from the full tf-idf result set of the
// query, optionally expanded by STR first.
inline CombinedResult combined_rerank(const Query& query, const ServiceContext& ctx,
                                      std::size_t expand_k = 0) {
  const auto& corpus = ctx.index.corpus();
  Query q = expand_with(ctx, query, expand_k);
  auto raw = search_all(ctx.index, q);
  auto norm = normalize(raw);
  auto ranking = journal_counts(raw, corpus);
  auto cmap = betweenness(build_graph(raw, corpus), ctx.centrality);

  struct Row {
    ScoredDoc doc;
    Factors f;
  };
  std::vector<Row> rows;
  CombinedResult out;
  out.considered = norm.entries.size();
  for (const auto& e : norm.entries) {
    const auto& d = corpus.at(e.doc_id);
    Factors f{e.score, journal_weight(d, ranking), author_weight(d, cmap)};
    double s = f.product();
    if (s > 0.0) {
      rows.push_back({{e.doc_id, s}, f});
    } else {
      ++out.discarded.total;
      if (f.w_j == 0.0) ++out.discarded.zero_journal_weight;
      if (f.w_a == 0.0) ++out.discarded.zero_author_weight;
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return score_order(a.doc, b.doc); });
  out.ranked = RankedList{q, {}, RankingLabel::COMBINED};
  out.ranked.entries.reserve(rows.size());
  out.factors.reserve(rows.size());
  for (auto& r : rows) {
    out.ranked.entries.push_back(std::move(r.doc));
    out.factors.push_back(r.f);
  }
  return out;
}

}  // namespace scirank
