#pragma once

// In-process request surface shared by the CLI and the HTTP service. Holds the
// immutable index and model; every call is a pure function of its inputs.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scirank/auth.hpp"
#include "scirank/brad.hpp"
#include "scirank/combine.hpp"
#include "scirank/corpus.hpp"
#include "scirank/error.hpp"
#include "scirank/search.hpp"
#include "scirank/str.hpp"

namespace scirank {

enum class RankingMode { Tfidf, Brad, Auth, Combined, Chain };

inline RankingMode parse_ranking_mode(const std::string& s) {
  if (s == "tfidf") return RankingMode::Tfidf;
  if (s == "brad") return RankingMode::Brad;
  if (s == "auth") return RankingMode::Auth;
  if (s == "combined") return RankingMode::Combined;
  if (s == "chain") return RankingMode::Chain;
  throw ArgumentError("ranking", "unknown ranking \"" + s +
                                     "\" (expected tfidf, brad, auth, combined or chain)");
}

inline const char* to_string(RankingMode m) noexcept {
  switch (m) {
    case RankingMode::Tfidf: return "tfidf";
    case RankingMode::Brad: return "brad";
    case RankingMode::Auth: return "auth";
    case RankingMode::Combined: return "combined";
    case RankingMode::Chain: return "chain";
  }
  return "?";
}

struct SearchRequest {
  std::string query;
  RankingMode ranking = RankingMode::Tfidf;
  std::optional<std::string> chain;
  std::size_t expand = 0;
  std::size_t k = 10;
};

inline void check_request(const SearchRequest& req) {
  if (req.k < 1) throw ArgumentError("k", "k must be >= 1");
  if (req.ranking == RankingMode::Chain && !req.chain)
    throw ArgumentError("chain", "ranking \"chain\" requires a chain spec");
  if (req.chain) parse_chain(*req.chain);
}

struct SearchResponse {
  RankedList ranked;                       // truncated to the request limit
  std::vector<Factors> factors;            // COMBINED only, parallel to entries
  std::optional<DiscardReport> discarded;  // COMBINED only
  std::size_t total = 0;                   // result-set size before truncation
};

struct Provenance {
  std::string corpus_id;
  std::string str_model;
  std::string ranking_version = "tfidf-log-1/llr-doc-1/brad-thirds-1/betweenness-brandes-1";
};

class Engine {
 public:
  Engine(std::shared_ptr<const IndexedCorpus> index, std::shared_ptr<const AssociationModel> model,
         BetweennessOptions centrality = {})
      : index_(std::move(index)), model_(std::move(model)), centrality_(centrality) {
    provenance_.corpus_id = corpus_id(index_->corpus());
    provenance_.str_model = model_ ? "llr:" + (model_->corpus_id().empty() ? std::string("external")
                                                                             : model_->corpus_id())
                                   : "none";
  }

  const IndexedCorpus& index() const noexcept { return *index_; }
  const Corpus& corpus() const noexcept { return index_->corpus(); }
  const AssociationModel* model() const noexcept { return model_.get(); }
  const Provenance& provenance() const noexcept { return provenance_; }
  const BetweennessOptions& centrality_options() const noexcept { return centrality_; }

  ServiceContext context() const { return {*index_, model_.get(), centrality_}; }

  SearchResponse search(const SearchRequest& req) const {
    check_request(req);
    auto ctx = context();
    SearchResponse resp;
    Query q = expand_with(ctx, make_query(req.query), req.expand);
    switch (req.ranking) {
      case RankingMode::Tfidf:
        resp.ranked = search_all(*index_, q);
        if (req.expand > 0) resp.ranked.label = RankingLabel::STR;
        break;
      case RankingMode::Brad: {
        auto all = search_all(*index_, q);
        resp.ranked = bradfordize(all, journal_counts(all, corpus()), corpus());
        break;
      }
      case RankingMode::Auth: {
        auto all = search_all(*index_, q);
        resp.ranked = author_rerank(all, betweenness(build_graph(all, corpus()), centrality_),
                                    corpus());
        break;
      }
      case RankingMode::Combined: {
        auto c = combined_rerank(q, ctx);
        resp.ranked = std::move(c.ranked);
        resp.factors = std::move(c.factors);
        resp.discarded = c.discarded;
        break;
      }
      case RankingMode::Chain:
        resp.ranked = run_chain(q, parse_chain(*req.chain), ctx);
        break;
    }
    resp.total = resp.ranked.entries.size();
    if (resp.ranked.entries.size() > req.k) resp.ranked.entries.resize(req.k);
    if (resp.factors.size() > req.k) resp.factors.resize(req.k);
    return resp;
  }

  std::vector<Recommendation> recommend_terms(const std::string& q, std::size_t k) const {
    if (!model_) throw ArgumentError("model", "no STR model loaded");
    return recommend(*model_, make_query(q), k);
  }

  // Journal ranking and zones of the query's full tf-idf result set. An empty
  // ranking yields an empty partition.
  std::pair<JournalRanking, BradfordPartition> zones(const std::string& q) const {
    auto all = search_all(*index_, make_query(q));
    auto ranking = journal_counts(all, corpus());
    BradfordPartition p;
    if (!ranking.empty()) p = bradford_zones(ranking);
    return {std::move(ranking), std::move(p)};
  }

  std::pair<CoauthorGraph, CentralityMap> centrality(const std::string& q) const {
    auto all = search_all(*index_, make_query(q));
    auto g = build_graph(all, corpus());
    auto cmap = betweenness(g, centrality_);
    return {std::move(g), std::move(cmap)};
  }

  CorpusStats corpus_stats() const { return stats(corpus()); }

 private:
  std::shared_ptr<const IndexedCorpus> index_;
  std::shared_ptr<const AssociationModel> model_;
  BetweennessOptions centrality_;
  Provenance provenance_;
};

}  // namespace scirank
