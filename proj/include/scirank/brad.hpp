#pragma once

// Bradfordizing: journal yield within a result set, re-ranking by journal
// coreness, three-zone partition and the journal weighting factor.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "scirank/corpus.hpp"
#include "scirank/error.hpp"
#include "scirank/search.hpp"

namespace scirank {

struct JournalCount {
  std::string journal_key;
  std::size_t article_count = 0;

  friend bool operator==(const JournalCount&, const JournalCount&) = default;
};

// Ordered by (count desc, key asc).
class JournalRanking {
 public:
  JournalRanking() = default;

  JournalRanking(std::vector<JournalCount> counts, Query source)
      : counts_(std::move(counts)), source_(std::move(source)) {
    std::sort(counts_.begin(), counts_.end(), [](const JournalCount& a, const JournalCount& b) {
      if (a.article_count != b.article_count) return a.article_count > b.article_count;
      return a.journal_key < b.journal_key;
    });
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      pos_.emplace(counts_[i].journal_key, i);
      total_ += counts_[i].article_count;
    }
  }

  const std::vector<JournalCount>& entries() const noexcept { return counts_; }
  bool empty() const noexcept { return counts_.empty(); }
  std::size_t size() const noexcept { return counts_.size(); }
  const Query& source() const noexcept { return source_; }

  std::size_t j_max() const noexcept { return counts_.empty() ? 0 : counts_.front().article_count; }
  std::size_t total_articles() const noexcept { return total_; }

  std::size_t count(const std::string& key) const {
    auto it = pos_.find(key);
    return it == pos_.end() ? 0 : counts_[it->second].article_count;
  }

  // 0-based rank of a journal, if present.
  std::optional<std::size_t> rank(const std::string& key) const {
    auto it = pos_.find(key);
    if (it == pos_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<JournalCount> counts_;
  std::unordered_map<std::string, std::size_t> pos_;
  std::size_t total_ = 0;
  Query source_;
};

// Journal key of a result document, resolved through the corpus.
inline const std::string* journal_key_of(const Corpus& corpus, const std::string& doc_id) {
  const auto* r = corpus.find(doc_id);
  if (!r || !r->journal) return nullptr;
  return &r->journal->key();
}

inline JournalRanking journal_counts(const RankedList& result, const Corpus& corpus) {
  std::map<std::string, std::size_t> tally;
  for (const auto& e : result.entries) {
    if (const auto* key = journal_key_of(corpus, e.doc_id)) ++tally[*key];
  }
  std::vector<JournalCount> counts;
  counts.reserve(tally.size());
  for (auto& [key, n] : tally) counts.push_back({key, n});
  return JournalRanking(std::move(counts), result.query);
}

// Stable re-rank by journal yield. Journal-less documents go last in their
// original order; scores become the journal article counts.
inline RankedList bradfordize(const RankedList& result, const JournalRanking& ranking,
                              const Corpus& corpus) {
  struct Keyed {
    std::size_t journal_rank;  // SIZE_MAX for journal-less documents
    std::size_t position;
    ScoredDoc doc;
  };
  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::vector<Keyed> keyed;
  keyed.reserve(result.entries.size());
  for (std::size_t i = 0; i < result.entries.size(); ++i) {
    const auto& e = result.entries[i];
    std::size_t jr = kNone;
    double score = 0.0;
    if (const auto* key = journal_key_of(corpus, e.doc_id)) {
      if (auto r = ranking.rank(*key)) {
        jr = *r;
        score = static_cast<double>(ranking.entries()[*r].article_count);
      }
    }
    keyed.push_back({jr, i, {e.doc_id, score}});
  }
  // Ranking order already encodes (count desc, key asc).
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.journal_rank != b.journal_rank) return a.journal_rank < b.journal_rank;
    return a.position < b.position;
  });
  RankedList out{result.query, {}, RankingLabel::BRAD};
  out.entries.reserve(keyed.size());
  for (auto& k : keyed) out.entries.push_back(std::move(k.doc));
  return out;
}

struct BradfordPartition {
  std::vector<std::string> core;
  std::vector<std::string> zone2;
  std::vector<std::string> zone3;
  std::size_t core_articles = 0;
  std::size_t zone2_articles = 0;
  std::size_t zone3_articles = 0;

  friend bool operator==(const BradfordPartition&, const BradfordPartition&) = default;
};

// Greedy cumulative thirds: the core is the shortest prefix holding at least a
// third of the articles, zone 2 the next shortest segment reaching two thirds.
inline BradfordPartition bradford_zones(const JournalRanking& ranking) {
  if (ranking.empty()) throw ArgumentError("ranking", "cannot partition an empty journal ranking");
  const std::size_t total = ranking.total_articles();
  BradfordPartition p;
  std::size_t cum = 0;
  for (const auto& jc : ranking.entries()) {
    // Integer form of cum >= total/3 and cum >= 2*total/3.
    if (3 * cum < total) {
      p.core.push_back(jc.journal_key);
      p.core_articles += jc.article_count;
    } else if (3 * cum < 2 * total) {
      p.zone2.push_back(jc.journal_key);
      p.zone2_articles += jc.article_count;
    } else {
      p.zone3.push_back(jc.journal_key);
      p.zone3_articles += jc.article_count;
    }
    cum += jc.article_count;
  }
  return p;
}

// W_j = count(journal of d) / J_max, 0 for journal-less or unranked documents.
inline double journal_weight(const BibRecord& d, const JournalRanking& ranking) {
  if (!d.journal || ranking.empty()) return 0.0;
  auto n = ranking.count(d.journal->key());
  if (n == 0) return 0.0;
  return static_cast<double>(n) / static_cast<double>(ranking.j_max());
}

// zone TAB journal_key TAB count, zones in order core / zone2 / zone3.
inline void write_zone_report(std::ostream& out, const BradfordPartition& p,
                              const JournalRanking& ranking) {
  auto emit = [&](const char* zone, const std::vector<std::string>& keys) {
    for (const auto& k : keys) out << zone << '\t' << k << '\t' << ranking.count(k) << '\n';
  };
  emit("core", p.core);
  emit("zone2", p.zone2);
  emit("zone3", p.zone3);
}

}  // namespace scirank
