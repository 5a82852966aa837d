#pragma once

// Inverted index over a corpus and the tf-idf baseline ranking.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "scirank/corpus.hpp"
#include "scirank/error.hpp"

namespace scirank {

// Lowercases ASCII and splits on every ASCII character that is not a letter or
// digit. Bytes >= 0x80 are kept inside tokens so UTF-8 words stay whole.
// Tokens shorter than two bytes are dropped.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2) out.push_back(cur);
    cur.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z')) {
      cur.push_back(static_cast<char>(c));
    } else if (c >= 'A' && c <= 'Z') {
      cur.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

// Index key of a controlled descriptor: trimmed, ASCII-lowercased, inner
// whitespace runs collapsed to one space.
inline std::string controlled_key(std::string_view term) {
  std::string out;
  bool pending_space = false;
  for (char ch : term) {
    if (detail::is_space(ch)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch - 'A' + 'a') : ch);
  }
  return out;
}

struct Query {
  std::string raw;
  std::vector<std::string> terms;
  std::vector<std::string> expansion_terms;

  friend bool operator==(const Query&, const Query&) = default;
};

inline Query make_query(std::string raw) {
  Query q;
  q.terms = tokenize(raw);
  q.raw = std::move(raw);
  return q;
}

enum class RankingLabel { TFIDF, STR, BRAD, AUTH, COMBINED, CHAIN };

inline const char* to_string(RankingLabel l) noexcept {
  switch (l) {
    case RankingLabel::TFIDF: return "TFIDF";
    case RankingLabel::STR: return "STR";
    case RankingLabel::BRAD: return "BRAD";
    case RankingLabel::AUTH: return "AUTH";
    case RankingLabel::COMBINED: return "COMBINED";
    case RankingLabel::CHAIN: return "CHAIN";
  }
  return "?";
}

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;

  friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

struct RankedList {
  Query query;
  std::vector<ScoredDoc> entries;
  RankingLabel label = RankingLabel::TFIDF;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }

  std::vector<std::string> doc_ids() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.doc_id);
    return out;
  }

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

// Higher score first, then ascending doc_id.
inline bool score_order(const ScoredDoc& a, const ScoredDoc& b) noexcept {
  if (a.score != b.score) return a.score > b.score;
  return a.doc_id < b.doc_id;
}

enum class Field : std::uint8_t { Freetext = 0, Controlled = 1, Author = 2, Journal = 3 };
inline constexpr std::size_t kFieldCount = 4;

struct Posting {
  std::uint32_t doc = 0;  // position in the corpus
  std::uint32_t tf = 0;

  friend bool operator==(const Posting&, const Posting&) = default;
};

using PostingList = std::vector<Posting>;

namespace detail {

// Terms a record contributes to each field, with raw frequencies.
inline std::map<std::string, std::uint32_t> field_terms(const BibRecord& r, Field f) {
  std::map<std::string, std::uint32_t> out;
  switch (f) {
    case Field::Freetext:
      for (auto& t : tokenize(r.title)) ++out[t];
      for (auto& t : tokenize(r.abstract)) ++out[t];
      break;
    case Field::Controlled:
      for (const auto& t : r.controlled_terms) {
        if (auto k = controlled_key(t); !k.empty()) out[k] = 1;
      }
      break;
    case Field::Author:
      for (const auto& a : r.authors) out[a] = 1;
      break;
    case Field::Journal:
      if (r.journal) out[r.journal->key()] = 1;
      break;
  }
  return out;
}

}  // namespace detail

// Immutable inverted index. Postings within a list are in ascending corpus order.
class IndexedCorpus {
 public:
  IndexedCorpus() : corpus_(std::make_shared<const Corpus>()) {}

  explicit IndexedCorpus(std::shared_ptr<const Corpus> corpus) : corpus_(std::move(corpus)) {
    const auto& recs = corpus_->records();
    for (std::size_t d = 0; d < recs.size(); ++d) {
      for (std::size_t f = 0; f < kFieldCount; ++f) {
        for (auto& [term, tf] : detail::field_terms(recs[d], static_cast<Field>(f)))
          fields_[f][term].push_back({static_cast<std::uint32_t>(d), tf});
      }
    }
  }

  const Corpus& corpus() const noexcept { return *corpus_; }
  const std::shared_ptr<const Corpus>& corpus_ptr() const noexcept { return corpus_; }
  std::size_t n_docs() const noexcept { return corpus_->n_docs(); }

  std::span<const Posting> postings(Field f, std::string_view term) const {
    const auto& m = fields_[static_cast<std::size_t>(f)];
    auto it = m.find(std::string(term));
    if (it == m.end()) return {};
    return it->second;
  }

  std::size_t df(Field f, std::string_view term) const { return postings(f, term).size(); }

  // ln(N/df); 0 when the term is absent.
  double idf(Field f, std::string_view term) const {
    auto n = df(f, term);
    if (n == 0) return 0.0;
    return std::log(static_cast<double>(n_docs()) / static_cast<double>(n));
  }

  const std::unordered_map<std::string, PostingList>& field(Field f) const noexcept {
    return fields_[static_cast<std::size_t>(f)];
  }

  // Used by load_index; the caller vouches for consistency with the corpus.
  static IndexedCorpus from_parts(std::shared_ptr<const Corpus> corpus,
                                  std::array<std::unordered_map<std::string, PostingList>,
                                             kFieldCount> fields) {
    IndexedCorpus ix;
    ix.corpus_ = std::move(corpus);
    ix.fields_ = std::move(fields);
    return ix;
  }

 private:
  std::shared_ptr<const Corpus> corpus_;
  std::array<std::unordered_map<std::string, PostingList>, kFieldCount> fields_;
};

inline IndexedCorpus build_index(Corpus corpus) {
  return IndexedCorpus(std::make_shared<const Corpus>(std::move(corpus)));
}

inline IndexedCorpus build_index(std::shared_ptr<const Corpus> corpus) {
  return IndexedCorpus(std::move(corpus));
}

// 1 + ln(f) for f > 0, else 0.
inline double tf_weight(std::uint32_t f) noexcept {
  return f == 0 ? 0.0 : 1.0 + std::log(static_cast<double>(f));
}

// Raw tf-idf scores of every matching document, keyed by corpus position.
// Plain terms match the freetext field, expansion terms the controlled field;
// repeated terms count once.
inline std::vector<double> tfidf_scores(const IndexedCorpus& index, const Query& query) {
  std::vector<double> score(index.n_docs(), 0.0);
  auto accumulate = [&](Field f, const std::vector<std::string>& terms, bool as_descriptor) {
    std::unordered_set<std::string> seen;
    for (const auto& raw : terms) {
      std::string t = as_descriptor ? controlled_key(raw) : raw;
      if (!seen.insert(t).second) continue;
      auto plist = index.postings(f, t);
      if (plist.empty()) continue;
      double idf = index.idf(f, t);
      for (const auto& p : plist) score[p.doc] += tf_weight(p.tf) * idf;
    }
  };
  accumulate(Field::Freetext, query.terms, false);
  accumulate(Field::Controlled, query.expansion_terms, true);
  return score;
}

// OR-semantics tf-idf retrieval; zero-score documents are excluded.
inline RankedList search_tfidf(const IndexedCorpus& index, const Query& query, std::size_t k) {
  if (k < 1) throw ArgumentError("k", "k must be >= 1");
  auto score = tfidf_scores(index, query);
  RankedList out{query, {}, RankingLabel::TFIDF};
  for (std::size_t d = 0; d < score.size(); ++d) {
    if (score[d] > 0.0) out.entries.push_back({index.corpus()[d].doc_id, score[d]});
  }
  auto mid = out.entries.begin() + static_cast<std::ptrdiff_t>(std::min(k, out.entries.size()));
  std::partial_sort(out.entries.begin(), mid, out.entries.end(), score_order);
  out.entries.erase(mid, out.entries.end());
  return out;
}

// Every matching document, unlimited.
inline RankedList search_all(const IndexedCorpus& index, const Query& query) {
  return search_tfidf(index, query, std::max<std::size_t>(1, index.n_docs()));
}

// Divides every score by the list maximum. Order and label are unchanged.
inline RankedList normalize(RankedList ranked) {
  if (ranked.entries.empty()) return ranked;
  double mx = 0.0;
  for (const auto& e : ranked.entries) mx = std::max(mx, e.score);
  if (mx <= 0.0) return ranked;
  for (auto& e : ranked.entries) e.score /= mx;
  return ranked;
}

// ---------------------------------------------------------------------------
// Persistence: "SCIRANK1" magic, u32 format version, then the corpus lines and
// per-field postings. Integers are little-endian.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kIndexMagic = "SCIRANK1";
inline constexpr std::uint32_t kIndexVersion = 1;

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_str(std::ostream& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("truncated index file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline std::string get_str(std::istream& in) {
  auto n = get_u32(in);
  std::string s(n, '\0');
  if (n && !in.read(s.data(), n)) throw IoError("truncated index file");
  return s;
}

}  // namespace detail

inline void save_index(std::ostream& out, const IndexedCorpus& index) {
  out.write(kIndexMagic.data(), static_cast<std::streamsize>(kIndexMagic.size()));
  detail::put_u32(out, kIndexVersion);
  const auto& recs = index.corpus().records();
  detail::put_u32(out, static_cast<std::uint32_t>(recs.size()));
  for (const auto& r : recs) detail::put_str(out, serialize_record(r));
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    const auto& m = index.field(static_cast<Field>(f));
    std::vector<const std::string*> keys;
    keys.reserve(m.size());
    for (const auto& [term, _] : m) keys.push_back(&term);
    std::sort(keys.begin(), keys.end(), [](auto* a, auto* b) { return *a < *b; });
    detail::put_u32(out, static_cast<std::uint32_t>(keys.size()));
    for (const auto* term : keys) {
      detail::put_str(out, *term);
      const auto& plist = m.at(*term);
      detail::put_u32(out, static_cast<std::uint32_t>(plist.size()));
      for (const auto& p : plist) {
        detail::put_u32(out, p.doc);
        detail::put_u32(out, p.tf);
      }
    }
  }
  if (!out) throw IoError("write failed");
}

inline IndexedCorpus load_index(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::string_view(magic, 8) != kIndexMagic)
    throw IoError("not a scirank index (bad magic)");
  if (auto v = detail::get_u32(in); v != kIndexVersion)
    throw IoError("unsupported index version " + std::to_string(v));
  auto n = detail::get_u32(in);
  std::vector<BibRecord> recs;
  recs.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    try {
      recs.push_back(parse_record(detail::get_str(in)));
    } catch (const std::invalid_argument& e) {
      throw IoError(std::string("corrupt index record: ") + e.what());
    }
  }
  auto corpus = std::make_shared<const Corpus>(std::move(recs));
  std::array<std::unordered_map<std::string, PostingList>, kFieldCount> fields;
  for (auto& m : fields) {
    auto terms = detail::get_u32(in);
    for (std::uint32_t t = 0; t < terms; ++t) {
      auto term = detail::get_str(in);
      auto len = detail::get_u32(in);
      PostingList plist(len);
      for (auto& p : plist) {
        p.doc = detail::get_u32(in);
        p.tf = detail::get_u32(in);
        if (p.doc >= n) throw IoError("corrupt index: posting out of range");
      }
      m.emplace(std::move(term), std::move(plist));
    }
  }
  return IndexedCorpus::from_parts(std::move(corpus), std::move(fields));
}

inline void save_index(const std::string& path, const IndexedCorpus& index) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write \"" + path + "\"");
  save_index(out, index);
}

inline IndexedCorpus load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open index file \"" + path + "\"");
  return load_index(in);
}

}  // namespace scirank
