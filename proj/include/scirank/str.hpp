#pragma once

// Search term recommendation: document-level co-word analysis between free
// text tokens and controlled descriptors, scored by log-likelihood ratio.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "scirank/corpus.hpp"
#include "scirank/error.hpp"
#include "scirank/search.hpp"

namespace scirank {

// 2x2 document-level contingency counts for one (free term, controlled term) pair.
struct Contingency {
  std::uint64_t k11 = 0;  // both
  std::uint64_t k12 = 0;  // free term only
  std::uint64_t k21 = 0;  // controlled term only
  std::uint64_t k22 = 0;  // neither

  std::uint64_t n() const noexcept { return k11 + k12 + k21 + k22; }

  static Contingency from_marginals(std::uint64_t both, std::uint64_t free_df,
                                    std::uint64_t controlled_df, std::uint64_t n_docs) {
    return {both, free_df - both, controlled_df - both, n_docs - free_df - controlled_df + both};
  }

  friend bool operator==(const Contingency&, const Contingency&) = default;
};

// G^2 = 2 * sum k * ln(k / E) with E = row * col / N and 0 * ln 0 = 0.
inline double log_likelihood_ratio(const Contingency& t) {
  const double n = static_cast<double>(t.n());
  if (n == 0.0) return 0.0;
  const double cells[2][2] = {{static_cast<double>(t.k11), static_cast<double>(t.k12)},
                              {static_cast<double>(t.k21), static_cast<double>(t.k22)}};
  const double rows[2] = {cells[0][0] + cells[0][1], cells[1][0] + cells[1][1]};
  const double cols[2] = {cells[0][0] + cells[1][0], cells[0][1] + cells[1][1]};
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double k = cells[i][j];
      if (k == 0.0) continue;
      double expected = rows[i] * cols[j] / n;
      sum += k * std::log(k / expected);
    }
  }
  // Rounding can leave a tiny negative residue for exactly independent tables.
  return std::max(0.0, 2.0 * sum);
}

// Raw co-occurrence statistics of a corpus.
class CooccurrenceTable {
 public:
  explicit CooccurrenceTable(const Corpus& corpus) : n_docs_(corpus.n_docs()) {
    for (const auto& r : corpus.records()) {
      std::set<std::string> free;
      for (auto& t : tokenize(r.title)) free.insert(std::move(t));
      for (auto& t : tokenize(r.abstract)) free.insert(std::move(t));
      std::set<std::string> controlled;
      for (const auto& c : r.controlled_terms) {
        if (auto k = controlled_key(c); !k.empty()) controlled.insert(std::move(k));
      }
      for (const auto& f : free) ++free_df_[f];
      for (const auto& c : controlled) ++controlled_df_[c];
      for (const auto& f : free) {
        auto& row = both_[f];
        for (const auto& c : controlled) ++row[c];
      }
    }
  }

  std::uint64_t n_docs() const noexcept { return n_docs_; }

  std::uint64_t free_df(const std::string& f) const { return lookup(free_df_, f); }
  std::uint64_t controlled_df(const std::string& c) const { return lookup(controlled_df_, c); }

  std::uint64_t both(const std::string& f, const std::string& c) const {
    auto it = both_.find(f);
    return it == both_.end() ? 0 : lookup(it->second, c);
  }

  Contingency table(const std::string& f, const std::string& c) const {
    return Contingency::from_marginals(both(f, c), free_df(f), controlled_df(c), n_docs_);
  }

  // free term -> controlled term -> k11 (only pairs with k11 >= 1)
  const std::map<std::string, std::map<std::string, std::uint64_t>>& pairs() const noexcept {
    return both_;
  }

 private:
  template <class M>
  static std::uint64_t lookup(const M& m, const std::string& key) {
    auto it = m.find(key);
    return it == m.end() ? 0 : it->second;
  }

  std::uint64_t n_docs_ = 0;
  std::map<std::string, std::uint64_t> free_df_;
  std::map<std::string, std::uint64_t> controlled_df_;
  std::map<std::string, std::map<std::string, std::uint64_t>> both_;
};

struct Association {
  std::string free_term;
  std::string controlled_term;
  double strength = 0.0;
  std::uint64_t k11 = 0;  // 0 when loaded from a file that does not carry it

  // Fewer than two supporting documents.
  bool low_confidence() const noexcept { return k11 > 0 && k11 < 2; }

  friend bool operator==(const Association&, const Association&) = default;
};

struct Recommendation {
  std::string term;
  double strength = 0.0;
  bool low_confidence = false;

  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

// Immutable after training. Associations per free term are ordered by
// descending strength, then ascending controlled term.
class AssociationModel {
 public:
  AssociationModel() = default;

  AssociationModel(std::vector<Association> assocs, std::string corpus_id)
      : corpus_id_(std::move(corpus_id)) {
    std::sort(assocs.begin(), assocs.end(), [](const Association& a, const Association& b) {
      if (a.free_term != b.free_term) return a.free_term < b.free_term;
      if (a.strength != b.strength) return a.strength > b.strength;
      return a.controlled_term < b.controlled_term;
    });
    assocs_ = std::move(assocs);
    for (std::size_t i = 0; i < assocs_.size();) {
      std::size_t j = i;
      while (j < assocs_.size() && assocs_[j].free_term == assocs_[i].free_term) ++j;
      ranges_.emplace(assocs_[i].free_term, std::make_pair(i, j));
      i = j;
    }
  }

  const std::vector<Association>& associations() const noexcept { return assocs_; }
  std::size_t size() const noexcept { return assocs_.size(); }
  bool empty() const noexcept { return assocs_.empty(); }
  const std::string& corpus_id() const noexcept { return corpus_id_; }

  std::span<const Association> for_term(const std::string& free_term) const {
    auto it = ranges_.find(free_term);
    if (it == ranges_.end()) return {};
    auto [b, e] = it->second;
    return std::span<const Association>(assocs_).subspan(b, e - b);
  }

  const Association* find(const std::string& free_term, const std::string& controlled) const {
    for (const auto& a : for_term(free_term)) {
      if (a.controlled_term == controlled) return &a;
    }
    return nullptr;
  }

 private:
  std::vector<Association> assocs_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> ranges_;
  std::string corpus_id_;
};

inline AssociationModel train(const Corpus& corpus) {
  if (corpus.empty()) throw ArgumentError("corpus", "cannot train on an empty corpus");
  CooccurrenceTable table(corpus);
  std::vector<Association> out;
  for (const auto& [f, row] : table.pairs()) {
    for (const auto& [c, k11] : row) {
      out.push_back({f, c, log_likelihood_ratio(table.table(f, c)), k11});
    }
  }
  return AssociationModel(std::move(out), corpus_id(corpus));
}

// Sums association strengths per controlled term over the distinct query
// tokens and returns the k strongest. Descriptors equal to a query token are
// skipped.
inline std::vector<Recommendation> recommend(const AssociationModel& model, const Query& query,
                                             std::size_t k) {
  if (k < 1) throw ArgumentError("k", "k must be >= 1");
  std::set<std::string> tokens(query.terms.begin(), query.terms.end());
  std::map<std::string, Recommendation> agg;
  std::map<std::string, std::uint64_t> max_support;
  for (const auto& t : tokens) {
    for (const auto& a : model.for_term(t)) {
      if (tokens.contains(a.controlled_term)) continue;
      auto& r = agg[a.controlled_term];
      r.term = a.controlled_term;
      r.strength += a.strength;
      auto& s = max_support[a.controlled_term];
      s = std::max(s, a.k11);
    }
  }
  std::vector<Recommendation> out;
  out.reserve(agg.size());
  for (auto& [term, r] : agg) {
    auto s = max_support[term];
    r.low_confidence = s > 0 && s < 2;
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.strength != b.strength) return a.strength > b.strength;
    return a.term < b.term;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

inline constexpr std::size_t kDefaultExpansion = 4;

// OR-expansion: appends the top-k recommended descriptors that the query does
// not already carry. Plain terms are untouched.
inline Query expand(Query query, const AssociationModel& model, std::size_t k) {
  if (k == 0) return query;
  std::set<std::string> have(query.terms.begin(), query.terms.end());
  for (const auto& e : query.expansion_terms) have.insert(controlled_key(e));
  for (auto& r : recommend(model, query, k)) {
    if (have.insert(r.term).second) query.expansion_terms.push_back(std::move(r.term));
  }
  return query;
}

// ---------------------------------------------------------------------------
// Persistence: free_term TAB controlled_term TAB strength (6 decimals), sorted
// by free term then descending strength.
// ---------------------------------------------------------------------------

inline void save_model(std::ostream& out, const AssociationModel& model) {
  char buf[64];
  for (const auto& a : model.associations()) {
    std::snprintf(buf, sizeof buf, "%.6f", a.strength);
    out << a.free_term << '\t' << a.controlled_term << '\t' << buf << '\n';
  }
  if (!out) throw IoError("write failed");
}

inline AssociationModel load_model(std::istream& in, std::string corpus_id = {}) {
  std::vector<Association> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos)
      throw ParseError(lineno, "expected three tab-separated fields");
    Association a;
    a.free_term = line.substr(0, t1);
    a.controlled_term = line.substr(t1 + 1, t2 - t1 - 1);
    try {
      std::size_t used = 0;
      auto text = line.substr(t2 + 1);
      a.strength = std::stod(text, &used);
      if (used != text.size() || a.strength < 0) throw std::invalid_argument("strength");
    } catch (const std::exception&) {
      throw ParseError(lineno, "invalid strength");
    }
    out.push_back(std::move(a));
  }
  return AssociationModel(std::move(out), std::move(corpus_id));
}

inline void save_model(const std::string& path, const AssociationModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write \"" + path + "\"");
  save_model(out, model);
}

inline AssociationModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file \"" + path + "\"");
  return load_model(in);
}

}  // namespace scirank
