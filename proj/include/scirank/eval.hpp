#pragma once

// Evaluation harness: precision@k, pairwise top-k overlap, Fleiss' kappa and
// kappa-threshold topic filtering, plus run/judgment file I/O and reports.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "scirank/error.hpp"
#include "scirank/search.hpp"

namespace scirank {

// |top-k ∩ relevant| / min(k, list length); an empty list scores 0.
inline double precision_at_k(const RankedList& ranked, const std::unordered_set<std::string>& relevant,
                             std::size_t k) {
  if (k < 1) throw ArgumentError("k", "k must be >= 1");
  const std::size_t depth = std::min(k, ranked.entries.size());
  if (depth == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) hits += relevant.contains(ranked.entries[i].doc_id);
  return static_cast<double>(hits) / static_cast<double>(depth);
}

inline std::set<std::string> top_k_ids(const RankedList& ranked, std::size_t k) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < std::min(k, ranked.entries.size()); ++i)
    out.insert(ranked.entries[i].doc_id);
  return out;
}

inline std::size_t overlap(const RankedList& a, const RankedList& b, std::size_t k) {
  if (k < 1) throw ArgumentError("k", "k must be >= 1");
  auto ta = top_k_ids(a, k);
  auto tb = top_k_ids(b, k);
  std::size_t n = 0;
  for (const auto& id : ta) n += tb.contains(id);
  return n;
}

// One row per subject, one column per category; each row sums to n raters.
// Returns exactly 1 for perfect agreement, including the all-one-category case
// where chance agreement is also 1.
//
// With A = sum of squared cells - N*n, S = sum of squared column totals and
// T = N*n, kappa = (A*T - S*(n-1)) / ((T*T - S)*(n-1)). Both sides are exact
// integers, so the only rounding is the final division and a table whose
// kappa is exactly 2/5 compares equal to 0.40.
inline double fleiss_kappa(std::span<const std::vector<std::size_t>> table, std::size_t n) {
  if (n < 2) throw ArgumentError("n", "Fleiss' kappa needs at least two raters");
  if (table.empty()) throw ArgumentError("table", "Fleiss' kappa needs at least one subject");
  const std::size_t categories = table.front().size();
  std::vector<__int128> col(categories, 0);
  __int128 squares = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& row = table[i];
    if (row.size() != categories)
      throw ArgumentError("table", "row " + std::to_string(i) + " has a different category count");
    std::size_t sum = 0;
    for (std::size_t j = 0; j < categories; ++j) {
      sum += row[j];
      squares += static_cast<__int128>(row[j]) * row[j];
      col[j] += row[j];
    }
    if (sum != n)
      throw ArgumentError("table", "row " + std::to_string(i) + " sums to " + std::to_string(sum) +
                                       ", expected " + std::to_string(n));
  }
  const __int128 nn = static_cast<__int128>(n);
  const __int128 t = static_cast<__int128>(table.size()) * nn;
  const __int128 a = squares - t;
  if (a == t * (nn - 1)) return 1.0;  // every subject unanimous
  __int128 s = 0;
  for (auto c : col) s += c * c;
  const __int128 num = a * t - s * (nn - 1);
  const __int128 den = (t * t - s) * (nn - 1);
  constexpr __int128 exact = __int128{1} << 53;
  if (num < exact && -num < exact && den < exact)
    return static_cast<double>(num) / static_cast<double>(den);
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

// ---------------------------------------------------------------------------
// Judgments
// ---------------------------------------------------------------------------

// Binary ratings per (topic, doc). Every document of a topic carries the same
// number of ratings.
class JudgmentSet {
 public:
  // topic -> doc_id -> rater_id -> rating
  using Ratings = std::map<std::string, std::map<std::string, std::map<std::string, bool>>>;

  JudgmentSet() = default;

  explicit JudgmentSet(Ratings ratings) : ratings_(std::move(ratings)) {
    for (const auto& [topic, docs] : ratings_) {
      std::size_t n = docs.empty() ? 0 : docs.begin()->second.size();
      for (const auto& [doc, raters] : docs) {
        if (raters.size() != n)
          throw ArgumentError("judgments", "topic \"" + topic + "\": document \"" + doc + "\" has " +
                                               std::to_string(raters.size()) + " ratings, expected " +
                                               std::to_string(n));
      }
      raters_.emplace(topic, n);
    }
  }

  const Ratings& ratings() const noexcept { return ratings_; }

  std::vector<std::string> topics() const {
    std::vector<std::string> out;
    for (const auto& [t, _] : ratings_) out.push_back(t);
    return out;
  }

  std::size_t raters(const std::string& topic) const {
    auto it = raters_.find(topic);
    return it == raters_.end() ? 0 : it->second;
  }

  // (relevant, not relevant) counts per judged document, in doc_id order.
  std::vector<std::vector<std::size_t>> table(const std::string& topic) const {
    std::vector<std::vector<std::size_t>> out;
    auto it = ratings_.find(topic);
    if (it == ratings_.end()) return out;
    for (const auto& [_, raters] : it->second) {
      std::size_t rel = 0;
      for (const auto& [__, r] : raters) rel += r;
      out.push_back({rel, raters.size() - rel});
    }
    return out;
  }

  // Documents a strict majority of raters judged relevant.
  std::unordered_set<std::string> relevant(const std::string& topic) const {
    std::unordered_set<std::string> out;
    auto it = ratings_.find(topic);
    if (it == ratings_.end()) return out;
    for (const auto& [doc, raters] : it->second) {
      std::size_t rel = 0;
      for (const auto& [_, r] : raters) rel += r;
      if (2 * rel > raters.size()) out.insert(doc);
    }
    return out;
  }

  double kappa(const std::string& topic) const { return fleiss_kappa(table(topic), raters(topic)); }

 private:
  Ratings ratings_;
  std::map<std::string, std::size_t> raters_;
};

// topic TAB doc_id TAB rater_id TAB 0|1
inline JudgmentSet read_judgments(std::istream& in) {
  JudgmentSet::Ratings ratings;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) f.push_back(cell);
    if (f.size() != 4) throw ParseError(lineno, "expected 4 tab-separated fields");
    if (f[3] != "0" && f[3] != "1") throw ParseError(lineno, "rating must be 0 or 1");
    auto& slot = ratings[f[0]][f[1]];
    if (!slot.emplace(f[2], f[3] == "1").second)
      throw ParseError(lineno, "rater \"" + f[2] + "\" rated \"" + f[1] + "\" twice");
  }
  return JudgmentSet(std::move(ratings));
}

inline JudgmentSet read_judgments(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open judgments file \"" + path + "\"");
  return read_judgments(in);
}

inline void write_judgments(std::ostream& out, const JudgmentSet& js) {
  for (const auto& [topic, docs] : js.ratings())
    for (const auto& [doc, raters] : docs)
      for (const auto& [rater, r] : raters)
        out << topic << '\t' << doc << '\t' << rater << '\t' << (r ? 1 : 0) << '\n';
}

struct TopicKappa {
  std::string topic;
  double kappa = 0.0;

  friend bool operator==(const TopicKappa&, const TopicKappa&) = default;
};

struct TopicFilter {
  std::vector<TopicKappa> kept;
  std::vector<TopicKappa> dropped;
};

inline constexpr double kKappaThreshold = 0.40;

// kappa >= threshold is kept.
inline TopicFilter drop_topics(const JudgmentSet& js, double threshold = kKappaThreshold) {
  TopicFilter out;
  for (const auto& t : js.topics()) {
    TopicKappa tk{t, js.kappa(t)};
    (tk.kappa >= threshold ? out.kept : out.dropped).push_back(std::move(tk));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runs: topic TAB rank TAB doc_id TAB score
// ---------------------------------------------------------------------------

// topic -> ranked list
using Run = std::map<std::string, RankedList>;

inline void write_run(std::ostream& out, const std::string& topic, const RankedList& ranked) {
  char buf[64];
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f", ranked.entries[i].score);
    out << topic << '\t' << (i + 1) << '\t' << ranked.entries[i].doc_id << '\t' << buf << '\n';
  }
}

inline Run read_run(std::istream& in) {
  std::map<std::string, std::vector<std::pair<std::size_t, ScoredDoc>>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) f.push_back(cell);
    if (f.size() != 4) throw ParseError(lineno, "expected 4 tab-separated fields");
    try {
      rows[f[0]].push_back({std::stoul(f[1]), {f[2], std::stod(f[3])}});
    } catch (const std::exception&) {
      throw ParseError(lineno, "invalid rank or score");
    }
  }
  Run run;
  for (auto& [topic, entries] : rows) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    RankedList rl;
    for (auto& [_, d] : entries) rl.entries.push_back(std::move(d));
    run.emplace(topic, std::move(rl));
  }
  return run;
}

inline Run read_run(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open run file \"" + path + "\"");
  return read_run(in);
}

// Canonical service order first, anything else after in name order.
inline std::vector<std::string> order_services(std::vector<std::string> names) {
  static const std::vector<std::string> canonical = {"tfidf", "str", "brad", "auth", "combined"};
  auto rank = [](const std::string& n) {
    auto it = std::find(canonical.begin(), canonical.end(), n);
    return static_cast<std::size_t>(it - canonical.begin());
  };
  std::sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
    auto ra = rank(a);
    auto rb = rank(b);
    if (ra != rb) return ra < rb;
    return a < b;
  });
  return names;
}

// Every *.tsv file in dir, keyed by file stem.
inline std::map<std::string, Run> read_runs(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("runs directory \"" + dir + "\" does not exist");
  std::map<std::string, Run> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".tsv") continue;
    out.emplace(entry.path().stem().string(), read_run(entry.path().string()));
  }
  if (out.empty()) throw IoError("no *.tsv run files in \"" + dir + "\"");
  return out;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct EvalReport {
  std::size_t k = 10;
  double threshold = kKappaThreshold;
  std::vector<std::string> services;
  std::vector<TopicKappa> kept;
  std::vector<TopicKappa> dropped;
  // service -> topic -> precision@k (kept topics only)
  std::map<std::string, std::map<std::string, double>> precision;
  // service -> macro average over kept topics
  std::map<std::string, double> mean_precision;
  // topic -> [i][j] top-k overlap between services i and j
  std::map<std::string, std::vector<std::vector<std::size_t>>> topic_overlap;
  // [i][j] relevant documents shared by the top-k of services i and j,
  // summed over kept topics
  std::vector<std::vector<std::size_t>> relevant_overlap;
};

inline EvalReport evaluate(const JudgmentSet& js, const std::map<std::string, Run>& runs,
                           std::size_t k = 10, double threshold = kKappaThreshold) {
  if (k < 1) throw ArgumentError("k", "k must be >= 1");
  EvalReport rep;
  rep.k = k;
  rep.threshold = threshold;
  std::vector<std::string> names;
  for (const auto& [n, _] : runs) names.push_back(n);
  rep.services = order_services(std::move(names));
  auto filt = drop_topics(js, threshold);
  rep.kept = filt.kept;
  rep.dropped = filt.dropped;

  const std::size_t s = rep.services.size();
  rep.relevant_overlap.assign(s, std::vector<std::size_t>(s, 0));
  const RankedList empty;
  auto list_for = [&](const std::string& svc, const std::string& topic) -> const RankedList& {
    const auto& run = runs.at(svc);
    auto it = run.find(topic);
    return it == run.end() ? empty : it->second;
  };

  for (const auto& [topic, _] : rep.kept) {
    auto rel = js.relevant(topic);
    auto& mat = rep.topic_overlap[topic];
    mat.assign(s, std::vector<std::size_t>(s, 0));
    std::vector<std::set<std::string>> rel_top(s);
    for (std::size_t i = 0; i < s; ++i) {
      const auto& li = list_for(rep.services[i], topic);
      rep.precision[rep.services[i]][topic] = precision_at_k(li, rel, k);
      for (const auto& id : top_k_ids(li, k)) {
        if (rel.contains(id)) rel_top[i].insert(id);
      }
    }
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        mat[i][j] = overlap(list_for(rep.services[i], topic), list_for(rep.services[j], topic), k);
        for (const auto& id : rel_top[i]) rep.relevant_overlap[i][j] += rel_top[j].contains(id);
      }
    }
  }
  for (const auto& svc : rep.services) {
    const auto& per = rep.precision[svc];
    double sum = 0.0;
    for (const auto& [_, p] : per) sum += p;
    rep.mean_precision[svc] = per.empty() ? 0.0 : sum / static_cast<double>(per.size());
  }
  return rep;
}

inline nlohmann::json to_json(const EvalReport& rep) {
  nlohmann::json j;
  j["k"] = rep.k;
  j["kappa_threshold"] = rep.threshold;
  j["averaging"] = "macro";
  j["precision_denominator"] = "min(k, list length)";
  j["relevance"] = "strict rater majority";
  j["services"] = rep.services;
  for (const auto& svc : rep.services) {
    j["precision_at_k"][svc]["mean"] = rep.mean_precision.at(svc);
    j["precision_at_k"][svc]["per_topic"] = rep.precision.count(svc) ? nlohmann::json(rep.precision.at(svc))
                                                                     : nlohmann::json::object();
  }
  j["relevant_overlap"] = rep.relevant_overlap;
  j["topic_overlap"] = nlohmann::json::object();
  for (const auto& [t, m] : rep.topic_overlap) j["topic_overlap"][t] = m;
  auto kappas = [](const std::vector<TopicKappa>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& tk : v) a.push_back({{"topic", tk.topic}, {"kappa", tk.kappa}});
    return a;
  };
  j["kept_topics"] = kappas(rep.kept);
  j["dropped_topics"] = kappas(rep.dropped);
  return j;
}

inline void write_report_table(std::ostream& out, const EvalReport& rep) {
  char buf[64];
  out << "Precision@" << rep.k << " (macro average over " << rep.kept.size() << " kept topics)\n";
  for (const auto& svc : rep.services) {
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * rep.mean_precision.at(svc));
    out << "  " << svc << '\t' << buf << '\n';
  }
  out << "\nRelevant top-" << rep.k << " overlap (summed over kept topics)\n\t";
  for (const auto& svc : rep.services) out << svc << '\t';
  out << '\n';
  std::size_t off_diagonal = 0;
  for (std::size_t i = 0; i < rep.services.size(); ++i) {
    out << rep.services[i] << '\t';
    for (std::size_t j = 0; j < rep.services.size(); ++j) {
      out << rep.relevant_overlap[i][j] << '\t';
      if (i < j) off_diagonal += rep.relevant_overlap[i][j];
    }
    out << '\n';
  }
  out << "  pairwise intersections in total: " << off_diagonal << '\n';
  out << "\nFleiss' kappa per topic (threshold " << rep.threshold << ", kept if >=)\n";
  std::vector<std::pair<std::string, std::pair<double, bool>>> all;
  for (const auto& tk : rep.kept) all.push_back({tk.topic, {tk.kappa, true}});
  for (const auto& tk : rep.dropped) all.push_back({tk.topic, {tk.kappa, false}});
  std::sort(all.begin(), all.end());
  for (const auto& [t, v] : all) {
    std::snprintf(buf, sizeof buf, "%.4f", v.first);
    out << "  " << t << '\t' << buf << '\t' << (v.second ? "kept" : "dropped") << '\n';
  }
  out << "\nDropped topics: ";
  for (std::size_t i = 0; i < rep.dropped.size(); ++i) out << (i ? ", " : "") << rep.dropped[i].topic;
  if (rep.dropped.empty()) out << "(none)";
  out << '\n';
}

}  // namespace scirank
