#pragma once

// Deterministic synthetic corpora: a topic-structured social-science corpus
// with planted relevance, and unstructured random corpora for property tests.
// Only std::mt19937_64 raw output is used, so results are identical across
// standard libraries.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "scirank/corpus.hpp"
#include "scirank/search.hpp"

namespace scirank::synthetic {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(gen_() % n); }
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }

  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

enum class DocRole { Core, Decoy, Synonym };

struct Topic {
  std::string id;
  std::string query;
  std::vector<std::string> synonyms;      // free text used instead of the query words
  std::vector<std::string> context;       // topical free text
  std::vector<std::string> descriptors;   // [0] primary, rest secondary
  Journal core_journal;
  Journal second_journal;
};

struct PlantedCorpus {
  Corpus corpus;
  std::vector<Topic> topics;
  // doc_id -> (topic index, role)
  std::map<std::string, std::pair<std::size_t, DocRole>> truth;

  // Core and synonym documents of a topic are the relevant ones.
  bool relevant(std::size_t topic, const std::string& doc_id) const {
    auto it = truth.find(doc_id);
    return it != truth.end() && it->second.first == topic && it->second.second != DocRole::Decoy;
  }
};

inline std::vector<Topic> social_science_topics() {
  auto j = [](std::string name, std::string issn) { return Journal{std::move(name), std::move(issn)}; };
  return {
      {"T01", "unemployment", {"joblessness", "jobseekers"}, {"labour", "employment", "benefits", "workforce"},
       {"labor market policy", "long-term joblessness", "employment service"},
       j("Zeitschrift fuer Arbeitsmarktforschung", "0340-3254"), j("Labour Economics Review", "0927-5371")},
      {"T02", "financial crisis", {"banking collapse", "credit crunch"}, {"banks", "markets", "recession", "debt"},
       {"stock market", "economic problems", "international economic organizations"},
       j("Internationale Politik und Gesellschaft", "0945-2419"), j("Review of Finance and Society", "1572-3097")},
      {"T03", "migration", {"immigrants", "newcomers"}, {"asylum", "borders", "diaspora", "naturalization"},
       {"immigration policy", "ethnic minorities", "integration"},
       j("Migration Studies Quarterly", "2049-5838"), j("Journal of Ethnic Research", "1369-183X")},
      {"T04", "education inequality", {"schooling gaps", "attainment differences"}, {"pupils", "schools", "tracking", "achievement"},
       {"educational opportunity", "social inequality", "school system"},
       j("Zeitschrift fuer Erziehungswissenschaft", "1434-663X"), j("Sociology of Education Letters", "0038-0407")},
      {"T05", "youth violence", {"adolescent aggression", "juvenile offending"}, {"adolescents", "gangs", "bullying", "prevention"},
       {"juvenile delinquency", "aggression", "violence prevention"},
       j("Journal of Youth Studies", "1367-6261"), j("Criminology Review", "0011-1384")},
      {"T06", "family policy", {"parental benefits", "childcare provision"}, {"parents", "children", "households", "fertility"},
       {"child care", "parental leave", "family benefits"},
       j("Zeitschrift fuer Familienforschung", "1437-2940"), j("Journal of Family Issues", "0192-513X")},
      {"T07", "political participation", {"voter turnout", "civic involvement"}, {"elections", "voters", "parties", "protest"},
       {"voting behavior", "civic engagement", "democracy"},
       j("Politische Vierteljahresschrift", "0032-3470"), j("Electoral Studies Letters", "0261-3794")},
      {"T08", "health care", {"medical provision", "hospital services"}, {"patients", "hospitals", "physicians", "insurance"},
       {"health policy", "health insurance", "medical care"},
       j("Gesundheitswesen Journal", "0941-3790"), j("Health Services Review", "0017-9124")},
      {"T09", "gender wage gap", {"pay disparity", "earnings differential"}, {"women", "earnings", "occupations", "discrimination"},
       {"wage discrimination", "women's employment", "equal pay"},
       j("Feministische Studien", "0723-5186"), j("Gender and Work Review", "0950-0170")},
      {"T10", "urban poverty", {"deprived neighbourhoods", "city destitution"}, {"neighbourhoods", "housing", "segregation", "welfare"},
       {"social exclusion", "housing shortage", "urban development"},
       j("Stadtforschung und Statistik", "0934-8867"), j("Urban Affairs Letters", "0042-0816")},
  };
}

inline const std::vector<Journal>& general_journals() {
  static const std::vector<Journal> js = {
      {"Koelner Zeitschrift fuer Soziologie", std::string("0023-2653")},
      {"Soziale Welt", std::string("0038-6073")},
      {"European Sociological Review", std::string("0266-7215")},
      {"Social Science Research", std::string("0049-089X")},
      {"Berliner Journal fuer Soziologie", std::nullopt},
      {"Sozialer Fortschritt", std::nullopt},
  };
  return js;
}

inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> w = {
      "study",    "analysis", "evidence", "germany",     "survey",   "results",  "effects",
      "panel",    "trends",   "europe",   "comparison",  "data",     "approach", "findings",
      "regional", "national", "structure", "development", "framework", "sample",  "change"};
  return w;
}

inline const std::vector<std::string>& generic_descriptors() {
  static const std::vector<std::string> d = {"social research", "empirical study", "survey research",
                                             "methodology"};
  return d;
}

namespace detail {

inline std::string sentence(Rng& rng, const std::vector<std::string>& words, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += rng.pick(words);
  }
  return out;
}

inline std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace detail

// 10 topics x 20 documents = 200 records. Per topic:
//   8 core docs    - query words once, primary + secondary descriptors, the
//                    topic's collaboration cluster, mostly the core journal;
//   6 decoy docs   - query words repeated (high tf), generic descriptors,
//                    isolated authors, scattered or no journal; not relevant;
//   6 synonym docs - no query words, topical descriptors and cluster authors.
inline PlantedCorpus planted_corpus(std::uint64_t seed = 20110101) {
  Rng rng(seed);
  PlantedCorpus out;
  out.topics = social_science_topics();
  std::vector<BibRecord> recs;
  std::size_t next_id = 1;
  std::size_t loner = 1;

  auto doc_id = [&] {
    char buf[16];
    std::snprintf(buf, sizeof buf, "doc%04zu", next_id++);
    return std::string(buf);
  };
  auto topical_journal = [&](const Topic& t) -> std::optional<Journal> {
    double u = rng.uniform();
    if (u < 0.65) return t.core_journal;
    if (u < 0.88) return t.second_journal;
    return rng.pick(general_journals());
  };
  auto descriptors = [&](const Topic& t) {
    std::vector<std::string> d{t.descriptors[0]};
    std::vector<std::string> rest(t.descriptors.begin() + 1, t.descriptors.end());
    rng.shuffle(rest);
    std::size_t take = 1 + rng.below(rest.size());
    d.insert(d.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(take));
    return d;
  };

  for (std::size_t ti = 0; ti < out.topics.size(); ++ti) {
    const auto& t = out.topics[ti];
    const std::string tag = t.id.substr(1);
    const std::string hub = "Hub, H." + tag;
    const std::string b1 = "Bridge, A." + tag;
    const std::string b2 = "Bridge, B." + tag;
    auto member = [&](int m) { return "Member, M" + std::to_string(m) + "." + tag; };

    // Bylines for the 8 core docs keep hub and both bridges central in any
    // result set containing them.
    const std::vector<std::vector<std::string>> core_bylines = {
        {hub, b1},        {hub, b2},       {b1, member(1)}, {b1, member(2), member(3)},
        {b2, member(4)},  {b2, member(5)}, {hub, member(6)}, {hub, b1, member(1)}};

    for (std::size_t i = 0; i < 8; ++i) {
      BibRecord r;
      r.doc_id = doc_id();
      r.title = detail::capitalize(t.query) + " and " + rng.pick(t.context) + " in " +
                rng.pick(filler_words());
      r.abstract = detail::capitalize(detail::sentence(rng, t.context, 3)) + " " +
                   detail::sentence(rng, filler_words(), 5) + ".";
      if (i == 5) r.abstract.clear();
      r.controlled_terms = descriptors(t);
      r.authors = core_bylines[i];
      r.journal = topical_journal(t);
      r.year = 1995 + static_cast<int>(rng.below(16));
      out.truth.emplace(r.doc_id, std::make_pair(ti, DocRole::Core));
      recs.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < 6; ++i) {
      BibRecord r;
      r.doc_id = doc_id();
      r.title = detail::capitalize(t.query) + ": " + rng.pick(filler_words()) + " " +
                rng.pick(filler_words());
      r.abstract = "On " + t.query + " " + detail::sentence(rng, filler_words(), 6) + ".";
      r.controlled_terms = {rng.pick(generic_descriptors())};
      r.authors = {"Loner, L" + std::to_string(loner++) + "."};
      if (i % 3 == 2) r.authors.push_back("Loner, L" + std::to_string(loner++) + ".");
      if (!rng.chance(0.25)) r.journal = rng.pick(general_journals());
      r.year = 1995 + static_cast<int>(rng.below(16));
      out.truth.emplace(r.doc_id, std::make_pair(ti, DocRole::Decoy));
      recs.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < 6; ++i) {
      BibRecord r;
      r.doc_id = doc_id();
      r.title = detail::capitalize(rng.pick(t.synonyms)) + " and " + rng.pick(t.context);
      r.abstract = detail::capitalize(detail::sentence(rng, t.context, 2)) + " " +
                   rng.pick(t.synonyms) + " " + detail::sentence(rng, filler_words(), 4) + ".";
      r.controlled_terms = descriptors(t);
      const std::string& lead = i % 3 == 0 ? hub : (i % 3 == 1 ? b1 : b2);
      r.authors = {lead, member(7 + static_cast<int>(i % 3))};
      r.journal = topical_journal(t);
      r.year = 1995 + static_cast<int>(rng.below(16));
      out.truth.emplace(r.doc_id, std::make_pair(ti, DocRole::Synonym));
      recs.push_back(std::move(r));
    }
  }
  out.corpus = Corpus(std::move(recs));
  return out;
}

struct RandomCorpusParams {
  std::size_t n_docs = 100;
  std::size_t vocabulary = 40;
  std::size_t descriptors = 12;
  std::size_t authors = 30;
  std::size_t journals = 8;
  std::size_t max_words = 12;
  std::size_t max_descriptors = 3;
  std::size_t max_authors = 4;
  double journal_missing = 0.1;
};

// Unstructured corpus with Zipf-like word and journal frequencies.
inline Corpus random_corpus(std::uint64_t seed, const RandomCorpusParams& p = {}) {
  Rng rng(seed);
  auto skewed = [&](std::size_t n) {
    // min of two uniforms favours low indices
    return std::min(rng.below(n), rng.below(n));
  };
  std::vector<BibRecord> recs;
  recs.reserve(p.n_docs);
  for (std::size_t d = 0; d < p.n_docs; ++d) {
    BibRecord r;
    r.doc_id = "r" + std::to_string(d);
    std::size_t words = 1 + rng.below(p.max_words);
    for (std::size_t w = 0; w < words; ++w) {
      auto& field = w < 3 ? r.title : r.abstract;
      if (!field.empty()) field += ' ';
      field += "w" + std::to_string(skewed(p.vocabulary));
    }
    std::set<std::string> desc;
    for (std::size_t c = rng.below(p.max_descriptors + 1); c > 0; --c)
      desc.insert("c" + std::to_string(skewed(p.descriptors)));
    r.controlled_terms.assign(desc.begin(), desc.end());
    std::set<std::string> by;
    for (std::size_t a = rng.below(p.max_authors + 1); a > 0; --a)
      by.insert("a" + std::to_string(rng.below(p.authors)));
    r.authors.assign(by.begin(), by.end());
    rng.shuffle(r.authors);
    if (!rng.chance(p.journal_missing)) {
      auto j = skewed(p.journals);
      r.journal = Journal{"J" + std::to_string(j),
                          j % 2 ? std::optional<std::string>("issn-" + std::to_string(j))
                                : std::nullopt};
    }
    recs.push_back(std::move(r));
  }
  return Corpus(std::move(recs));
}

}  // namespace scirank::synthetic
