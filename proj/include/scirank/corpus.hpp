#pragma once

// Bibliographic record model, line-delimited corpus I/O and record validation.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "scirank/error.hpp"

namespace scirank {

struct Journal {
  std::string name;
  std::optional<std::string> issn;

  // ISSN when present, otherwise the exact journal name.
  const std::string& key() const noexcept { return issn ? *issn : name; }

  friend bool operator==(const Journal&, const Journal&) = default;
};

struct BibRecord {
  std::string doc_id;
  std::string title;
  std::string abstract;
  std::vector<std::string> controlled_terms;
  std::vector<std::string> authors;
  std::optional<Journal> journal;
  std::optional<int> year;

  friend bool operator==(const BibRecord&, const BibRecord&) = default;
};

struct Violation {
  std::string field;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

namespace detail {

inline bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace detail

inline std::string trim(std::string_view s) {
  auto b = s.begin();
  auto e = s.end();
  while (b != e && detail::is_space(*b)) ++b;
  while (e != b && detail::is_space(*(e - 1))) --e;
  return std::string(b, e);
}

// Checks the record-level invariants. Violations are data; nothing throws.
inline std::vector<Violation> validate(const BibRecord& r) {
  std::vector<Violation> out;
  if (r.doc_id.empty()) out.push_back({"doc_id", "doc_id must be non-empty"});
  if (trim(r.title).empty()) out.push_back({"title", "title must be non-empty"});

  std::unordered_set<std::string_view> seen;
  for (const auto& a : r.authors) {
    if (a.empty()) {
      out.push_back({"authors", "author name must be non-empty"});
    } else if (trim(a) != a) {
      out.push_back({"authors", "author name \"" + a + "\" is not trimmed"});
    } else if (!seen.insert(a).second) {
      out.push_back({"authors", "duplicate author \"" + a + "\""});
    }
  }
  if (r.journal && trim(r.journal->name).empty())
    out.push_back({"journal", "journal name must be non-empty"});
  if (r.journal && r.journal->issn && trim(*r.journal->issn).empty())
    out.push_back({"journal", "issn must be non-empty when present"});
  return out;
}

// Immutable after construction; doc_id uniqueness is enforced on construction.
class Corpus {
 public:
  Corpus() = default;

  explicit Corpus(std::vector<BibRecord> records) : records_(std::move(records)) {
    by_id_.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
      if (!by_id_.emplace(records_[i].doc_id, i).second)
        throw DuplicateIdError(i + 1, records_[i].doc_id);
    }
  }

  const std::vector<BibRecord>& records() const noexcept { return records_; }
  std::size_t n_docs() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  const BibRecord& operator[](std::size_t i) const { return records_[i]; }

  const BibRecord* find(std::string_view doc_id) const {
    auto it = by_id_.find(std::string(doc_id));
    return it == by_id_.end() ? nullptr : &records_[it->second];
  }

  std::optional<std::size_t> position(std::string_view doc_id) const {
    auto it = by_id_.find(std::string(doc_id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
  }

  // Must be a member doc_id.
  const BibRecord& at(std::string_view doc_id) const {
    if (const auto* r = find(doc_id)) return *r;
    throw ArgumentError("doc_id", "unknown doc_id \"" + std::string(doc_id) + "\"");
  }

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.records_ == b.records_; }

 private:
  std::vector<BibRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

struct CorpusStats {
  std::size_t n_docs = 0;
  std::size_t n_distinct_journals = 0;
  std::size_t n_distinct_authors = 0;
  std::size_t n_distinct_controlled_terms = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

inline CorpusStats stats(const Corpus& corpus) {
  std::unordered_set<std::string> journals;
  std::unordered_set<std::string> authors;
  std::unordered_set<std::string> terms;
  for (const auto& r : corpus.records()) {
    if (r.journal) journals.insert(r.journal->key());
    authors.insert(r.authors.begin(), r.authors.end());
    terms.insert(r.controlled_terms.begin(), r.controlled_terms.end());
  }
  return {corpus.n_docs(), journals.size(), authors.size(), terms.size()};
}

// FNV-1a over the serialized records; identifies a corpus in service provenance.
std::string corpus_id(const Corpus& corpus);

// ---------------------------------------------------------------------------
// Line format
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const BibRecord& r) {
  nlohmann::json j;
  j["id"] = r.doc_id;
  j["title"] = r.title;
  j["abstract"] = r.abstract;
  j["controlled_terms"] = r.controlled_terms;
  j["authors"] = r.authors;
  if (r.journal) {
    nlohmann::json jr;
    jr["name"] = r.journal->name;
    if (r.journal->issn) jr["issn"] = *r.journal->issn;
    j["journal"] = std::move(jr);
  }
  if (r.year) j["year"] = *r.year;
  return j;
}

inline std::string serialize_record(const BibRecord& r) { return to_json(r).dump(); }

namespace detail {

inline std::vector<std::string> string_array(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw std::invalid_argument(std::string(key) + " must be an array");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_string())
      throw std::invalid_argument(std::string(key) + " must contain only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline std::string required_string(const nlohmann::json& j, const char* key) {
  if (!j.is_string()) throw std::invalid_argument(std::string(key) + " must be a string");
  return j.get<std::string>();
}

}  // namespace detail

// Parses one corpus line. Author names are trimmed; no other normalization.
// Throws std::invalid_argument describing the offending key.
inline BibRecord parse_record(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("record must be a JSON object");

  static const std::set<std::string, std::less<>> known = {
      "id", "title", "abstract", "controlled_terms", "authors", "journal", "year"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument("unknown key \"" + key + "\"");
  }

  auto present = [&](const char* key) { return j.contains(key) && !j[key].is_null(); };

  BibRecord r;
  if (!present("id")) throw std::invalid_argument("missing key \"id\"");
  if (!present("title")) throw std::invalid_argument("missing key \"title\"");
  r.doc_id = detail::required_string(j["id"], "id");
  r.title = detail::required_string(j["title"], "title");
  if (present("abstract")) r.abstract = detail::required_string(j["abstract"], "abstract");
  if (present("controlled_terms"))
    r.controlled_terms = detail::string_array(j["controlled_terms"], "controlled_terms");
  if (present("authors")) {
    r.authors = detail::string_array(j["authors"], "authors");
    for (auto& a : r.authors) a = trim(a);
  }
  if (present("journal")) {
    const auto& jr = j["journal"];
    if (!jr.is_object()) throw std::invalid_argument("journal must be an object");
    for (const auto& [key, _] : jr.items()) {
      if (key != "name" && key != "issn")
        throw std::invalid_argument("unknown journal key \"" + key + "\"");
    }
    Journal journal;
    if (jr.contains("name") && !jr["name"].is_null())
      journal.name = detail::required_string(jr["name"], "journal.name");
    if (jr.contains("issn") && !jr["issn"].is_null())
      journal.issn = detail::required_string(jr["issn"], "journal.issn");
    r.journal = std::move(journal);
  }
  if (present("year")) {
    if (!j["year"].is_number_integer()) throw std::invalid_argument("year must be an integer");
    r.year = j["year"].get<int>();
  }
  return r;
}

// Reads line-delimited records. Blank lines are skipped; line numbers in errors
// are 1-based physical lines.
inline Corpus read_corpus(std::istream& in) {
  std::vector<BibRecord> records;
  std::unordered_map<std::string, std::size_t> first_seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    BibRecord r;
    try {
      r = parse_record(line);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
    if (auto v = validate(r); !v.empty()) throw ParseError(lineno, v.front().message);
    if (!first_seen.emplace(r.doc_id, lineno).second) throw DuplicateIdError(lineno, r.doc_id);
    records.push_back(std::move(r));
  }
  if (in.bad()) throw IoError("read error");
  return Corpus(std::move(records));
}

inline Corpus ingest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file \"" + path + "\"");
  return read_corpus(in);
}

inline void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& r : corpus.records()) out << serialize_record(r) << '\n';
}

inline void write_corpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write \"" + path + "\"");
  write_corpus(out, corpus);
}

inline std::string corpus_id(const Corpus& corpus) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& r : corpus.records()) {
    for (unsigned char c : serialize_record(r)) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= '\n';
    h *= 1099511628211ULL;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

}  // namespace scirank
