// Regenerates the bundled data/ fixtures: the 200-record planted corpus, its
// topics, four service runs, simulated rater judgments and a single-author
// corpus.
//
//   scirank-fixture [OUT_DIR]      (default: ./data)

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "scirank/scirank.hpp"
#include "scirank/synthetic.hpp"

namespace fs = std::filesystem;
using namespace scirank;

namespace {

constexpr std::size_t kRaters = 5;
constexpr std::size_t kDepth = 10;
// Raters on these topics answer at random and fall below the kappa threshold.
const std::set<std::string> kNoisyTopics = {"T03", "T06", "T09"};

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    fs::path dir = argc > 1 ? argv[1] : "data";
    fs::create_directories(dir / "runs");

    auto planted = synthetic::planted_corpus();
    write_corpus((dir / "synthetic_corpus.jsonl").string(), planted.corpus);
    {
      auto out = open_out(dir / "topics.tsv");
      for (const auto& t : planted.topics) out << t.id << '\t' << t.query << '\n';
    }

    auto index = std::make_shared<const IndexedCorpus>(build_index(planted.corpus));
    auto model = std::make_shared<const AssociationModel>(train(planted.corpus));
    Engine engine(index, model);

    const std::map<std::string, SearchRequest> services = {
        {"tfidf", {"", RankingMode::Tfidf, std::nullopt, 0, kDepth}},
        {"str", {"", RankingMode::Tfidf, std::nullopt, kDefaultExpansion, kDepth}},
        {"brad", {"", RankingMode::Brad, std::nullopt, 0, kDepth}},
        {"auth", {"", RankingMode::Auth, std::nullopt, 0, kDepth}},
    };
    // topic -> judged pool
    std::map<std::string, std::set<std::string>> pools;
    for (const auto& [name, proto] : services) {
      auto out = open_out(dir / "runs" / (name + ".tsv"));
      for (const auto& t : planted.topics) {
        auto req = proto;
        req.query = t.query;
        auto ranked = engine.search(req).ranked;
        write_run(out, t.id, ranked);
        for (const auto& e : ranked.entries) pools[t.id].insert(e.doc_id);
      }
    }

    synthetic::Rng rng(7331);
    JudgmentSet::Ratings ratings;
    for (std::size_t ti = 0; ti < planted.topics.size(); ++ti) {
      const auto& topic = planted.topics[ti].id;
      bool noisy = kNoisyTopics.contains(topic);
      for (const auto& doc : pools[topic]) {
        bool truth = planted.relevant(ti, doc);
        for (std::size_t r = 0; r < kRaters; ++r) {
          bool rating = noisy ? rng.chance(0.5) : (rng.chance(0.05) ? !truth : truth);
          ratings[topic][doc]["s" + std::to_string(r + 1)] = rating;
        }
      }
    }
    {
      auto out = open_out(dir / "judgments.tsv");
      write_judgments(out, JudgmentSet(std::move(ratings)));
    }

    // Every record single-authored: the combined ranking discards everything.
    {
      std::vector<BibRecord> recs;
      for (int i = 1; i <= 10; ++i) {
        BibRecord r;
        r.doc_id = "solo" + std::to_string(i);
        r.title = (i <= 6 ? "Unemployment and labour markets, part " : "Housing and welfare, part ") +
                  std::to_string(i);
        r.abstract = i % 2 ? "Unemployment spells in regional panels." : "";
        r.controlled_terms = {"labor market policy"};
        r.authors = {"Solo, S" + std::to_string(i) + "."};
        r.journal = Journal{i <= 4 ? "Soziale Welt" : "Sozialer Fortschritt", std::nullopt};
        r.year = 2000 + i;
        recs.push_back(std::move(r));
      }
      write_corpus((dir / "single_author.jsonl").string(), Corpus(std::move(recs)));
    }
    std::cerr << "fixtures written to " << dir << '\n';
  } catch (const std::exception& e) {
    std::cerr << "scirank-fixture: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
