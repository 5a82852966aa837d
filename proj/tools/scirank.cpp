// scirank command line: ingest, index, train-str, search, zones, graph, eval, serve.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "scirank/scirank.hpp"
#include "scirank/service.hpp"

namespace {

using namespace scirank;

struct Sources {
  std::string corpus;
  std::string index;
  std::string model;
  std::size_t max_nodes = kDefaultNodeCeiling;
  unsigned threads = 1;
};

void add_sources(CLI::App* cmd, Sources& src, bool with_model) {
  auto* c = cmd->add_option("--corpus", src.corpus, "Line-delimited corpus file");
  auto* i = cmd->add_option("--index", src.index, "Index file written by `scirank index`");
  c->excludes(i);
  if (with_model) cmd->add_option("--model", src.model, "STR model file (trained on the fly if absent)");
  cmd->add_option("--max-nodes", src.max_nodes, "Co-authorship graph node ceiling");
  cmd->add_option("--threads", src.threads, "Betweenness worker threads (0 = all cores)");
}

std::shared_ptr<const IndexedCorpus> load_sources(const Sources& src) {
  if (!src.index.empty()) return std::make_shared<const IndexedCorpus>(load_index(src.index));
  if (!src.corpus.empty()) return std::make_shared<const IndexedCorpus>(build_index(ingest(src.corpus)));
  throw ArgumentError("corpus", "one of --corpus or --index is required");
}

Engine make_engine(const Sources& src, bool need_model) {
  auto index = load_sources(src);
  std::shared_ptr<const AssociationModel> model;
  if (!src.model.empty()) {
    model = std::make_shared<const AssociationModel>(load_model(src.model));
  } else if (need_model && !index->corpus().empty()) {
    model = std::make_shared<const AssociationModel>(train(index->corpus()));
  }
  return Engine(std::move(index), std::move(model), {src.max_nodes, src.threads});
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void print_ranked(std::ostream& out, const RankedList& ranked) {
  for (std::size_t i = 0; i < ranked.entries.size(); ++i)
    out << (i + 1) << '\t' << ranked.entries[i].doc_id << '\t' << fixed6(ranked.entries[i].score) << '\n';
}

void note_discards(const SearchResponse& resp) {
  if (!resp.discarded || resp.discarded->total == 0 || resp.total != 0) return;
  const auto& d = *resp.discarded;
  const char* why = d.zero_author_weight == d.total   ? "W_a = 0"
                    : d.zero_journal_weight == d.total ? "W_j = 0"
                                                       : "W_j = 0 or W_a = 0";
  std::cerr << "all documents discarded (" << why << ")\n";
}

// topic TAB query
std::vector<std::pair<std::string, std::string>> read_topics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open topics file \"" + path + "\"");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(lineno, "expected topic TAB query");
    out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Science-model ranking services over a bibliographic corpus", "scirank"};
  app.require_subcommand(1);

  Sources src;

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a corpus file and print its summary");
  std::string ingest_out;
  ingest_cmd->add_option("--corpus", src.corpus, "Line-delimited corpus file")->required();
  ingest_cmd->add_option("--out", ingest_out, "Write the normalized corpus here");

  // index
  auto* index_cmd = app.add_subcommand("index", "Build and persist the inverted index");
  index_cmd->add_option("--corpus", src.corpus, "Line-delimited corpus file")->required();
  index_cmd->add_option("--index", src.index, "Output index file")->required();

  // train-str
  auto* train_cmd = app.add_subcommand("train-str", "Train the co-word term recommender");
  std::string model_out;
  add_sources(train_cmd, src, false);
  train_cmd->add_option("--out", model_out, "Output model file")->required();

  // search
  auto* search_cmd = app.add_subcommand("search", "Rank documents for a query");
  std::string rank = "tfidf";
  std::string chain;
  std::optional<std::size_t> expand;
  std::size_t k = 10;
  std::string query_text;
  std::string topics_path;
  std::string run_out;
  add_sources(search_cmd, src, true);
  search_cmd->add_option("--rank", rank, "tfidf, str, brad, auth, combined or chain");
  search_cmd->add_option("--chain", chain, "Filter chain, e.g. str:4,brad:core,auth:1");
  search_cmd->add_option("--expand", expand, "STR expansion size");
  search_cmd->add_option("--k", k, "Result limit")->check(CLI::PositiveNumber);
  search_cmd->add_option("query", query_text, "Query text");
  search_cmd->add_option("--topics", topics_path, "Batch mode: topic TAB query file");
  search_cmd->add_option("--out", run_out, "Batch mode: run file to write");

  // zones
  auto* zones_cmd = app.add_subcommand("zones", "Bradford zones of a query's result set");
  add_sources(zones_cmd, src, false);
  zones_cmd->add_option("query", query_text, "Query text")->required();

  // graph
  auto* graph_cmd = app.add_subcommand("graph", "Co-authorship graph and betweenness of a result set");
  std::string edges_out;
  std::string nodes_out;
  add_sources(graph_cmd, src, false);
  graph_cmd->add_option("query", query_text, "Query text")->required();
  graph_cmd->add_option("--edges", edges_out, "Edge list output (default: stdout)");
  graph_cmd->add_option("--nodes", nodes_out, "Node/betweenness output (default: stdout)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate runs against judgments");
  std::string judgments_path;
  std::string runs_dir;
  std::string report_path = "eval_report.json";
  double threshold = kKappaThreshold;
  eval_cmd->add_option("--judgments", judgments_path, "topic TAB doc TAB rater TAB 0|1")->required();
  eval_cmd->add_option("--runs", runs_dir, "Directory of <service>.tsv run files")->required();
  eval_cmd->add_option("--k", k, "Precision cutoff")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--threshold", threshold, "Fleiss' kappa threshold");
  eval_cmd->add_option("--report", report_path, "Report file (JSON); a .txt table is written alongside");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the ranking services over HTTP");
  int port = 8080;
  std::string host = "127.0.0.1";
  add_sources(serve_cmd, src, true);
  serve_cmd->add_option("--port", port, "Listen port");
  serve_cmd->add_option("--host", host, "Listen address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "scirank: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*ingest_cmd) {
      auto corpus = ingest(src.corpus);
      auto s = stats(corpus);
      std::cout << "n_docs\t" << s.n_docs << "\nn_distinct_journals\t" << s.n_distinct_journals
                << "\nn_distinct_authors\t" << s.n_distinct_authors << "\nn_distinct_controlled_terms\t"
                << s.n_distinct_controlled_terms << '\n';
      if (!ingest_out.empty()) write_corpus(ingest_out, corpus);
    } else if (*index_cmd) {
      auto index = build_index(ingest(src.corpus));
      save_index(src.index, index);
      std::cerr << "indexed " << index.n_docs() << " documents\n";
    } else if (*train_cmd) {
      auto index = load_sources(src);
      auto model = train(index->corpus());
      save_model(model_out, model);
      std::cerr << "trained " << model.size() << " associations\n";
    } else if (*search_cmd) {
      SearchRequest req;
      if (rank == "str") {
        req.ranking = RankingMode::Tfidf;
        req.expand = expand.value_or(kDefaultExpansion);
      } else {
        req.ranking = parse_ranking_mode(rank);
        req.expand = expand.value_or(0);
      }
      if (!chain.empty()) req.chain = chain;
      req.k = k;
      check_request(req);
      auto engine = make_engine(src, req.expand > 0 || (req.chain && req.chain->rfind("str", 0) == 0));
      if (!topics_path.empty()) {
        if (run_out.empty()) throw ArgumentError("out", "--topics requires --out");
        std::ofstream out(run_out, std::ios::trunc);
        if (!out) throw IoError("cannot write \"" + run_out + "\"");
        for (const auto& [topic, q] : read_topics(topics_path)) {
          req.query = q;
          write_run(out, topic, engine.search(req).ranked);
        }
      } else {
        if (query_text.empty()) throw ArgumentError("query", "a query is required");
        req.query = query_text;
        auto resp = engine.search(req);
        print_ranked(std::cout, resp.ranked);
        note_discards(resp);
      }
    } else if (*zones_cmd) {
      auto engine = make_engine(src, false);
      auto [ranking, partition] = engine.zones(query_text);
      write_zone_report(std::cout, partition, ranking);
    } else if (*graph_cmd) {
      auto engine = make_engine(src, false);
      auto [g, cmap] = engine.centrality(query_text);
      auto emit = [](const std::string& path, auto&& writer) {
        if (path.empty()) {
          writer(std::cout);
          return;
        }
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw IoError("cannot write \"" + path + "\"");
        writer(out);
      };
      emit(edges_out, [&](std::ostream& o) { write_edge_list(o, g); });
      emit(nodes_out, [&](std::ostream& o) { write_node_list(o, cmap); });
    } else if (*eval_cmd) {
      auto js = read_judgments(judgments_path);
      auto runs = read_runs(runs_dir);
      auto rep = evaluate(js, runs, k, threshold);
      {
        std::ofstream out(report_path, std::ios::trunc);
        if (!out) throw IoError("cannot write \"" + report_path + "\"");
        out << to_json(rep).dump(2) << '\n';
      }
      std::ostringstream table;
      write_report_table(table, rep);
      std::ofstream(std::filesystem::path(report_path).replace_extension(".txt"), std::ios::trunc)
          << table.str();
      std::cout << table.str();
    } else if (*serve_cmd) {
      auto engine = make_engine(src, true);
      httplib::Server srv;
      register_routes(srv, engine);
      if (!srv.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
      std::cerr << "listening on http://" << host << ':' << port << '\n';
      srv.listen_after_bind();
    }
  } catch (const ArgumentError& e) {
    std::cerr << "scirank: " << e.field() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "scirank: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
