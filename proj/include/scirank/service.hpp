#pragma once

// HTTP surface over Engine. Read-only: the index and model are shared,
// immutable state; graphs and centrality maps are request-local.
//
//   POST /v1/search
//   GET  /v1/terms/recommend?q=..&k=..
//   GET  /v1/journals/zones?q=..
//   GET  /v1/authors/centrality?q=..
//   GET  /v1/corpus/stats
//   GET  /v1/health

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>

#include <httplib.h>
#include <json.hpp>

#include "scirank/engine.hpp"
#include "scirank/error.hpp"

namespace scirank {

inline constexpr std::size_t kCentralityTop = 50;

inline nlohmann::json to_json(const Query& q) {
  return {{"raw", q.raw}, {"terms", q.terms}, {"expansion_terms", q.expansion_terms}};
}

inline nlohmann::json to_json(const Provenance& p) {
  return {{"corpus_id", p.corpus_id},
          {"str_model", p.str_model},
          {"ranking_version", p.ranking_version}};
}

inline nlohmann::json to_json(const SearchResponse& resp, const Provenance& prov) {
  nlohmann::json j;
  j["ranking_label"] = to_string(resp.ranked.label);
  j["query"] = to_json(resp.ranked.query);
  j["total"] = resp.total;
  j["entries"] = nlohmann::json::array();
  for (std::size_t i = 0; i < resp.ranked.entries.size(); ++i) {
    const auto& e = resp.ranked.entries[i];
    nlohmann::json row{{"rank", i + 1}, {"doc_id", e.doc_id}, {"score", e.score}};
    if (i < resp.factors.size()) {
      const auto& f = resp.factors[i];
      row["factors"] = {{"tfidf_norm", f.tfidf_norm}, {"w_j", f.w_j}, {"w_a", f.w_a}};
    }
    j["entries"].push_back(std::move(row));
  }
  if (resp.discarded) {
    j["discarded"] = {{"total", resp.discarded->total},
                      {"zero_w_j", resp.discarded->zero_journal_weight},
                      {"zero_w_a", resp.discarded->zero_author_weight}};
  }
  j["provenance"] = to_json(prov);
  return j;
}

// Field-level validation of a POST /v1/search body.
inline SearchRequest parse_search_request(std::string_view body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    throw ArgumentError("body", "request body is not valid JSON");
  }
  if (!j.is_object()) throw ArgumentError("body", "request body must be an object");

  auto count = [&](const char* key, std::size_t fallback, std::size_t min) -> std::size_t {
    if (!j.contains(key) || j[key].is_null()) return fallback;
    const auto& v = j[key];
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min))
      throw ArgumentError(key, std::string(key) + " must be an integer >= " + std::to_string(min));
    return v.get<std::size_t>();
  };

  SearchRequest req;
  if (!j.contains("query") || !j["query"].is_string())
    throw ArgumentError("query", "query must be a string");
  req.query = j["query"].get<std::string>();
  if (j.contains("ranking")) {
    if (!j["ranking"].is_string()) throw ArgumentError("ranking", "ranking must be a string");
    req.ranking = parse_ranking_mode(j["ranking"].get<std::string>());
  }
  if (j.contains("chain") && !j["chain"].is_null()) {
    if (!j["chain"].is_string()) throw ArgumentError("chain", "chain must be a string");
    req.chain = j["chain"].get<std::string>();
  }
  req.expand = count("expand", 0, 0);
  req.k = count("k", 10, 1);
  check_request(req);
  return req;
}

namespace detail {

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

inline void send_error(httplib::Response& res, int status, const std::string& field,
                       const std::string& message) {
  send_json(res, status, {{"error", message}, {"field", field}});
}

inline std::string require_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) throw ArgumentError(name, std::string("missing parameter ") + name);
  return req.get_param_value(name);
}

inline std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  auto text = req.get_param_value(name);
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || v < 1)
    throw ArgumentError(name, std::string(name) + " must be a positive integer");
  return v;
}

// Maps library exceptions onto HTTP statuses.
template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const ArgumentError& e) {
    send_error(res, 400, e.field(), e.what());
  } catch (const GraphTooLarge& e) {
    send_error(res, 422, "q", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "", e.what());
  }
}

}  // namespace detail

inline nlohmann::json zones_json(const Engine& engine, const std::string& q) {
  auto [ranking, p] = engine.zones(q);
  auto zone = [&](const std::vector<std::string>& keys, std::size_t total) {
    nlohmann::json journals = nlohmann::json::array();
    for (const auto& k : keys) journals.push_back({{"journal", k}, {"count", ranking.count(k)}});
    return nlohmann::json{{"journals", journals}, {"articles", total}};
  };
  return {{"query", q},
          {"j_max", ranking.j_max()},
          {"total_articles", ranking.total_articles()},
          {"core", zone(p.core, p.core_articles)},
          {"zone2", zone(p.zone2, p.zone2_articles)},
          {"zone3", zone(p.zone3, p.zone3_articles)},
          {"provenance", to_json(engine.provenance())}};
}

inline nlohmann::json centrality_json(const Engine& engine, const std::string& q) {
  auto [g, cmap] = engine.centrality(q);
  nlohmann::json authors = nlohmann::json::array();
  for (const auto& [name, v] : cmap.top(kCentralityTop))
    authors.push_back({{"author", name}, {"betweenness", v}});
  return {{"query", q},
          {"nodes", g.size()},
          {"edges", g.edge_count()},
          {"a_max", cmap.a_max()},
          {"authors", authors},
          {"provenance", to_json(engine.provenance())}};
}

inline nlohmann::json recommend_json(const Engine& engine, const std::string& q, std::size_t k) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : engine.recommend_terms(q, k))
    recs.push_back({{"term", r.term}, {"strength", r.strength}, {"low_confidence", r.low_confidence}});
  return {{"query", q}, {"recommendations", recs}, {"provenance", to_json(engine.provenance())}};
}

inline nlohmann::json stats_json(const Engine& engine) {
  auto s = engine.corpus_stats();
  return {{"n_docs", s.n_docs},
          {"n_distinct_journals", s.n_distinct_journals},
          {"n_distinct_authors", s.n_distinct_authors},
          {"n_distinct_controlled_terms", s.n_distinct_controlled_terms},
          {"provenance", to_json(engine.provenance())}};
}

// The engine must outlive the server.
inline void register_routes(httplib::Server& srv, const Engine& engine) {
  srv.Post("/v1/search", [&engine](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] {
      auto sreq = parse_search_request(req.body);
      detail::send_json(res, 200, to_json(engine.search(sreq), engine.provenance()));
    });
  });
  srv.Get("/v1/terms/recommend", [&engine](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] {
      auto q = detail::require_param(req, "q");
      auto k = detail::size_param(req, "k", kDefaultExpansion);
      detail::send_json(res, 200, recommend_json(engine, q, k));
    });
  });
  srv.Get("/v1/journals/zones", [&engine](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] { detail::send_json(res, 200, zones_json(engine, detail::require_param(req, "q"))); });
  });
  srv.Get("/v1/authors/centrality", [&engine](const httplib::Request& req, httplib::Response& res) {
    detail::guarded(res, [&] {
      detail::send_json(res, 200, centrality_json(engine, detail::require_param(req, "q")));
    });
  });
  srv.Get("/v1/corpus/stats", [&engine](const httplib::Request&, httplib::Response& res) {
    detail::send_json(res, 200, stats_json(engine));
  });
  srv.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
    detail::send_json(res, 200, {{"status", "ok"}});
  });
}

}  // namespace scirank
