#pragma once

// Author centrality: co-authorship network of a result set, exact betweenness,
// document weighting and re-ranking.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scirank/corpus.hpp"
#include "scirank/error.hpp"
#include "scirank/search.hpp"

namespace scirank {

// Undirected, unweighted, no self-loops. Nodes are kept in ascending name order
// and adjacency lists are sorted, so every traversal is deterministic.
class CoauthorGraph {
 public:
  CoauthorGraph() = default;

  // Nodes and edges given by name. Self-loops and repeated edges are ignored.
  CoauthorGraph(std::vector<std::string> nodes,
                const std::vector<std::pair<std::string, std::string>>& edges, Query source = {})
      : source_(std::move(source)) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    names_ = std::move(nodes);
    for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
    adj_.resize(names_.size());
    for (const auto& [a, b] : edges) add_edge(node(a), node(b));
    for (auto& nbrs : adj_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t v) const { return names_[v]; }
  const std::vector<std::uint32_t>& neighbors(std::size_t v) const { return adj_[v]; }
  const Query& source() const noexcept { return source_; }

  std::optional<std::size_t> find(const std::string& author) const {
    auto it = index_.find(author);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool has_edge(const std::string& a, const std::string& b) const {
    auto u = find(a);
    auto v = find(b);
    if (!u || !v) return false;
    return std::binary_search(adj_[*u].begin(), adj_[*u].end(), static_cast<std::uint32_t>(*v));
  }

  // Each undirected edge once, as (lower name, higher name), ascending.
  std::vector<std::pair<std::string, std::string>> edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      for (auto v : adj_[u]) {
        if (u < v) out.emplace_back(names_[u], names_[v]);
      }
    }
    return out;
  }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& nbrs : adj_) n += nbrs.size();
    return n / 2;
  }

 private:
  std::size_t node(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ArgumentError("edges", "edge endpoint \"" + name + "\" is not a node");
    return it->second;
  }

  void add_edge(std::size_t u, std::size_t v) {
    if (u == v) return;
    adj_[u].push_back(static_cast<std::uint32_t>(v));
    adj_[v].push_back(static_cast<std::uint32_t>(u));
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::uint32_t>> adj_;
  Query source_;
};

// Nodes are the authors of the result documents; two authors are linked when
// they share at least one result document.
inline CoauthorGraph build_graph(const RankedList& result, const Corpus& corpus) {
  std::set<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& e : result.entries) {
    const auto* r = corpus.find(e.doc_id);
    if (!r) continue;
    const auto& by = r->authors;
    nodes.insert(by.begin(), by.end());
    for (std::size_t i = 0; i < by.size(); ++i) {
      for (std::size_t j = i + 1; j < by.size(); ++j) {
        if (by[i] == by[j]) continue;
        edges.insert(std::minmax(by[i], by[j]));
      }
    }
  }
  return CoauthorGraph({nodes.begin(), nodes.end()}, {edges.begin(), edges.end()}, result.query);
}

// author -> unnormalized betweenness
class CentralityMap {
 public:
  CentralityMap() = default;

  explicit CentralityMap(std::map<std::string, double> values) : values_(std::move(values)) {
    for (const auto& [_, v] : values_) a_max_ = std::max(a_max_, v);
  }

  const std::map<std::string, double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double a_max() const noexcept { return a_max_; }

  std::optional<double> get(const std::string& author) const {
    auto it = values_.find(author);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  // Highest first, ties by ascending name.
  std::vector<std::pair<std::string, double>> top(std::size_t n) const {
    std::vector<std::pair<std::string, double>> all(values_.begin(), values_.end());
    std::stable_sort(all.begin(), all.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (all.size() > n) all.resize(n);
    return all;
  }

 private:
  std::map<std::string, double> values_;
  double a_max_ = 0.0;
};

inline constexpr std::size_t kDefaultNodeCeiling = 5000;

struct BetweennessOptions {
  std::size_t max_nodes = kDefaultNodeCeiling;
  // 0 means std::thread::hardware_concurrency().
  unsigned threads = 1;
};

namespace detail {

// Single-source dependency accumulation: BFS from s counting shortest paths,
// then back-propagation in reverse BFS order. delta[s] is left at 0.
struct BrandesWorkspace {
  explicit BrandesWorkspace(std::size_t n) : sigma(n), dist(n), order(), preds(n), delta(n) {
    order.reserve(n);
  }

  void run(const CoauthorGraph& g, std::size_t s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();

    sigma[s] = 1.0;
    dist[s] = 0;
    std::deque<std::uint32_t> queue{static_cast<std::uint32_t>(s)};
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (auto w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto w = *it;
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
    }
    delta[s] = 0.0;
  }

  std::vector<double> sigma;
  std::vector<std::int64_t> dist;
  std::vector<std::uint32_t> order;
  std::vector<std::vector<std::uint32_t>> preds;
  std::vector<double> delta;
};

}  // namespace detail

// Exact betweenness on the undirected graph, each unordered pair counted once.
// Per-node sums are always accumulated in ascending source order, so the
// parallel path is bit-identical to the sequential one.
inline CentralityMap betweenness(const CoauthorGraph& g, const BetweennessOptions& opt = {}) {
  const std::size_t n = g.size();
  if (n > opt.max_nodes) throw GraphTooLarge(n, opt.max_nodes);
  std::vector<double> bc(n, 0.0);

  unsigned threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : opt.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

  if (threads <= 1) {
    detail::BrandesWorkspace ws(n);
    for (std::size_t s = 0; s < n; ++s) {
      ws.run(g, s);
      for (std::size_t v = 0; v < n; ++v) bc[v] += ws.delta[v];
    }
  } else {
    // Sources are processed in batches; each worker fills rows of the batch
    // buffer and the reduction walks the rows in source order.
    const std::size_t batch = std::max<std::size_t>(threads, 64);
    std::vector<std::vector<double>> rows(batch, std::vector<double>(n));
    for (std::size_t base = 0; base < n; base += batch) {
      const std::size_t count = std::min(batch, n - base);
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          detail::BrandesWorkspace ws(n);
          for (std::size_t i = t; i < count; i += threads) {
            ws.run(g, base + i);
            rows[i] = ws.delta;
          }
        });
      }
      for (auto& th : pool) th.join();
      for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t v = 0; v < n; ++v) bc[v] += rows[i][v];
      }
    }
  }

  std::map<std::string, double> values;
  for (std::size_t v = 0; v < n; ++v) values.emplace(g.name(v), bc[v] / 2.0);
  return CentralityMap(std::move(values));
}

// Highest betweenness among the document's authors; 0 when none is known.
inline double doc_weight(const BibRecord& d, const CentralityMap& cmap) {
  double w = 0.0;
  for (const auto& a : d.authors) {
    if (auto v = cmap.get(a)) w = std::max(w, *v);
  }
  return w;
}

// Stable sort by doc_weight descending; scores become the weights.
inline RankedList author_rerank(const RankedList& result, const CentralityMap& cmap,
                                const Corpus& corpus) {
  std::vector<std::pair<std::size_t, ScoredDoc>> keyed;
  keyed.reserve(result.entries.size());
  for (std::size_t i = 0; i < result.entries.size(); ++i) {
    const auto& id = result.entries[i].doc_id;
    const auto* r = corpus.find(id);
    keyed.push_back({i, {id, r ? doc_weight(*r, cmap) : 0.0}});
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.second.score != b.second.score) return a.second.score > b.second.score;
    if (a.first != b.first) return a.first < b.first;
    return a.second.doc_id < b.second.doc_id;
  });
  RankedList out{result.query, {}, RankingLabel::AUTH};
  out.entries.reserve(keyed.size());
  for (auto& [_, doc] : keyed) out.entries.push_back(std::move(doc));
  return out;
}

// W_a = doc_weight / A_max; 0 when A_max is 0.
inline double author_weight(const BibRecord& d, const CentralityMap& cmap) {
  if (cmap.a_max() <= 0.0) return 0.0;
  double w = doc_weight(d, cmap);
  if (w <= 0.0) return 0.0;
  return w / cmap.a_max();
}

// author1 TAB author2
inline void write_edge_list(std::ostream& out, const CoauthorGraph& g) {
  for (const auto& [a, b] : g.edges()) out << a << '\t' << b << '\n';
}

// author TAB betweenness (6 decimals), in node order.
inline void write_node_list(std::ostream& out, const CentralityMap& cmap) {
  char buf[64];
  for (const auto& [a, v] : cmap.values()) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    out << a << '\t' << buf << '\n';
  }
}

}  // namespace scirank
