#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dehealth/corpus.hpp"
#include "dehealth/stylometry.hpp"

namespace dehealth {

// User correlation graph extended with per-user attribute profiles. Nodes
// are users; an undirected edge connects users that posted under the same
// topic, weighted by the number of distinct shared topics.
class UdaGraph {
 public:
  UdaGraph(std::vector<std::string> users,
           std::map<std::pair<std::size_t, std::size_t>, int> edges,
           std::map<std::string, AttributeProfile> profiles)
      : users_(std::move(users)),
        profiles_(std::move(profiles)),
        adjacency_(users_.size()) {
    for (std::size_t i = 0; i < users_.size(); ++i)
      index_[users_[i]] = i;
    for (const auto& [pair, w] : edges) {
      const auto [i, j] = pair;
      if (i == j) throw std::invalid_argument("UdaGraph: self loop");
      if (w < 1) throw std::invalid_argument("UdaGraph: non-positive weight");
      adjacency_[i].emplace_back(j, w);
      adjacency_[j].emplace_back(i, w);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
    for (const auto& u : users_)
      if (!profiles_.count(u))
        throw std::invalid_argument("UdaGraph: user " + u + " has no profile");
  }

  std::size_t size() const { return users_.size(); }
  const std::vector<std::string>& users() const { return users_; }

  std::size_t index_of(const std::string& user) const {
    const auto it = index_.find(user);
    if (it == index_.end())
      throw std::out_of_range("UdaGraph: unknown user " + user);
    return it->second;
  }

  bool contains(const std::string& user) const { return index_.count(user) > 0; }

  // Neighbors of node i as (neighbor index, weight), index-ascending.
  const std::vector<std::pair<std::size_t, int>>& neighbors(std::size_t i) const {
    return adjacency_[i];
  }

  std::size_t degree(std::size_t i) const { return adjacency_[i].size(); }

  std::int64_t weighted_degree(std::size_t i) const {
    std::int64_t total = 0;
    for (const auto& [j, w] : adjacency_[i]) total += w;
    return total;
  }

  const AttributeProfile& profile(const std::string& user) const {
    return profiles_.at(user);
  }

  std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& nbrs : adjacency_) total += nbrs.size();
    return total / 2;
  }

 private:
  std::vector<std::string> users_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, AttributeProfile> profiles_;
  std::vector<std::vector<std::pair<std::size_t, int>>> adjacency_;
};

// Builds the graph from a corpus: users sharing at least one topic_id are
// connected, the weight counting their distinct shared topics.
inline UdaGraph build_graph(const Corpus& corpus,
                            const std::map<std::string, AttributeProfile>& profiles) {
  if (corpus.posts.empty()) throw std::invalid_argument("build_graph: empty corpus");
  std::vector<std::string> users(corpus.users.begin(), corpus.users.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < users.size(); ++i) index[users[i]] = i;
  for (const auto& u : users)
    if (!profiles.count(u))
      throw std::invalid_argument("build_graph: user " + u + " has no profile");

  std::map<std::string, std::set<std::size_t>> topic_members;
  for (const auto& p : corpus.posts)
    topic_members[p.topic_id].insert(index.at(p.user_id));

  std::map<std::pair<std::size_t, std::size_t>, int> edges;
  for (const auto& [topic, members] : topic_members) {
    for (auto i = members.begin(); i != members.end(); ++i) {
      auto j = i;
      for (++j; j != members.end(); ++j) ++edges[{*i, *j}];
    }
  }
  return UdaGraph(std::move(users), std::move(edges), profiles);
}

// Per-user structural features: degree, weighted degree, the decreasing
// vector of incident edge weights (NCS), and hop/weighted distances to the
// landmark users.
struct StructuralFeatures {
  std::string user_id;
  std::size_t degree = 0;
  std::int64_t weighted_degree = 0;
  std::vector<int> ncs;                 // non-increasing
  std::vector<double> landmark_hops;    // |S| entries
  std::vector<double> landmark_wdists;  // |S| entries
};

// The h highest-degree users, degree-descending, ties broken by user id so
// the selection is stable across runs.
inline std::vector<std::string> pick_landmarks(const UdaGraph& g, std::size_t h) {
  if (h < 1 || h > g.size())
    throw std::invalid_argument("pick_landmarks: need 1 <= h <= |V|, got " +
                                std::to_string(h) + " for " +
                                std::to_string(g.size()) + " users");
  std::vector<std::size_t> order(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    return g.users()[a] < g.users()[b];
  });
  std::vector<std::string> landmarks;
  landmarks.reserve(h);
  for (std::size_t i = 0; i < h; ++i) landmarks.push_back(g.users()[order[i]]);
  return landmarks;
}

namespace graph_detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Hop distances from a source (BFS).
inline std::vector<double> bfs_hops(const UdaGraph& g, std::size_t src) {
  std::vector<double> dist(g.size(), kInf);
  std::deque<std::size_t> queue;
  dist[src] = 0.0;
  queue.push_back(src);
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (const auto& [v, w] : g.neighbors(u)) {
      if (dist[v] == kInf) {
        dist[v] = dist[u] + 1.0;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

// Weighted distances from a source with edge length 1/w (strong
// co-discussion = short edge), via Dijkstra.
inline std::vector<double> dijkstra_inverse_weight(const UdaGraph& g,
                                                   std::size_t src) {
  std::vector<double> dist(g.size(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src] = 0.0;
  heap.push({0.0, src});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, w] : g.neighbors(u)) {
      const double nd = d + 1.0 / static_cast<double>(w);
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.push({nd, v});
      }
    }
  }
  return dist;
}

}  // namespace graph_detail

// Landmark distance table for a whole graph. Unreachable pairs are encoded
// with the sentinel 2*(max finite distance)+1, computed separately for hop
// and weighted metrics, so vectors stay finite on disconnected graphs.
class StructuralFeatureTable {
 public:
  StructuralFeatureTable(const UdaGraph& g,
                         const std::vector<std::string>& landmarks)
      : graph_(&g) {
    const std::size_t n = g.size();
    hop_.assign(landmarks.size(), {});
    wdist_.assign(landmarks.size(), {});
    double max_hop = 0.0, max_w = 0.0;
    for (std::size_t s = 0; s < landmarks.size(); ++s) {
      const std::size_t src = g.index_of(landmarks[s]);
      hop_[s] = graph_detail::bfs_hops(g, src);
      wdist_[s] = graph_detail::dijkstra_inverse_weight(g, src);
      for (std::size_t i = 0; i < n; ++i) {
        if (hop_[s][i] != graph_detail::kInf) max_hop = std::max(max_hop, hop_[s][i]);
        if (wdist_[s][i] != graph_detail::kInf) max_w = std::max(max_w, wdist_[s][i]);
      }
    }
    hop_sentinel_ = 2.0 * max_hop + 1.0;
    wdist_sentinel_ = 2.0 * max_w + 1.0;
  }

  double hop_sentinel() const { return hop_sentinel_; }
  double wdist_sentinel() const { return wdist_sentinel_; }

  StructuralFeatures features_for(const std::string& user) const {
    const UdaGraph& g = *graph_;
    const std::size_t i = g.index_of(user);
    StructuralFeatures f;
    f.user_id = user;
    f.degree = g.degree(i);
    f.weighted_degree = g.weighted_degree(i);
    f.ncs.reserve(f.degree);
    for (const auto& [j, w] : g.neighbors(i)) f.ncs.push_back(w);
    std::sort(f.ncs.rbegin(), f.ncs.rend());
    f.landmark_hops.reserve(hop_.size());
    f.landmark_wdists.reserve(wdist_.size());
    for (std::size_t s = 0; s < hop_.size(); ++s) {
      const double h = hop_[s][i];
      const double w = wdist_[s][i];
      f.landmark_hops.push_back(h == graph_detail::kInf ? hop_sentinel_ : h);
      f.landmark_wdists.push_back(w == graph_detail::kInf ? wdist_sentinel_ : w);
    }
    return f;
  }

 private:
  const UdaGraph* graph_;
  std::vector<std::vector<double>> hop_;    // [landmark][node]
  std::vector<std::vector<double>> wdist_;  // [landmark][node]
  double hop_sentinel_ = 1.0;
  double wdist_sentinel_ = 1.0;
};

// Convenience single-user form; builds the full table, so prefer
// StructuralFeatureTable when querying many users.
inline StructuralFeatures structural_features(
    const UdaGraph& g, const std::string& user,
    const std::vector<std::string>& landmarks) {
  return StructuralFeatureTable(g, landmarks).features_for(user);
}

inline std::map<std::size_t, std::size_t> degree_distribution(const UdaGraph& g) {
  std::map<std::size_t, std::size_t> histogram;
  for (std::size_t i = 0; i < g.size(); ++i) ++histogram[g.degree(i)];
  return histogram;
}

// --- Exports ---------------------------------------------------------------

inline void write_edge_list(const UdaGraph& g, std::ostream& out) {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (const auto& [j, w] : g.neighbors(i))
      if (i < j) out << g.users()[i] << " " << g.users()[j] << " " << w << "\n";
}

inline void write_degree_histogram_csv(const UdaGraph& g, std::ostream& out) {
  out << "degree,users\n";
  for (const auto& [d, count] : degree_distribution(g))
    out << d << "," << count << "\n";
}

inline Json profiles_to_json(const UdaGraph& g) {
  Json j = Json::object();
  for (const auto& u : g.users()) {
    Json weights = Json::object();
    for (const auto& [idx, w] : g.profile(u).weights)
      weights[std::to_string(idx)] = w;
    j[u] = weights;
  }
  return j;
}

}  // namespace dehealth
