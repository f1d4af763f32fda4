#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dehealth/hungarian.hpp"
#include "dehealth/stylometry.hpp"
#include "dehealth/uda_graph.hpp"

namespace dehealth {

// Component weights for the structural similarity
// s = c1*degree + c2*distance + c3*attribute, plus the landmark count.
struct SimilarityConfig {
  double c1 = 0.05;
  double c2 = 0.05;
  double c3 = 0.9;
  std::size_t landmarks = 50;

  void validate() const {
    if (c1 < 0 || c2 < 0 || c3 < 0 || c1 + c2 + c3 <= 0)
      throw std::invalid_argument("similarity config: weights must be nonnegative and not all zero");
    if (landmarks < 1)
      throw std::invalid_argument("similarity config: landmarks must be >= 1");
  }
};

namespace sim_detail {

// Cosine with implicit zero padding of the shorter vector; zero vectors
// yield 0 so disconnected users stay comparable.
template <typename A, typename B>
double cosine(const A& a, const B& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i)
    dot += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  for (std::size_t i = 0; i < a.size(); ++i)
    na += static_cast<double>(a[i]) * static_cast<double>(a[i]);
  for (std::size_t i = 0; i < b.size(); ++i)
    nb += static_cast<double>(b[i]) * static_cast<double>(b[i]);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// min/max ratio with 0/0 = 0 (two empty observations carry no evidence).
inline double min_max_ratio(double a, double b) {
  const double hi = std::max(a, b);
  if (hi == 0.0) return 0.0;
  return std::min(a, b) / hi;
}

}  // namespace sim_detail

// Degree similarity in [0, 3]: degree ratio + weighted-degree ratio + NCS
// cosine.
inline double degree_similarity(const StructuralFeatures& fu,
                                const StructuralFeatures& fv) {
  return sim_detail::min_max_ratio(static_cast<double>(fu.degree),
                                   static_cast<double>(fv.degree)) +
         sim_detail::min_max_ratio(static_cast<double>(fu.weighted_degree),
                                   static_cast<double>(fv.weighted_degree)) +
         sim_detail::cosine(fu.ncs, fv.ncs);
}

// Distance similarity in [0, 2]: cosine of hop and weighted landmark
// distance vectors. Landmark vectors must have equal length on both sides.
inline double distance_similarity(const StructuralFeatures& fu,
                                  const StructuralFeatures& fv) {
  if (fu.landmark_hops.size() != fv.landmark_hops.size())
    throw std::invalid_argument(
        "distance_similarity: landmark vectors differ in length (" +
        std::to_string(fu.landmark_hops.size()) + " vs " +
        std::to_string(fv.landmark_hops.size()) + ")");
  return sim_detail::cosine(fu.landmark_hops, fv.landmark_hops) +
         sim_detail::cosine(fu.landmark_wdists, fv.landmark_wdists);
}

// Attribute similarity in [0, 2]: Jaccard over attribute sets plus weighted
// Jaccard with min/max weights on the intersection/union.
inline double attribute_similarity(const AttributeProfile& pu,
                                   const AttributeProfile& pv) {
  if (pu.schema_id != pv.schema_id)
    throw std::invalid_argument("attribute_similarity: profiles from different schemas");
  std::size_t inter = 0, uni = 0;
  long long w_inter = 0, w_union = 0;
  auto it_u = pu.weights.begin();
  auto it_v = pv.weights.begin();
  while (it_u != pu.weights.end() || it_v != pv.weights.end()) {
    if (it_v == pv.weights.end() ||
        (it_u != pu.weights.end() && it_u->first < it_v->first)) {
      ++uni;
      w_union += it_u->second;
      ++it_u;
    } else if (it_u == pu.weights.end() || it_v->first < it_u->first) {
      ++uni;
      w_union += it_v->second;
      ++it_v;
    } else {
      ++uni;
      ++inter;
      w_inter += std::min(it_u->second, it_v->second);
      w_union += std::max(it_u->second, it_v->second);
      ++it_u;
      ++it_v;
    }
  }
  double result = 0.0;
  if (uni > 0)
    result += static_cast<double>(inter) / static_cast<double>(uni);
  if (w_union > 0)
    result += static_cast<double>(w_inter) / static_cast<double>(w_union);
  return result;
}

// Dense anonymized x auxiliary similarity matrix. Row/column order follows
// the graphs' sorted user lists.
struct SimilarityMatrix {
  std::vector<std::string> rows;  // anonymized users
  std::vector<std::string> cols;  // auxiliary users
  std::vector<std::vector<double>> s;
  // Component matrices, retained when requested.
  std::vector<std::vector<double>> sd, ss, sa;

  double at(std::size_t i, std::size_t j) const { return s[i][j]; }

  std::size_t row_index(const std::string& user) const {
    const auto it = std::find(rows.begin(), rows.end(), user);
    if (it == rows.end())
      throw std::out_of_range("similarity matrix: unknown row user " + user);
    return static_cast<std::size_t>(it - rows.begin());
  }

  std::size_t col_index(const std::string& user) const {
    const auto it = std::find(cols.begin(), cols.end(), user);
    if (it == cols.end())
      throw std::out_of_range("similarity matrix: unknown column user " + user);
    return static_cast<std::size_t>(it - cols.begin());
  }

  double score(const std::string& u, const std::string& v) const {
    return s[row_index(u)][col_index(v)];
  }

  void write_csv(std::ostream& out) const {
    out << "user";
    for (const auto& c : cols) out << "," << c;
    out << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out << rows[i];
      for (std::size_t j = 0; j < cols.size(); ++j) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", s[i][j]);
        out << "," << buf;
      }
      out << "\n";
    }
  }
};

// Computes all pairwise structural similarities between two graphs. The
// landmark count is clamped to the smaller graph so distance vectors line
// up across sides.
inline SimilarityMatrix similarity_matrix(const UdaGraph& g1, const UdaGraph& g2,
                                          const SimilarityConfig& cfg,
                                          bool keep_components = false) {
  cfg.validate();
  if (g1.size() == 0 || g2.size() == 0)
    throw std::invalid_argument("similarity_matrix: empty graph");
  const std::size_t h = std::min({cfg.landmarks, g1.size(), g2.size()});
  const StructuralFeatureTable table1(g1, pick_landmarks(g1, h));
  const StructuralFeatureTable table2(g2, pick_landmarks(g2, h));

  std::vector<StructuralFeatures> f1, f2;
  f1.reserve(g1.size());
  f2.reserve(g2.size());
  for (const auto& u : g1.users()) f1.push_back(table1.features_for(u));
  for (const auto& v : g2.users()) f2.push_back(table2.features_for(v));

  SimilarityMatrix m;
  m.rows = g1.users();
  m.cols = g2.users();
  m.s.assign(m.rows.size(), std::vector<double>(m.cols.size(), 0.0));
  if (keep_components) {
    m.sd = m.s;
    m.ss = m.s;
    m.sa = m.s;
  }
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const AttributeProfile& pu = g1.profile(m.rows[i]);
    for (std::size_t j = 0; j < m.cols.size(); ++j) {
      const double sd = degree_similarity(f1[i], f2[j]);
      const double ss = distance_similarity(f1[i], f2[j]);
      const double sa = attribute_similarity(pu, g2.profile(m.cols[j]));
      m.s[i][j] = cfg.c1 * sd + cfg.c2 * ss + cfg.c3 * sa;
      if (keep_components) {
        m.sd[i][j] = sd;
        m.ss[i][j] = ss;
        m.sa[i][j] = sa;
      }
    }
  }
  return m;
}

// Per anonymized user: ordered candidates or an explicit abstain verdict.
struct CandidateSet {
  std::string user;
  std::vector<std::pair<std::string, double>> candidates;
  bool abstain = false;
};

using CandidateMap = std::map<std::string, CandidateSet>;

// Direct Top-K selection: per row the K highest-scoring columns,
// score-descending, ties broken by auxiliary user id.
inline CandidateMap topk_direct(const SimilarityMatrix& sim, std::size_t k) {
  if (k < 1 || k > sim.cols.size())
    throw std::invalid_argument("topk_direct: need 1 <= K <= " +
                                std::to_string(sim.cols.size()));
  CandidateMap out;
  std::vector<std::size_t> order(sim.cols.size());
  for (std::size_t i = 0; i < sim.rows.size(); ++i) {
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(k),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        if (sim.s[i][a] != sim.s[i][b])
                          return sim.s[i][a] > sim.s[i][b];
                        return sim.cols[a] < sim.cols[b];
                      });
    CandidateSet set;
    set.user = sim.rows[i];
    set.candidates.reserve(k);
    for (std::size_t j = 0; j < k; ++j)
      set.candidates.emplace_back(sim.cols[order[j]], sim.s[i][order[j]]);
    out[set.user] = std::move(set);
  }
  return out;
}

// Matching-based Top-K selection: K rounds of maximum-weight bipartite
// matching; each round's matched pairs are appended and their edges removed.
// Users left unmatched in a round receive no candidate that round.
inline CandidateMap topk_matching(const SimilarityMatrix& sim, std::size_t k) {
  if (k < 1 || k > sim.cols.size())
    throw std::invalid_argument("topk_matching: need 1 <= K <= " +
                                std::to_string(sim.cols.size()));
  const std::size_t n1 = sim.rows.size(), n2 = sim.cols.size();
  // Any real similarity (>= 0) dominates kExcluded, so excluded edges are
  // used only when a round cannot otherwise complete, and dropped below.
  const double kExcluded = -1e18;
  std::vector<std::vector<bool>> used(n1, std::vector<bool>(n2, false));
  CandidateMap out;
  for (std::size_t i = 0; i < n1; ++i) out[sim.rows[i]].user = sim.rows[i];

  for (std::size_t round = 0; round < k; ++round) {
    const auto assignment = max_weight_assignment(
        n1, n2, [&](std::size_t i, std::size_t j) {
          return used[i][j] ? kExcluded : sim.s[i][j];
        });
    for (std::size_t i = 0; i < n1; ++i) {
      const std::size_t j = assignment[i];
      if (j == static_cast<std::size_t>(-1) || used[i][j]) continue;
      used[i][j] = true;
      out[sim.rows[i]].candidates.emplace_back(sim.cols[j], sim.s[i][j]);
    }
  }
  return out;
}

// Threshold-vector filtering over candidate sets.
struct FilterConfig {
  double epsilon = 0.01;
  std::size_t levels = 10;
};

struct FilterResult {
  CandidateMap sets;
  std::vector<double> thresholds;
};

// Keeps, per user, the candidates at the first (largest) threshold that
// leaves the set non-empty; users failing even the smallest threshold
// abstain. Thresholds run from the global maximum score down to the global
// minimum + epsilon.
inline FilterResult filter_candidates(const CandidateMap& sets,
                                      const SimilarityMatrix& sim,
                                      const FilterConfig& cfg) {
  if (sets.empty())
    throw std::invalid_argument("filter_candidates: no candidate sets");
  if (cfg.levels < 2)
    throw std::invalid_argument("filter_candidates: levels must be >= 2");
  double s_max = -std::numeric_limits<double>::infinity();
  double s_min = std::numeric_limits<double>::infinity();
  for (const auto& row : sim.s)
    for (const double x : row) {
      s_max = std::max(s_max, x);
      s_min = std::min(s_min, x);
    }
  if (cfg.epsilon < 0.0 || cfg.epsilon > s_max - s_min)
    throw std::invalid_argument(
        "filter_candidates: epsilon must lie in [0, max score - min score]");
  const double s_upper = s_max;
  const double s_lower = s_min + cfg.epsilon;

  FilterResult result;
  result.thresholds.resize(cfg.levels);
  for (std::size_t i = 0; i < cfg.levels; ++i)
    result.thresholds[i] =
        s_upper - (static_cast<double>(i) / static_cast<double>(cfg.levels - 1)) *
                      (s_upper - s_lower);

  for (const auto& [user, set] : sets) {
    CandidateSet filtered;
    filtered.user = user;
    bool found = false;
    for (const double t : result.thresholds) {
      std::vector<std::pair<std::string, double>> kept;
      for (const auto& cand : set.candidates)
        if (cand.second >= t) kept.push_back(cand);
      if (!kept.empty()) {
        filtered.candidates = std::move(kept);
        found = true;
        break;
      }
    }
    filtered.abstain = !found;
    result.sets[user] = std::move(filtered);
  }
  return result;
}

inline Json candidate_map_to_json(const CandidateMap& sets) {
  Json j = Json::object();
  for (const auto& [user, set] : sets) {
    if (set.abstain) {
      j[user] = "abstain";
    } else {
      Json arr = Json::array();
      for (const auto& [cand, score] : set.candidates)
        arr.push_back(Json::array({cand, score}));
      j[user] = arr;
    }
  }
  return j;
}

}  // namespace dehealth
