#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dehealth/matcher.hpp"
#include "dehealth/rng.hpp"
#include "dehealth/stylometry.hpp"
#include "dehealth/uda_graph.hpp"

namespace dehealth {

struct TrainingInstance {
  std::string label;
  std::vector<double> vector;
};

// Per-dimension min-max scaling fit on training data; transformed values are
// clipped to [0, 1] so unseen test values cannot leave the training range.
class MinMaxScaler {
 public:
  void fit(const std::vector<TrainingInstance>& instances) {
    if (instances.empty())
      throw std::invalid_argument("MinMaxScaler: no training instances");
    const std::size_t dim = instances.front().vector.size();
    min_.assign(dim, std::numeric_limits<double>::infinity());
    max_.assign(dim, -std::numeric_limits<double>::infinity());
    for (const auto& inst : instances) {
      if (inst.vector.size() != dim)
        throw std::invalid_argument("MinMaxScaler: inconsistent dimensions");
      for (std::size_t d = 0; d < dim; ++d) {
        min_[d] = std::min(min_[d], inst.vector[d]);
        max_[d] = std::max(max_[d], inst.vector[d]);
      }
    }
  }

  std::vector<double> transform(const std::vector<double>& x) const {
    if (x.size() != min_.size())
      throw std::invalid_argument("MinMaxScaler: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double range = max_[d] - min_[d];
      const double v = range > 0.0 ? (x[d] - min_[d]) / range : 0.0;
      out[d] = std::clamp(v, 0.0, 1.0);
    }
    return out;
  }

  std::vector<TrainingInstance> fit_transform(
      const std::vector<TrainingInstance>& instances) {
    fit(instances);
    std::vector<TrainingInstance> out;
    out.reserve(instances.size());
    for (const auto& inst : instances)
      out.push_back({inst.label, transform(inst.vector)});
    return out;
  }

 private:
  std::vector<double> min_, max_;
};

// --- KNN ---------------------------------------------------------------------

class KnnModel {
 public:
  KnnModel(std::vector<TrainingInstance> instances, std::size_t k)
      : instances_(std::move(instances)), k_(k) {
    if (instances_.empty())
      throw std::invalid_argument("knn: no training instances");
    if (k_ < 1) throw std::invalid_argument("knn: k must be >= 1");
  }

  std::string predict(const std::vector<double>& x) const {
    std::vector<std::pair<double, std::size_t>> by_distance;
    by_distance.reserve(instances_.size());
    for (std::size_t i = 0; i < instances_.size(); ++i)
      by_distance.emplace_back(squared_distance(instances_[i].vector, x), i);
    std::sort(by_distance.begin(), by_distance.end());
    const std::size_t k = std::min(k_, by_distance.size());
    std::map<std::string, std::size_t> votes;
    for (std::size_t i = 0; i < k; ++i)
      ++votes[instances_[by_distance[i].second].label];
    std::size_t best = 0;
    for (const auto& [label, n] : votes) best = std::max(best, n);
    // Tie: the nearest neighbor among the tied labels wins.
    for (std::size_t i = 0; i < k; ++i) {
      const std::string& label = instances_[by_distance[i].second].label;
      if (votes[label] == best) return label;
    }
    return instances_[by_distance[0].second].label;
  }

 private:
  static double squared_distance(const std::vector<double>& a,
                                 const std::vector<double>& b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      total += d * d;
    }
    return total;
  }

  std::vector<TrainingInstance> instances_;
  std::size_t k_;
};

// --- SMO-trained linear SVM ----------------------------------------------------

// Binary linear SVM trained with sequential minimal optimization. Keeps the
// dual variables so KKT satisfaction can be audited after training.
struct SmoBinaryModel {
  std::vector<double> w;
  double b = 0.0;
  std::vector<double> alpha;
  std::vector<int> y;  // +-1 per training instance

  double decision(const std::vector<double>& x) const {
    double v = b;
    for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * x[i];
    return v;
  }
};

inline SmoBinaryModel train_smo_binary(const std::vector<std::vector<double>>& xs,
                                       const std::vector<int>& ys, double c,
                                       double tol) {
  const std::size_t n = xs.size();
  if (n == 0) throw std::invalid_argument("smo: no training instances");
  const std::size_t dim = xs.front().size();
  SmoBinaryModel model;
  model.w.assign(dim, 0.0);
  model.alpha.assign(n, 0.0);
  model.y = ys;

  std::vector<double> errors(n);
  auto decision = [&](std::size_t i) {
    double v = model.b;
    for (std::size_t d = 0; d < dim; ++d) v += model.w[d] * xs[i][d];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i)
    errors[i] = decision(i) - static_cast<double>(ys[i]);

  auto dot = [&](std::size_t i, std::size_t j) {
    double v = 0.0;
    for (std::size_t d = 0; d < dim; ++d) v += xs[i][d] * xs[j][d];
    return v;
  };

  const double kAlphaEps = 1e-12;

  // Jointly optimizes the pair (i, j); returns false when no progress is
  // possible for it.
  auto take_step = [&](std::size_t i, std::size_t j) {
    if (i == j) return false;
    const double ai_old = model.alpha[i], aj_old = model.alpha[j];
    double lo, hi;
    if (ys[i] != ys[j]) {
      lo = std::max(0.0, aj_old - ai_old);
      hi = std::min(c, c + aj_old - ai_old);
    } else {
      lo = std::max(0.0, ai_old + aj_old - c);
      hi = std::min(c, ai_old + aj_old);
    }
    if (lo >= hi) return false;
    const double eta = 2.0 * dot(i, j) - dot(i, i) - dot(j, j);
    if (eta >= 0.0) return false;  // coincident points under a linear kernel

    double aj =
        aj_old - static_cast<double>(ys[j]) * (errors[i] - errors[j]) / eta;
    aj = std::clamp(aj, lo, hi);
    if (std::abs(aj - aj_old) < kAlphaEps) return false;
    double ai = ai_old + static_cast<double>(ys[i] * ys[j]) * (aj_old - aj);
    // Snap round-off residue onto the box so the dual stays feasible.
    if (ai < 1e-10) ai = 0.0;
    if (ai > c - 1e-10) ai = c;

    model.alpha[i] = ai;
    model.alpha[j] = aj;
    const double di = static_cast<double>(ys[i]) * (ai - ai_old);
    const double dj = static_cast<double>(ys[j]) * (aj - aj_old);
    for (std::size_t d = 0; d < dim; ++d)
      model.w[d] += di * xs[i][d] + dj * xs[j][d];

    const double b1 = model.b - errors[i] - di * dot(i, i) - dj * dot(i, j);
    const double b2 = model.b - errors[j] - di * dot(i, j) - dj * dot(j, j);
    if (ai > 0.0 && ai < c)
      model.b = b1;
    else if (aj > 0.0 && aj < c)
      model.b = b2;
    else
      model.b = 0.5 * (b1 + b2);

    for (std::size_t t = 0; t < n; ++t)
      errors[t] = decision(t) - static_cast<double>(ys[t]);
    return true;
  };

  auto non_bound = [&](std::size_t i) {
    return model.alpha[i] > 0.0 && model.alpha[i] < c;
  };

  // Examines one KKT violator, trying Platt's partner hierarchy: the
  // max-|E1-E2| heuristic, then the non-bound set, then everything. All
  // scans run in index order so training is deterministic.
  auto examine = [&](std::size_t j) {
    const double r = errors[j] * ys[j];
    const bool violates =
        (r < -tol && model.alpha[j] < c) || (r > tol && model.alpha[j] > 0.0);
    if (!violates) return false;

    std::size_t best = n;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j || !non_bound(i)) continue;
      const double gap = std::abs(errors[i] - errors[j]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best != n && take_step(best, j)) return true;
    for (std::size_t i = 0; i < n; ++i)
      if (non_bound(i) && take_step(i, j)) return true;
    for (std::size_t i = 0; i < n; ++i)
      if (take_step(i, j)) return true;
    return false;
  };

  const std::size_t kMaxPasses = 10000;
  bool examine_all = true;
  for (std::size_t pass = 0; pass < kMaxPasses; ++pass) {
    std::size_t changed = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!examine_all && !non_bound(j)) continue;
      if (examine(j)) ++changed;
    }
    if (examine_all) {
      if (changed == 0) break;
      examine_all = false;
    } else if (changed == 0) {
      examine_all = true;
    }
  }
  return model;
}

// Worst KKT violation of the trained dual
// (alpha=0 => y f >= 1; 0<alpha<C => y f = 1; alpha=C => y f <= 1).
inline double smo_kkt_violation(const SmoBinaryModel& model,
                                const std::vector<std::vector<double>>& xs,
                                double c) {
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double margin =
        static_cast<double>(model.y[i]) * model.decision(xs[i]);
    const double a = model.alpha[i];
    if (a <= 0.0)
      worst = std::max(worst, 1.0 - margin);
    else if (a >= c)
      worst = std::max(worst, margin - 1.0);
    else
      worst = std::max(worst, std::abs(margin - 1.0));
  }
  return worst;
}

// One-vs-rest multiclass wrapper around the binary solver.
class SmoModel {
 public:
  SmoModel(const std::vector<TrainingInstance>& instances, double c, double tol)
      : c_(c) {
    if (instances.empty())
      throw std::invalid_argument("smo: no training instances");
    std::set<std::string> labels;
    for (const auto& inst : instances) labels.insert(inst.label);
    if (labels.size() < 2)
      throw std::invalid_argument("smo: need at least 2 distinct labels, got " +
                                  std::to_string(labels.size()));
    std::vector<std::vector<double>> xs;
    xs.reserve(instances.size());
    for (const auto& inst : instances) xs.push_back(inst.vector);
    for (const auto& label : labels) {
      std::vector<int> ys;
      ys.reserve(instances.size());
      for (const auto& inst : instances)
        ys.push_back(inst.label == label ? 1 : -1);
      classes_.push_back(label);
      binaries_.push_back(train_smo_binary(xs, ys, c, tol));
    }
  }

  std::string predict(const std::vector<double>& x) const {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < classes_.size(); ++k) {
      const double score = binaries_[k].decision(x);
      if (score > best_score) {
        best_score = score;
        best = k;
      }
    }
    return classes_[best];
  }

  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<SmoBinaryModel>& binaries() const { return binaries_; }
  double c() const { return c_; }

 private:
  std::vector<std::string> classes_;
  std::vector<SmoBinaryModel> binaries_;
  double c_;
};

// --- Instance assembly ---------------------------------------------------------

// Width of the NCS slice in dense instance vectors (clamped/zero-padded).
inline constexpr std::size_t kNcsInstanceWidth = 8;

// Dense instance per post: stylometric vector (width = the schema's feature
// count at assembly time) concatenated with the owner's structural features.
inline std::vector<TrainingInstance> featurize_user_posts(
    const std::vector<PostFeatures>& posts, const StructuralFeatures& sf,
    std::size_t stylometric_dims, const std::string& label) {
  if (posts.empty())
    throw std::invalid_argument("featurize_user_posts: user " + label +
                                " has no posts");
  std::vector<TrainingInstance> out;
  out.reserve(posts.size());
  for (const auto& pf : posts) {
    TrainingInstance inst;
    inst.label = label;
    inst.vector.assign(stylometric_dims + 2 + kNcsInstanceWidth +
                           sf.landmark_hops.size() + sf.landmark_wdists.size(),
                       0.0);
    for (const auto& [idx, v] : pf.values)
      if (idx < stylometric_dims) inst.vector[idx] = v;
    std::size_t cursor = stylometric_dims;
    inst.vector[cursor++] = static_cast<double>(sf.degree);
    inst.vector[cursor++] = static_cast<double>(sf.weighted_degree);
    for (std::size_t i = 0; i < kNcsInstanceWidth; ++i)
      inst.vector[cursor++] =
          i < sf.ncs.size() ? static_cast<double>(sf.ncs[i]) : 0.0;
    for (const double h : sf.landmark_hops) inst.vector[cursor++] = h;
    for (const double w : sf.landmark_wdists) inst.vector[cursor++] = w;
    out.push_back(std::move(inst));
  }
  return out;
}

// Convenience form extracting straight from a corpus. With POS enabled the
// schema may still grow afterwards, so pipelines that extract both sides
// should assemble instances only after all extraction is done.
inline std::vector<TrainingInstance> featurize_user_posts(
    const Corpus& corpus, const std::string& user, const FeatureSchema& schema,
    const StructuralFeatures& sf) {
  std::vector<PostFeatures> posts;
  for (const auto& p : corpus.posts)
    if (p.user_id == user) posts.push_back(extract(p, schema));
  return featurize_user_posts(posts, sf, schema.total_features(), user);
}

// --- Refined DA ------------------------------------------------------------------

enum class RefineAlgorithm { kKnn, kSmo };
enum class OpenWorldScheme { kNone, kFalseAddition, kMeanVerification };

struct RefinedConfig {
  RefineAlgorithm algorithm = RefineAlgorithm::kKnn;
  std::size_t knn_k = 1;
  double smo_c = 1.0;
  double smo_tol = 1e-3;
  OpenWorldScheme open_world = OpenWorldScheme::kNone;
  std::optional<std::size_t> k_prime;  // nullopt: K' = |C_u|
  double r = 0.25;
  std::uint64_t seed = 0;
};

struct DaResult {
  std::string user;
  std::optional<std::string> verdict;  // nullopt = abstain
  bool accepted = false;
  std::map<std::string, std::size_t> votes;  // per-label post votes
  double mean_candidate_similarity = 0.0;    // lambda_u (mean verification)
  double winner_similarity = 0.0;
  bool winner_was_false = false;
};

// Unscaled dense instances per user, assembled once per corpus side.
using InstanceTable = std::map<std::string, std::vector<TrainingInstance>>;

namespace refine_detail {

inline std::string majority_winner(
    const std::map<std::string, std::size_t>& votes, const SimilarityMatrix& sim,
    const std::string& user) {
  std::size_t best_votes = 0;
  for (const auto& [label, n] : votes) best_votes = std::max(best_votes, n);
  std::string winner;
  double winner_sim = -std::numeric_limits<double>::infinity();
  for (const auto& [label, n] : votes) {
    if (n != best_votes) continue;
    const double s = sim.score(user, label);
    // Vote ties break to the candidate with the higher similarity, then to
    // the lexicographically smaller id (map order supplies the latter).
    if (s > winner_sim) {
      winner_sim = s;
      winner = label;
    }
  }
  return winner;
}

}  // namespace refine_detail

// Phase-2 refined de-anonymization of one user against its candidate set.
// Trains on the auxiliary posts of the candidates (plus K' sampled false
// users under the false-addition scheme), classifies the user's anonymized
// posts, and takes a majority vote across posts.
inline DaResult refine(const std::string& user, const CandidateSet& cset,
                       const RefinedConfig& cfg, const SimilarityMatrix& sim,
                       const InstanceTable& anonymized_instances,
                       const InstanceTable& auxiliary_instances) {
  DaResult result;
  result.user = user;
  if (cset.abstain || cset.candidates.empty()) return result;  // phase-1 abstain wins

  std::vector<std::string> training_users;
  std::set<std::string> false_users;
  for (const auto& [cand, score] : cset.candidates) training_users.push_back(cand);

  if (cfg.open_world == OpenWorldScheme::kFalseAddition) {
    const std::size_t k_prime = cfg.k_prime.value_or(cset.candidates.size());
    std::set<std::string> in_set(training_users.begin(), training_users.end());
    std::vector<std::string> pool;
    for (const auto& v : sim.cols)
      if (!in_set.count(v)) pool.push_back(v);
    if (pool.size() < k_prime)
      throw std::invalid_argument(
          "refine: auxiliary pool too small for false addition (" +
          std::to_string(pool.size()) + " < " + std::to_string(k_prime) + ")");
    Rng rng(mix_seed(cfg.seed, sim.row_index(user)));
    for (std::size_t i = 0; i < k_prime; ++i) {
      const std::size_t pick = rng.uniform_index(pool.size());
      false_users.insert(pool[pick]);
      pool.erase(pool.begin() + static_cast<long>(pick));
    }
    training_users.insert(training_users.end(), false_users.begin(),
                          false_users.end());
  }

  std::vector<TrainingInstance> training;
  for (const auto& label : training_users) {
    const auto it = auxiliary_instances.find(label);
    if (it == auxiliary_instances.end())
      throw std::invalid_argument("refine: no auxiliary instances for " + label);
    training.insert(training.end(), it->second.begin(), it->second.end());
  }
  const auto anon_it = anonymized_instances.find(user);
  if (anon_it == anonymized_instances.end())
    throw std::invalid_argument("refine: no anonymized instances for " + user);

  std::set<std::string> distinct_labels;
  for (const auto& inst : training) distinct_labels.insert(inst.label);

  std::vector<std::string> predictions;
  if (distinct_labels.size() == 1) {
    // Degenerate candidate set: nothing to learn, the single label wins.
    predictions.assign(anon_it->second.size(), *distinct_labels.begin());
  } else {
    MinMaxScaler scaler;
    const std::vector<TrainingInstance> scaled = scaler.fit_transform(training);
    std::optional<KnnModel> knn;
    std::optional<SmoModel> smo;
    if (cfg.algorithm == RefineAlgorithm::kKnn)
      knn.emplace(scaled, cfg.knn_k);
    else
      smo.emplace(scaled, cfg.smo_c, cfg.smo_tol);
    for (const auto& inst : anon_it->second) {
      const std::vector<double> x = scaler.transform(inst.vector);
      predictions.push_back(knn ? knn->predict(x) : smo->predict(x));
    }
  }

  for (const auto& label : predictions) ++result.votes[label];
  const std::string winner =
      refine_detail::majority_winner(result.votes, sim, user);
  result.winner_similarity = sim.score(user, winner);

  switch (cfg.open_world) {
    case OpenWorldScheme::kNone:
      result.verdict = winner;
      result.accepted = true;
      break;
    case OpenWorldScheme::kFalseAddition:
      result.winner_was_false = false_users.count(winner) > 0;
      if (!result.winner_was_false) {
        result.verdict = winner;
        result.accepted = true;
      }
      break;
    case OpenWorldScheme::kMeanVerification: {
      double total = 0.0;
      for (const auto& [cand, score] : cset.candidates) total += score;
      result.mean_candidate_similarity =
          total / static_cast<double>(cset.candidates.size());
      if (result.winner_similarity >=
          (1.0 + cfg.r) * result.mean_candidate_similarity) {
        result.verdict = winner;
        result.accepted = true;
      }
      break;
    }
  }
  return result;
}

inline Json da_results_to_json(const std::vector<DaResult>& results) {
  Json arr = Json::array();
  for (const auto& r : results) {
    Json j;
    j["user"] = r.user;
    if (r.verdict.has_value())
      j["verdict"] = *r.verdict;
    else
      j["verdict"] = nullptr;
    j["accepted"] = r.accepted;
    Json votes = Json::object();
    for (const auto& [label, n] : r.votes) votes[label] = n;
    j["votes"] = votes;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace dehealth
