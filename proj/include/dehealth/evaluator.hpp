#pragma once

#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dehealth/classifier.hpp"
#include "dehealth/corpus.hpp"
#include "dehealth/matcher.hpp"
#include "dehealth/stylometry.hpp"
#include "dehealth/uda_graph.hpp"

namespace dehealth {

struct ExperimentSpec {
  SplitSpec split;
  SimilarityConfig sim;
  std::size_t topk_k = 5;
  bool matching_based = false;       // direct selection otherwise
  std::optional<FilterConfig> filter;  // nullopt = filtering off
  RefinedConfig refined;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  bool enable_pos = true;
  bool stylometry_baseline = false;  // skip Top-K: candidate set = all of V2
};

// Top-K success CDF: fraction of anonymized users with a true mapping whose
// mapping appears among their first K candidates, for K = 1..max_k.
inline std::vector<double> topk_success(const CandidateMap& sets,
                                        const GroundTruth& truth,
                                        std::size_t max_k) {
  std::vector<double> cdf(max_k, 0.0);
  std::size_t with_mapping = 0;
  for (const auto& [user, set] : sets) {
    const auto it = truth.mapping.find(user);
    if (it == truth.mapping.end() || !it->second.has_value()) continue;
    ++with_mapping;
    const std::string& target = *it->second;
    for (std::size_t i = 0; i < set.candidates.size() && i < max_k; ++i) {
      if (set.candidates[i].first == target) {
        for (std::size_t k = i; k < max_k; ++k) cdf[k] += 1.0;
        break;
      }
    }
  }
  if (with_mapping > 0)
    for (auto& x : cdf) x /= static_cast<double>(with_mapping);
  return cdf;
}

// Accuracy = correct accepted verdicts / users with true mappings;
// FP rate = accepted verdicts that are not the true mapping / all users.
inline std::pair<double, double> accuracy_fp(const std::vector<DaResult>& results,
                                             const GroundTruth& truth) {
  std::size_t with_mapping = 0, correct = 0, false_positive = 0;
  for (const auto& r : results) {
    const auto it = truth.mapping.find(r.user);
    const bool has_mapping =
        it != truth.mapping.end() && it->second.has_value();
    if (has_mapping) ++with_mapping;
    if (!r.accepted) continue;
    if (has_mapping && r.verdict == it->second)
      ++correct;
    else
      ++false_positive;
  }
  const double accuracy =
      with_mapping > 0
          ? static_cast<double>(correct) / static_cast<double>(with_mapping)
          : 0.0;
  const double fp_rate =
      results.empty() ? 0.0
                      : static_cast<double>(false_positive) /
                            static_cast<double>(results.size());
  return {accuracy, fp_rate};
}

struct RepeatArtifacts {
  CandidateMap candidate_sets;  // post-filter when filtering is on
  std::vector<DaResult> results;
  std::vector<double> topk_cdf;
  double accuracy = 0.0;
  double fp_rate = 0.0;
};

struct MetricsReport {
  std::vector<RepeatArtifacts> repeats;
  std::vector<double> mean_topk_cdf;
  double mean_accuracy = 0.0;
  double mean_fp_rate = 0.0;

  Json to_json() const {
    Json j;
    j["mean_accuracy"] = mean_accuracy;
    j["mean_fp_rate"] = mean_fp_rate;
    j["mean_topk_success_cdf"] = mean_topk_cdf;
    Json per = Json::array();
    for (const auto& r : repeats) {
      Json jr;
      jr["accuracy"] = r.accuracy;
      jr["fp_rate"] = r.fp_rate;
      jr["topk_success_cdf"] = r.topk_cdf;
      per.push_back(jr);
    }
    j["per_repeat"] = per;
    return j;
  }

  // Plot-ready (K, fraction) rows of the mean CDF.
  void write_cdf_csv(std::ostream& out) const {
    out << "k,success_fraction\n";
    char buf[64];
    for (std::size_t k = 0; k < mean_topk_cdf.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", k + 1, mean_topk_cdf[k]);
      out << buf;
    }
  }

  void write_metrics_csv(std::ostream& out) const {
    out << "repeat,accuracy,fp_rate\n";
    char buf[96];
    for (std::size_t i = 0; i < repeats.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i,
                    repeats[i].accuracy, repeats[i].fp_rate);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "mean,%.17g,%.17g\n", mean_accuracy,
                  mean_fp_rate);
    out << buf;
  }
};

namespace eval_detail {

struct SideData {
  std::map<std::string, std::vector<PostFeatures>> post_features;
  std::map<std::string, AttributeProfile> profiles;
};

inline SideData extract_side(const Corpus& corpus, const FeatureSchema& schema) {
  SideData side;
  for (const auto& p : corpus.posts)
    side.post_features[p.user_id].push_back(extract(p, schema));
  for (const auto& [user, feats] : side.post_features)
    side.profiles[user] = aggregate(feats, user);
  return side;
}

inline InstanceTable build_instances(const SideData& side,
                                     const StructuralFeatureTable& table,
                                     std::size_t dims) {
  InstanceTable instances;
  for (const auto& [user, feats] : side.post_features)
    instances[user] =
        featurize_user_posts(feats, table.features_for(user), dims, user);
  return instances;
}

}  // namespace eval_detail

// One full pipeline pass: split, extract, graph, Top-K, optional filtering,
// refined DA, metrics.
inline RepeatArtifacts run_repeat(const Corpus& corpus, const GroundTruth& truth,
                                  const ExperimentSpec& spec,
                                  std::size_t repeat_index) {
  SplitSpec split_spec = spec.split;
  split_spec.seed = mix_seed(spec.seed, 1000 + repeat_index);
  const SplitResult s = split(corpus, truth, split_spec);

  const FeatureSchema schema = FeatureSchema::with_defaults(spec.enable_pos);
  const eval_detail::SideData anon_side =
      eval_detail::extract_side(s.anonymized, schema);
  const eval_detail::SideData aux_side =
      eval_detail::extract_side(s.auxiliary, schema);

  const UdaGraph g1 = build_graph(s.anonymized, anon_side.profiles);
  const UdaGraph g2 = build_graph(s.auxiliary, aux_side.profiles);
  const SimilarityMatrix sim = similarity_matrix(g1, g2, spec.sim);

  const std::size_t k = std::min(spec.topk_k, sim.cols.size());
  CandidateMap sets;
  if (spec.stylometry_baseline) {
    // No Top-K phase: every auxiliary user is a candidate.
    sets = topk_direct(sim, sim.cols.size());
  } else {
    sets = spec.matching_based ? topk_matching(sim, k) : topk_direct(sim, k);
  }
  if (spec.filter.has_value())
    sets = filter_candidates(sets, sim, *spec.filter).sets;

  const std::size_t h =
      std::min({spec.sim.landmarks, g1.size(), g2.size()});
  const StructuralFeatureTable table1(g1, pick_landmarks(g1, h));
  const StructuralFeatureTable table2(g2, pick_landmarks(g2, h));
  const std::size_t dims = schema.total_features();
  const InstanceTable anon_instances =
      eval_detail::build_instances(anon_side, table1, dims);
  const InstanceTable aux_instances =
      eval_detail::build_instances(aux_side, table2, dims);

  RefinedConfig refined = spec.refined;
  refined.seed = mix_seed(spec.seed, 2000 + repeat_index);

  RepeatArtifacts artifacts;
  for (const auto& [user, cset] : sets)
    artifacts.results.push_back(
        refine(user, cset, refined, sim, anon_instances, aux_instances));

  artifacts.candidate_sets = std::move(sets);
  artifacts.topk_cdf = topk_success(artifacts.candidate_sets, s.truth, k);
  const auto [accuracy, fp] = accuracy_fp(artifacts.results, s.truth);
  artifacts.accuracy = accuracy;
  artifacts.fp_rate = fp;
  return artifacts;
}

// Runs the configured number of repeats (in parallel when workers > 1;
// results are merged in repeat order, so the report does not depend on the
// worker count) and averages the metrics.
inline MetricsReport run_experiment(const Corpus& corpus,
                                    const GroundTruth& truth,
                                    const ExperimentSpec& spec,
                                    std::size_t workers = 1) {
  if (spec.repeats < 1)
    throw std::invalid_argument("run_experiment: repeats must be >= 1");
  MetricsReport report;
  report.repeats.resize(spec.repeats);

  if (workers <= 1) {
    for (std::size_t r = 0; r < spec.repeats; ++r)
      report.repeats[r] = run_repeat(corpus, truth, spec, r);
  } else {
    std::vector<std::future<RepeatArtifacts>> futures(spec.repeats);
    std::size_t next = 0;
    while (next < spec.repeats) {
      const std::size_t batch = std::min(workers, spec.repeats - next);
      for (std::size_t i = 0; i < batch; ++i)
        futures[next + i] = std::async(std::launch::async, [&, idx = next + i] {
          return run_repeat(corpus, truth, spec, idx);
        });
      for (std::size_t i = 0; i < batch; ++i)
        report.repeats[next + i] = futures[next + i].get();
      next += batch;
    }
  }

  std::size_t max_k = 0;
  for (const auto& r : report.repeats)
    max_k = std::max(max_k, r.topk_cdf.size());
  report.mean_topk_cdf.assign(max_k, 0.0);
  for (const auto& r : report.repeats) {
    report.mean_accuracy += r.accuracy;
    report.mean_fp_rate += r.fp_rate;
    for (std::size_t k = 0; k < max_k; ++k)
      report.mean_topk_cdf[k] +=
          k < r.topk_cdf.size() ? r.topk_cdf[k]
                                : (r.topk_cdf.empty() ? 0.0 : r.topk_cdf.back());
  }
  const auto n = static_cast<double>(spec.repeats);
  report.mean_accuracy /= n;
  report.mean_fp_rate /= n;
  for (auto& x : report.mean_topk_cdf) x /= n;
  return report;
}

}  // namespace dehealth
