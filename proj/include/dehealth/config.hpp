#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dehealth/evaluator.hpp"
#include "dehealth/synth.hpp"
#include "dehealth/theory.hpp"

namespace dehealth::config {

// Strict parsing: unknown keys are configuration errors, so typos fail loud.
inline void require_known_keys(const Json& j, const std::string& where,
                               const std::set<std::string>& allowed) {
  if (!j.is_object())
    throw std::invalid_argument("config: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key))
      throw std::invalid_argument("config: unknown key \"" + key + "\" in " +
                                  where);
  }
}

template <typename T>
void read_to(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline SynthProfile parse_synth_profile(const Json& j) {
  require_known_keys(
      j, "synth.profile",
      {"posts_per_user_p", "min_posts_per_user", "post_length_mean_words",
       "post_length_sigma", "vocab_concentration", "function_word_rate",
       "function_word_concentration", "misspelling_rate_max",
       "habitual_misspellings", "comma_rate", "digit_rate", "special_rate",
       "allcaps_rate_max", "mean_sentence_words", "sentences_per_paragraph",
       "topic_density", "topics_per_user_p", "topic_popularity_exponent"});
  SynthProfile p;
  read_to(j, "posts_per_user_p", p.posts_per_user_p);
  read_to(j, "min_posts_per_user", p.min_posts_per_user);
  read_to(j, "post_length_mean_words", p.post_length_mean_words);
  read_to(j, "post_length_sigma", p.post_length_sigma);
  read_to(j, "vocab_concentration", p.vocab_concentration);
  read_to(j, "function_word_rate", p.function_word_rate);
  read_to(j, "function_word_concentration", p.function_word_concentration);
  read_to(j, "misspelling_rate_max", p.misspelling_rate_max);
  read_to(j, "habitual_misspellings", p.habitual_misspellings);
  read_to(j, "comma_rate", p.comma_rate);
  read_to(j, "digit_rate", p.digit_rate);
  read_to(j, "special_rate", p.special_rate);
  read_to(j, "allcaps_rate_max", p.allcaps_rate_max);
  read_to(j, "mean_sentence_words", p.mean_sentence_words);
  read_to(j, "sentences_per_paragraph", p.sentences_per_paragraph);
  read_to(j, "topic_density", p.topic_density);
  read_to(j, "topics_per_user_p", p.topics_per_user_p);
  read_to(j, "topic_popularity_exponent", p.topic_popularity_exponent);
  return p;
}

inline Json synth_profile_to_json(const SynthProfile& p) {
  Json j;
  j["posts_per_user_p"] = p.posts_per_user_p;
  j["min_posts_per_user"] = p.min_posts_per_user;
  j["post_length_mean_words"] = p.post_length_mean_words;
  j["post_length_sigma"] = p.post_length_sigma;
  j["vocab_concentration"] = p.vocab_concentration;
  j["function_word_rate"] = p.function_word_rate;
  j["function_word_concentration"] = p.function_word_concentration;
  j["misspelling_rate_max"] = p.misspelling_rate_max;
  j["habitual_misspellings"] = p.habitual_misspellings;
  j["comma_rate"] = p.comma_rate;
  j["digit_rate"] = p.digit_rate;
  j["special_rate"] = p.special_rate;
  j["allcaps_rate_max"] = p.allcaps_rate_max;
  j["mean_sentence_words"] = p.mean_sentence_words;
  j["sentences_per_paragraph"] = p.sentences_per_paragraph;
  j["topic_density"] = p.topic_density;
  j["topics_per_user_p"] = p.topics_per_user_p;
  j["topic_popularity_exponent"] = p.topic_popularity_exponent;
  return j;
}

inline SplitSpec parse_split(const Json& j) {
  require_known_keys(j, "split",
                     {"mode", "auxiliary_fraction", "overlap_ratio", "seed"});
  SplitSpec s;
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "closed_world")
      s.mode = SplitMode::kClosedWorld;
    else if (mode == "open_world")
      s.mode = SplitMode::kOpenWorld;
    else
      throw std::invalid_argument("config: split.mode must be closed_world or open_world");
  }
  read_to(j, "auxiliary_fraction", s.auxiliary_fraction);
  read_to(j, "overlap_ratio", s.overlap_ratio);
  read_to(j, "seed", s.seed);
  return s;
}

inline Json split_to_json(const SplitSpec& s) {
  Json j;
  j["mode"] = s.mode == SplitMode::kClosedWorld ? "closed_world" : "open_world";
  j["auxiliary_fraction"] = s.auxiliary_fraction;
  j["overlap_ratio"] = s.overlap_ratio;
  j["seed"] = s.seed;
  return j;
}

inline SimilarityConfig parse_similarity(const Json& j) {
  require_known_keys(j, "similarity", {"c1", "c2", "c3", "landmarks"});
  SimilarityConfig c;
  read_to(j, "c1", c.c1);
  read_to(j, "c2", c.c2);
  read_to(j, "c3", c.c3);
  read_to(j, "landmarks", c.landmarks);
  return c;
}

inline Json similarity_to_json(const SimilarityConfig& c) {
  Json j;
  j["c1"] = c.c1;
  j["c2"] = c.c2;
  j["c3"] = c.c3;
  j["landmarks"] = c.landmarks;
  return j;
}

inline RefinedConfig parse_refined(const Json& j) {
  require_known_keys(j, "refined",
                     {"algorithm", "knn_k", "smo_c", "smo_tol", "open_world",
                      "k_prime", "r"});
  RefinedConfig c;
  if (j.contains("algorithm")) {
    const std::string a = j.at("algorithm").get<std::string>();
    if (a == "knn")
      c.algorithm = RefineAlgorithm::kKnn;
    else if (a == "smo")
      c.algorithm = RefineAlgorithm::kSmo;
    else
      throw std::invalid_argument("config: refined.algorithm must be knn or smo");
  }
  read_to(j, "knn_k", c.knn_k);
  read_to(j, "smo_c", c.smo_c);
  read_to(j, "smo_tol", c.smo_tol);
  if (j.contains("open_world")) {
    const std::string o = j.at("open_world").get<std::string>();
    if (o == "none")
      c.open_world = OpenWorldScheme::kNone;
    else if (o == "false_addition")
      c.open_world = OpenWorldScheme::kFalseAddition;
    else if (o == "mean_verification")
      c.open_world = OpenWorldScheme::kMeanVerification;
    else
      throw std::invalid_argument(
          "config: refined.open_world must be none, false_addition or mean_verification");
  }
  if (j.contains("k_prime")) {
    const Json& kp = j.at("k_prime");
    if (kp.is_string()) {
      if (kp.get<std::string>() != "equal_to_candidate_set")
        throw std::invalid_argument(
            "config: refined.k_prime must be an integer or \"equal_to_candidate_set\"");
      c.k_prime = std::nullopt;
    } else {
      c.k_prime = kp.get<std::size_t>();
    }
  }
  read_to(j, "r", c.r);
  return c;
}

inline Json refined_to_json(const RefinedConfig& c) {
  Json j;
  j["algorithm"] = c.algorithm == RefineAlgorithm::kKnn ? "knn" : "smo";
  j["knn_k"] = c.knn_k;
  j["smo_c"] = c.smo_c;
  j["smo_tol"] = c.smo_tol;
  switch (c.open_world) {
    case OpenWorldScheme::kNone: j["open_world"] = "none"; break;
    case OpenWorldScheme::kFalseAddition: j["open_world"] = "false_addition"; break;
    case OpenWorldScheme::kMeanVerification: j["open_world"] = "mean_verification"; break;
  }
  if (c.k_prime.has_value())
    j["k_prime"] = *c.k_prime;
  else
    j["k_prime"] = "equal_to_candidate_set";
  j["r"] = c.r;
  return j;
}

// One config file drives every subcommand; these are the recognized
// top-level sections.
inline const std::set<std::string>& top_level_keys() {
  static const std::set<std::string> keys = {
      "seed",    "workers", "synth",   "split",    "similarity", "topk",
      "filter",  "refined", "repeats", "schema",   "baseline",   "theory"};
  return keys;
}

// Full attack/experiment configuration. Filtering defaults to off in closed
// world and on in open world unless the config pins it.
inline ExperimentSpec parse_experiment(const Json& root) {
  require_known_keys(root, "config", top_level_keys());
  ExperimentSpec spec;
  if (root.contains("split")) spec.split = parse_split(root.at("split"));
  if (root.contains("similarity"))
    spec.sim = parse_similarity(root.at("similarity"));
  if (root.contains("topk")) {
    const Json& t = root.at("topk");
    require_known_keys(t, "topk", {"k", "method"});
    read_to(t, "k", spec.topk_k);
    if (t.contains("method")) {
      const std::string m = t.at("method").get<std::string>();
      if (m == "direct")
        spec.matching_based = false;
      else if (m == "matching")
        spec.matching_based = true;
      else
        throw std::invalid_argument("config: topk.method must be direct or matching");
    }
  }
  std::optional<bool> filter_enabled;
  FilterConfig filter_cfg;
  if (root.contains("filter")) {
    const Json& f = root.at("filter");
    require_known_keys(f, "filter", {"enabled", "epsilon", "levels"});
    if (f.contains("enabled") && !f.at("enabled").is_null())
      filter_enabled = f.at("enabled").get<bool>();
    read_to(f, "epsilon", filter_cfg.epsilon);
    read_to(f, "levels", filter_cfg.levels);
  }
  const bool enabled = filter_enabled.value_or(spec.split.mode == SplitMode::kOpenWorld);
  if (enabled) spec.filter = filter_cfg;
  if (root.contains("refined")) spec.refined = parse_refined(root.at("refined"));
  read_to(root, "repeats", spec.repeats);
  read_to(root, "seed", spec.seed);
  if (root.contains("schema")) {
    const Json& s = root.at("schema");
    require_known_keys(s, "schema", {"pos"});
    read_to(s, "pos", spec.enable_pos);
  }
  read_to(root, "baseline", spec.stylometry_baseline);
  return spec;
}

inline Json experiment_to_json(const ExperimentSpec& spec) {
  Json j;
  j["seed"] = spec.seed;
  j["split"] = split_to_json(spec.split);
  j["similarity"] = similarity_to_json(spec.sim);
  Json topk;
  topk["k"] = spec.topk_k;
  topk["method"] = spec.matching_based ? "matching" : "direct";
  j["topk"] = topk;
  Json filter;
  filter["enabled"] = spec.filter.has_value();
  filter["epsilon"] = spec.filter.has_value() ? spec.filter->epsilon : FilterConfig{}.epsilon;
  filter["levels"] = spec.filter.has_value() ? spec.filter->levels : FilterConfig{}.levels;
  j["filter"] = filter;
  j["refined"] = refined_to_json(spec.refined);
  j["repeats"] = spec.repeats;
  Json schema;
  schema["pos"] = spec.enable_pos;
  j["schema"] = schema;
  j["baseline"] = spec.stylometry_baseline;
  return j;
}

inline theory::BoundedSampler parse_sampler(const Json& j, const std::string& where) {
  require_known_keys(j, where, {"kind", "lo", "hi", "mu", "sigma"});
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform")
    return theory::BoundedSampler::uniform(j.at("lo").get<double>(),
                                           j.at("hi").get<double>());
  if (kind == "truncated_normal")
    return theory::BoundedSampler::truncated_normal(
        j.at("mu").get<double>(), j.at("sigma").get<double>(),
        j.at("lo").get<double>(), j.at("hi").get<double>());
  throw std::invalid_argument("config: " + where +
                              ".kind must be uniform or truncated_normal");
}

inline Json sampler_to_json(const theory::BoundedSampler& s) {
  Json j;
  if (s.kind == theory::BoundedSampler::Kind::kUniform) {
    j["kind"] = "uniform";
  } else {
    j["kind"] = "truncated_normal";
    j["mu"] = s.mu;
    j["sigma"] = s.sigma;
  }
  j["lo"] = s.lo;
  j["hi"] = s.hi;
  return j;
}

inline theory::Scenario parse_scenario(const std::string& name) {
  using theory::Scenario;
  if (name == "pairwise_t1") return Scenario::kPairwiseT1;
  if (name == "full_c2") return Scenario::kFullC2;
  if (name == "alpha_t2") return Scenario::kAlphaT2;
  if (name == "topk_t3") return Scenario::kTopkT3;
  if (name == "alpha_topk_t4") return Scenario::kAlphaTopkT4;
  throw std::invalid_argument(
      "config: unknown scenario \"" + name +
      "\" (expected pairwise_t1, full_c2, alpha_t2, topk_t3 or alpha_topk_t4)");
}

struct TheoryCase {
  theory::Scenario scenario = theory::Scenario::kPairwiseT1;
  theory::TheoryParams params;
};

inline TheoryCase parse_theory_case(const Json& j, const std::string& where) {
  require_known_keys(j, where,
                     {"scenario", "dist_true", "dist_false", "n", "n1", "n2",
                      "alpha", "k", "trials", "seed"});
  TheoryCase c;
  if (j.contains("scenario"))
    c.scenario = parse_scenario(j.at("scenario").get<std::string>());
  if (j.contains("dist_true"))
    c.params.dist_true = parse_sampler(j.at("dist_true"), where + ".dist_true");
  if (j.contains("dist_false"))
    c.params.dist_false = parse_sampler(j.at("dist_false"), where + ".dist_false");
  read_to(j, "n", c.params.n);
  read_to(j, "n1", c.params.n1);
  read_to(j, "n2", c.params.n2);
  read_to(j, "alpha", c.params.alpha);
  read_to(j, "k", c.params.k);
  read_to(j, "trials", c.params.trials);
  read_to(j, "seed", c.params.seed);
  return c;
}

inline Json theory_case_to_json(const TheoryCase& c) {
  Json j;
  j["scenario"] = theory::scenario_name(c.scenario);
  j["dist_true"] = sampler_to_json(c.params.dist_true);
  j["dist_false"] = sampler_to_json(c.params.dist_false);
  j["n"] = c.params.n;
  j["n1"] = c.params.n1;
  j["n2"] = c.params.n2;
  j["alpha"] = c.params.alpha;
  j["k"] = c.params.k;
  j["trials"] = c.params.trials;
  j["seed"] = c.params.seed;
  return j;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("config file " + path + ": " + e.what());
  }
}

}  // namespace dehealth::config
