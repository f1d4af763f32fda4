// dehealth: de-anonymization risk assessment toolkit for forum-style
// corpora. Subcommands: synth, ingest, attack, theory.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "dehealth/config.hpp"
#include "dehealth/evaluator.hpp"
#include "dehealth/synth.hpp"
#include "dehealth/theory.hpp"
#include "dehealth/version.hpp"

namespace fs = std::filesystem;
using dehealth::Json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
};

Json load_config_or_empty(const std::string& path) {
  if (path.empty()) return Json::object();
  return dehealth::config::load_json_file(path);
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_json_file(const fs::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

// Every run leaves a manifest echoing the resolved configuration; a run can
// be reproduced bit for bit from its output directory alone.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const Json& resolved_config) {
  Json manifest;
  manifest["tool"] = "dehealth";
  manifest["version"] = dehealth::kVersion;
  manifest["command"] = command;
  manifest["config"] = resolved_config;
  write_json_file(out_dir / "manifest.json", manifest);
}

std::size_t resolve_workers(const CommonArgs& args, const Json& cfg) {
  if (args.workers.has_value()) return std::max<std::size_t>(1, *args.workers);
  if (cfg.contains("workers"))
    return std::max<std::size_t>(1, cfg.at("workers").get<std::size_t>());
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::uint64_t resolve_seed(const CommonArgs& args, const Json& cfg) {
  if (args.seed.has_value()) return *args.seed;
  if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
  return 0;
}

int cmd_synth(const CommonArgs& args, std::size_t n_users_flag) {
  const Json cfg = load_config_or_empty(args.config_path);
  dehealth::config::require_known_keys(cfg, "config",
                                       dehealth::config::top_level_keys());
  dehealth::SynthProfile profile;
  std::size_t n_users = n_users_flag;
  if (cfg.contains("synth")) {
    const Json& s = cfg.at("synth");
    dehealth::config::require_known_keys(s, "synth", {"n_users", "profile"});
    if (s.contains("n_users") && n_users_flag == 0)
      n_users = s.at("n_users").get<std::size_t>();
    if (s.contains("profile"))
      profile = dehealth::config::parse_synth_profile(s.at("profile"));
  }
  if (n_users == 0) n_users = 100;
  const std::uint64_t seed = resolve_seed(args, cfg);

  const dehealth::SynthResult result =
      dehealth::synthesize(n_users, profile, seed);
  const fs::path out(args.out_dir);
  fs::create_directories(out);
  {
    std::ofstream corpus_out(out / "corpus.jsonl", std::ios::binary);
    dehealth::write_jsonl(result.corpus, corpus_out);
  }
  write_json_file(out / "truth.json", result.truth.to_json());

  Json resolved;
  resolved["seed"] = seed;
  Json synth;
  synth["n_users"] = n_users;
  synth["profile"] = dehealth::config::synth_profile_to_json(profile);
  resolved["synth"] = synth;
  write_manifest(out, "synth", resolved);
  std::cout << "synthesized " << result.corpus.users.size() << " users, "
            << result.corpus.posts.size() << " posts -> " << out.string()
            << "\n";
  return 0;
}

int cmd_ingest(const CommonArgs& args, const std::string& input) {
  const dehealth::Corpus corpus = dehealth::ingest_jsonl_file(input);
  const fs::path out(args.out_dir);
  fs::create_directories(out);
  {
    std::ofstream corpus_out(out / "corpus.jsonl", std::ios::binary);
    dehealth::write_jsonl(corpus, corpus_out);
  }
  Json resolved;
  resolved["input"] = input;
  write_manifest(out, "ingest", resolved);
  std::cout << "ingested " << corpus.posts.size() << " posts from "
            << corpus.users.size() << " users -> " << out.string() << "\n";
  return 0;
}

int cmd_attack(const CommonArgs& args, const std::string& corpus_path,
               const std::string& truth_path, bool export_similarity) {
  const Json cfg = load_config_or_empty(args.config_path);
  dehealth::ExperimentSpec spec = dehealth::config::parse_experiment(cfg);
  if (args.seed.has_value()) spec.seed = *args.seed;
  const std::size_t workers = resolve_workers(args, cfg);

  const dehealth::Corpus corpus = dehealth::ingest_jsonl_file(corpus_path);
  const dehealth::GroundTruth truth =
      truth_path.empty()
          ? dehealth::GroundTruth::identity(corpus)
          : dehealth::GroundTruth::from_json(
                dehealth::config::load_json_file(truth_path));

  const dehealth::MetricsReport report =
      dehealth::run_experiment(corpus, truth, spec, workers);

  const fs::path out(args.out_dir);
  fs::create_directories(out);
  write_json_file(out / "metrics.json", report.to_json());
  {
    std::ofstream f(out / "metrics.csv", std::ios::binary);
    report.write_metrics_csv(f);
  }
  {
    std::ofstream f(out / "cdf.csv", std::ios::binary);
    report.write_cdf_csv(f);
  }
  // Artifacts of the first repeat: candidate sets and per-user verdicts.
  const dehealth::RepeatArtifacts& first = report.repeats.front();
  write_json_file(out / "candidates.json",
                  dehealth::candidate_map_to_json(first.candidate_sets));
  write_json_file(out / "da_results.json",
                  dehealth::da_results_to_json(first.results));
  {
    std::ofstream f(out / "da_results.csv", std::ios::binary);
    f << "user,verdict,accepted\n";
    for (const auto& r : first.results)
      f << r.user << "," << (r.verdict ? *r.verdict : "") << ","
        << (r.accepted ? 1 : 0) << "\n";
  }

  // Graph and (optionally) similarity exports for the first repeat's split.
  {
    dehealth::SplitSpec split_spec = spec.split;
    split_spec.seed = dehealth::mix_seed(spec.seed, 1000);
    const dehealth::SplitResult s = dehealth::split(corpus, truth, split_spec);
    const dehealth::FeatureSchema schema =
        dehealth::FeatureSchema::with_defaults(spec.enable_pos);
    const auto side1 = dehealth::eval_detail::extract_side(s.anonymized, schema);
    const auto side2 = dehealth::eval_detail::extract_side(s.auxiliary, schema);
    const dehealth::UdaGraph g1 =
        dehealth::build_graph(s.anonymized, side1.profiles);
    const dehealth::UdaGraph g2 =
        dehealth::build_graph(s.auxiliary, side2.profiles);
    {
      std::ofstream f(out / "anonymized.edges", std::ios::binary);
      dehealth::write_edge_list(g1, f);
    }
    {
      std::ofstream f(out / "auxiliary.edges", std::ios::binary);
      dehealth::write_edge_list(g2, f);
    }
    {
      std::ofstream f(out / "degree_hist_anonymized.csv", std::ios::binary);
      dehealth::write_degree_histogram_csv(g1, f);
    }
    {
      std::ofstream f(out / "degree_hist_auxiliary.csv", std::ios::binary);
      dehealth::write_degree_histogram_csv(g2, f);
    }
    if (export_similarity) {
      const dehealth::SimilarityMatrix sim =
          dehealth::similarity_matrix(g1, g2, spec.sim);
      std::ofstream f(out / "similarity.csv", std::ios::binary);
      sim.write_csv(f);
    }
  }

  Json resolved = dehealth::config::experiment_to_json(spec);
  resolved["workers"] = workers;
  resolved["corpus"] = corpus_path;
  resolved["truth"] = truth_path;
  write_manifest(out, "attack", resolved);
  std::cout << "attack done: mean accuracy " << report.mean_accuracy
            << ", mean FP rate " << report.mean_fp_rate << " over "
            << report.repeats.size() << " repeats -> " << out.string() << "\n";
  return 0;
}

int cmd_theory(const CommonArgs& args, const std::string& scenario_flag,
               std::size_t trials_flag) {
  const Json cfg = load_config_or_empty(args.config_path);
  std::vector<dehealth::config::TheoryCase> cases;
  if (cfg.contains("theory")) {
    const Json& t = cfg.at("theory");
    if (t.is_array()) {
      for (std::size_t i = 0; i < t.size(); ++i)
        cases.push_back(dehealth::config::parse_theory_case(
            t.at(i), "theory[" + std::to_string(i) + "]"));
    } else {
      cases.push_back(dehealth::config::parse_theory_case(t, "theory"));
    }
  } else {
    // Default demonstration case: well-separated uniform distances.
    cases.emplace_back();
    cases.back().params.dist_true =
        dehealth::theory::BoundedSampler::uniform(0.0, 0.4);
    cases.back().params.dist_false =
        dehealth::theory::BoundedSampler::uniform(0.6, 1.0);
  }
  for (auto& c : cases) {
    if (!scenario_flag.empty())
      c.scenario = dehealth::config::parse_scenario(scenario_flag);
    if (trials_flag > 0) c.params.trials = trials_flag;
    if (args.seed.has_value()) c.params.seed = *args.seed;
  }

  std::vector<dehealth::theory::BoundReport> reports;
  reports.reserve(cases.size());
  for (const auto& c : cases)
    reports.push_back(dehealth::theory::simulate(c.scenario, c.params));

  const fs::path out(args.out_dir);
  fs::create_directories(out);
  {
    std::ofstream f(out / "bounds.csv", std::ios::binary);
    dehealth::theory::write_bound_reports_csv(reports, f);
  }
  Json resolved = Json::array();
  for (const auto& c : cases)
    resolved.push_back(dehealth::config::theory_case_to_json(c));
  Json root;
  root["theory"] = resolved;
  write_manifest(out, "theory", root);
  for (const auto& r : reports)
    std::cout << r.scenario << ": empirical " << r.empirical_rate << ", bound "
              << r.bound_value << (r.vacuous() ? " (vacuous)" : "") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"De-anonymization risk assessment toolkit"};
  app.set_version_flag("--version", dehealth::kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  std::size_t n_users_flag = 0;
  std::string input_path, corpus_path, truth_path, scenario_flag;
  std::size_t trials_flag = 0;
  bool export_similarity = false;

  auto add_common = [&](CLI::App* cmd, bool with_config = true) {
    if (with_config)
      cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "seed override");
    cmd->add_option("--workers", args.workers, "worker pool size");
  };

  CLI::App* synth =
      app.add_subcommand("synth", "generate a synthetic ground-truth corpus");
  add_common(synth);
  synth->add_option("--users", n_users_flag, "number of users");

  CLI::App* ingest =
      app.add_subcommand("ingest", "validate and normalize a JSONL corpus");
  add_common(ingest, false);
  ingest->add_option("--input", input_path, "JSONL corpus path")->required();

  CLI::App* attack = app.add_subcommand(
      "attack", "run the two-phase de-anonymization pipeline");
  add_common(attack);
  attack->add_option("--corpus", corpus_path, "ground-truth JSONL corpus")
      ->required();
  attack->add_option("--truth", truth_path, "ground-truth mapping JSON");
  attack->add_flag("--export-similarity", export_similarity,
                   "also write the similarity matrix CSV");

  CLI::App* theory =
      app.add_subcommand("theory", "re-identifiability bound simulations");
  add_common(theory);
  theory->add_option("--scenario", scenario_flag,
                     "pairwise_t1|full_c2|alpha_t2|topk_t3|alpha_topk_t4");
  theory->add_option("--trials", trials_flag, "Monte Carlo trials per case");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(args, n_users_flag);
    if (ingest->parsed()) return cmd_ingest(args, input_path);
    if (attack->parsed())
      return cmd_attack(args, corpus_path, truth_path, export_similarity);
    if (theory->parsed()) return cmd_theory(args, scenario_flag, trials_flag);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
