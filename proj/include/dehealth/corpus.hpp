#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dehealth/rng.hpp"

namespace dehealth {

using Json = nlohmann::ordered_json;

struct Post {
  std::string post_id;
  std::string user_id;
  std::string topic_id;
  std::int64_t timestamp = 0;
  std::string text;
};

inline bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

// A set of users plus their posts. Users with zero posts are disallowed, so
// the user set is always derived from the post list.
struct Corpus {
  std::set<std::string> users;
  std::vector<Post> posts;
  std::string label;

  void add_post(Post p) {
    if (is_blank(p.text))
      throw std::invalid_argument("post " + p.post_id + ": empty text");
    users.insert(p.user_id);
    posts.push_back(std::move(p));
  }

  std::map<std::string, std::vector<const Post*>> posts_by_user() const {
    std::map<std::string, std::vector<const Post*>> by_user;
    for (const auto& p : posts) by_user[p.user_id].push_back(&p);
    return by_user;
  }
};

// Maps each anonymized user to its auxiliary counterpart, or nullopt when
// the user has no counterpart (open world). The mapping is injective on its
// defined domain.
struct GroundTruth {
  std::map<std::string, std::optional<std::string>> mapping;

  double overlap_ratio() const {
    if (mapping.empty()) return 0.0;
    std::size_t defined = 0;
    for (const auto& [anon, aux] : mapping)
      if (aux.has_value()) ++defined;
    return static_cast<double>(defined) / static_cast<double>(mapping.size());
  }

  static GroundTruth identity(const Corpus& c) {
    GroundTruth t;
    for (const auto& u : c.users) t.mapping[u] = u;
    return t;
  }

  Json to_json() const {
    Json j = Json::object();
    for (const auto& [anon, aux] : mapping) {
      if (aux.has_value())
        j[anon] = *aux;
      else
        j[anon] = nullptr;
    }
    return j;
  }

  static GroundTruth from_json(const Json& j) {
    GroundTruth t;
    for (const auto& [anon, aux] : j.items()) {
      if (aux.is_null())
        t.mapping[anon] = std::nullopt;
      else
        t.mapping[anon] = aux.get<std::string>();
    }
    return t;
  }
};

enum class SplitMode { kClosedWorld, kOpenWorld };

struct SplitSpec {
  SplitMode mode = SplitMode::kClosedWorld;
  double auxiliary_fraction = 0.5;  // closed world: per-user post share
  double overlap_ratio = 0.5;       // open world: x / (x + y)
  std::uint64_t seed = 0;
};

// --- JSONL ingestion ------------------------------------------------------

inline Corpus ingest_jsonl(std::istream& in, const std::string& name,
                           const std::string& label = "corpus") {
  Corpus corpus;
  corpus.label = label;
  std::set<std::string> seen_post_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error(name + ":" + std::to_string(line_no) +
                               ": malformed JSON: " + e.what());
    }
    if (!j.is_object())
      throw std::runtime_error(name + ":" + std::to_string(line_no) +
                               ": expected a JSON object");
    for (const char* key : {"post_id", "user_id", "topic_id", "text"}) {
      if (!j.contains(key) || !j[key].is_string())
        throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                 ": missing or non-string \"" + key + "\"");
    }
    Post p;
    p.post_id = j["post_id"].get<std::string>();
    p.user_id = j["user_id"].get<std::string>();
    p.topic_id = j["topic_id"].get<std::string>();
    p.text = j["text"].get<std::string>();
    if (j.contains("timestamp")) {
      if (!j["timestamp"].is_number_integer())
        throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                 ": non-integer \"timestamp\"");
      p.timestamp = j["timestamp"].get<std::int64_t>();
    }
    if (!seen_post_ids.insert(p.post_id).second)
      throw std::runtime_error(name + ":" + std::to_string(line_no) +
                               ": duplicate post_id \"" + p.post_id + "\"");
    if (is_blank(p.text))
      throw std::runtime_error(name + ":" + std::to_string(line_no) +
                               ": empty \"text\"");
    corpus.add_post(std::move(p));
  }
  if (corpus.posts.empty())
    throw std::runtime_error(name + ": empty corpus");
  return corpus;
}

inline Corpus ingest_jsonl_file(const std::string& path,
                                const std::string& label = "corpus") {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return ingest_jsonl(in, path, label);
}

inline void write_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const auto& p : corpus.posts) {
    Json j;
    j["post_id"] = p.post_id;
    j["user_id"] = p.user_id;
    j["topic_id"] = p.topic_id;
    j["timestamp"] = p.timestamp;
    j["text"] = p.text;
    out << j.dump() << "\n";
  }
}

inline void write_jsonl_file(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  write_jsonl(corpus, out);
}

// --- Anonymized/auxiliary split -------------------------------------------

namespace detail {

inline std::string opaque_id(Rng& rng) {
  static const char* hex = "0123456789abcdef";
  std::string id = "anon-";
  for (int i = 0; i < 12; ++i) id += hex[rng.uniform_index(16)];
  return id;
}

inline std::string fresh_opaque_id(Rng& rng,
                                   const std::set<std::string>& taken) {
  std::string id = opaque_id(rng);
  while (taken.count(id)) id = opaque_id(rng);
  return id;
}

}  // namespace detail

struct SplitResult {
  Corpus anonymized;
  Corpus auxiliary;
  GroundTruth truth;
};

// Partitions a ground-truth corpus into an anonymized side and an auxiliary
// side. Closed world: every user appears on both sides with its posts split
// by auxiliary_fraction (auxiliary count = ceil, clamped to [1, n-1] so both
// sides stay non-empty). Open world: x overlapping users split 50/50 plus y
// non-overlapping users per side with all their posts, where x + 2y = n and
// x/(x+y) equals the requested overlap ratio (x rounded down; at most one
// leftover user is dropped). Anonymized user ids are replaced with opaque
// ids; the relabeling is returned in the GroundTruth.
inline SplitResult split(const Corpus& corpus, const GroundTruth& truth,
                         const SplitSpec& spec) {
  Rng rng(spec.seed);
  auto by_user = corpus.posts_by_user();

  // Resolve each corpus user to its auxiliary identity via the input truth
  // (identity for synthesized corpora).
  auto aux_identity = [&](const std::string& u) -> std::string {
    auto it = truth.mapping.find(u);
    if (it != truth.mapping.end() && it->second.has_value()) return *it->second;
    return u;
  };

  SplitResult result;
  result.anonymized.label = "anonymized";
  result.auxiliary.label = "auxiliary";
  std::set<std::string> taken_ids(corpus.users.begin(), corpus.users.end());

  // Splits one user's posts: `aux_count` random posts go to the auxiliary
  // side, the rest to the anonymized side under the opaque id.
  auto split_user = [&](const std::string& user, std::size_t aux_count,
                        const std::string& anon_id) {
    std::vector<const Post*> posts = by_user.at(user);
    rng.shuffle(posts);
    for (std::size_t i = 0; i < posts.size(); ++i) {
      Post p = *posts[i];
      if (i < aux_count) {
        p.user_id = aux_identity(user);
        result.auxiliary.add_post(std::move(p));
      } else {
        p.user_id = anon_id;
        result.anonymized.add_post(std::move(p));
      }
    }
  };

  if (spec.mode == SplitMode::kClosedWorld) {
    if (spec.auxiliary_fraction <= 0.0 || spec.auxiliary_fraction >= 1.0)
      throw std::invalid_argument("closed-world auxiliary_fraction must be in (0,1)");
    std::vector<std::string> offenders;
    for (const auto& [user, posts] : by_user)
      if (posts.size() < 2) offenders.push_back(user);
    if (!offenders.empty()) {
      std::string msg = "closed-world split requires >=2 posts per user; offenders:";
      for (const auto& u : offenders) msg += " " + u;
      throw std::invalid_argument(msg);
    }
    for (const auto& user : corpus.users) {
      const std::size_t n = by_user.at(user).size();
      auto want = static_cast<std::size_t>(
          std::ceil(spec.auxiliary_fraction * static_cast<double>(n)));
      const std::size_t aux_count = std::clamp<std::size_t>(want, 1, n - 1);
      const std::string anon_id = detail::fresh_opaque_id(rng, taken_ids);
      taken_ids.insert(anon_id);
      result.truth.mapping[anon_id] = aux_identity(user);
      split_user(user, aux_count, anon_id);
    }
    return result;
  }

  // Open world. x overlapping users, y non-overlapping per side:
  // x + 2y = n and x/(x+y) = overlap_ratio  =>  x = n*ratio/(2-ratio).
  if (spec.overlap_ratio <= 0.0 || spec.overlap_ratio > 1.0)
    throw std::invalid_argument("open-world overlap_ratio must be in (0,1]");
  const std::size_t n = corpus.users.size();
  auto x = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * spec.overlap_ratio /
                 (2.0 - spec.overlap_ratio)));
  if (x < 1) throw std::invalid_argument("open-world split: too few users");
  const std::size_t y = (n - x) / 2;

  // Overlapping users need >=2 posts (their posts are split 50/50); users
  // with a single post can only serve as non-overlapping members.
  std::vector<std::string> eligible, single_post;
  for (const auto& user : corpus.users) {
    if (by_user.at(user).size() >= 2)
      eligible.push_back(user);
    else
      single_post.push_back(user);
  }
  if (eligible.size() < x)
    throw std::invalid_argument(
        "open-world split: not enough users with >=2 posts for the "
        "requested overlap (" +
        std::to_string(eligible.size()) + " < " + std::to_string(x) + ")");
  rng.shuffle(eligible);
  rng.shuffle(single_post);

  std::vector<std::string> overlapping(eligible.begin(), eligible.begin() + x);
  std::vector<std::string> rest(eligible.begin() + x, eligible.end());
  rest.insert(rest.end(), single_post.begin(), single_post.end());

  for (const auto& user : overlapping) {
    const std::size_t n_posts = by_user.at(user).size();
    const std::size_t aux_count =
        std::clamp<std::size_t>((n_posts + 1) / 2, 1, n_posts - 1);
    const std::string anon_id = detail::fresh_opaque_id(rng, taken_ids);
    taken_ids.insert(anon_id);
    result.truth.mapping[anon_id] = aux_identity(user);
    split_user(user, aux_count, anon_id);
  }
  for (std::size_t i = 0; i < y && i < rest.size(); ++i) {
    // y users to the anonymized side with all posts, no counterpart.
    const std::string& user = rest[i];
    const std::string anon_id = detail::fresh_opaque_id(rng, taken_ids);
    taken_ids.insert(anon_id);
    result.truth.mapping[anon_id] = std::nullopt;
    for (const Post* src : by_user.at(user)) {
      Post p = *src;
      p.user_id = anon_id;
      result.anonymized.add_post(std::move(p));
    }
  }
  for (std::size_t i = y; i < 2 * y && i < rest.size(); ++i) {
    // y users to the auxiliary side. Any leftover user (x+2y < n) is dropped.
    const std::string& user = rest[i];
    for (const Post* src : by_user.at(user)) {
      Post p = *src;
      p.user_id = aux_identity(user);
      result.auxiliary.add_post(std::move(p));
    }
  }
  return result;
}

}  // namespace dehealth
