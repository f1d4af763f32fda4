#pragma once

#include <atomic>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dehealth/corpus.hpp"
#include "dehealth/lexicons.hpp"
#include "dehealth/pos_tagger.hpp"
#include "dehealth/text.hpp"

namespace dehealth {

// Fixed feature layout. Group sizes are structural invariants; the POS
// region extends past kFixedFeatureCount and grows lazily as tags and tag
// bigrams are observed.
namespace feature_layout {
inline constexpr std::size_t kLength = 0;          // 3: chars, paragraphs, avg chars/word
inline constexpr std::size_t kWordLength = 3;      // 20: word length 1..19, >=20
inline constexpr std::size_t kVocabulary = 23;     // 5: Yule's K, hapax..tetrakis
inline constexpr std::size_t kLetters = 28;        // 26
inline constexpr std::size_t kDigits = 54;         // 10
inline constexpr std::size_t kUppercase = 64;      // 1: fraction of uppercase letters
inline constexpr std::size_t kSpecials = 65;       // 21
inline constexpr std::size_t kWordShape = 86;      // 21: 4 case classes x 5 length buckets + other
inline constexpr std::size_t kPunctuation = 107;   // 10
inline constexpr std::size_t kFunctionWords = 117; // 337
inline constexpr std::size_t kMisspellings = 454;  // 248
inline constexpr std::size_t kFixedFeatureCount = 702;

inline constexpr std::size_t kFunctionWordCount = 337;
inline constexpr std::size_t kMisspellingCount = 248;
inline constexpr std::size_t kSpecialCharCount = 21;
inline constexpr std::size_t kPunctuationCount = 10;
}  // namespace feature_layout

// Yule's K over a token multiset: 1e4 * (sum_m m^2 V_m - N) / N^2 where V_m
// counts types occurring exactly m times.
inline double yules_k(const std::vector<std::string>& tokens) {
  if (tokens.empty())
    throw std::invalid_argument("yules_k: empty token list");
  std::map<std::string, std::size_t> type_counts;
  for (const auto& t : tokens) ++type_counts[t];
  const double n = static_cast<double>(tokens.size());
  double sum = 0.0;
  for (const auto& [type, m] : type_counts)
    sum += static_cast<double>(m) * static_cast<double>(m);
  return 1e4 * (sum - n) / (n * n);
}

inline std::vector<std::string> load_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open word list: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return words;
}

// Feature schema: the fixed-size lexicons plus an optional POS tagger with a
// lazily grown tag/bigram index registry. Copies share the registry, so all
// features extracted through copies of one schema live in one index space.
class FeatureSchema {
 public:
  static FeatureSchema with_defaults(bool enable_pos = true) {
    std::vector<std::string> fw(std::begin(lexicons::kFunctionWords),
                                std::end(lexicons::kFunctionWords));
    std::vector<std::string> ms(std::begin(lexicons::kMisspellings),
                                std::end(lexicons::kMisspellings));
    return FeatureSchema(std::move(fw), std::move(ms),
                         lexicons::kSpecialChars, lexicons::kPunctuation,
                         enable_pos ? default_tagger() : nullptr);
  }

  FeatureSchema(std::vector<std::string> function_words,
                std::vector<std::string> misspellings,
                std::string special_chars, std::string punctuation,
                std::shared_ptr<const PosTagger> tagger)
      : function_words_(std::move(function_words)),
        misspellings_(std::move(misspellings)),
        special_chars_(std::move(special_chars)),
        punctuation_(std::move(punctuation)),
        tagger_(std::move(tagger)),
        registry_(std::make_shared<PosRegistry>()),
        id_(next_id()) {
    using namespace feature_layout;
    if (function_words_.size() != kFunctionWordCount)
      throw std::invalid_argument(
          "schema: function word list must have exactly 337 entries, got " +
          std::to_string(function_words_.size()));
    if (misspellings_.size() != kMisspellingCount)
      throw std::invalid_argument(
          "schema: misspelling list must have exactly 248 entries, got " +
          std::to_string(misspellings_.size()));
    if (special_chars_.size() != kSpecialCharCount)
      throw std::invalid_argument(
          "schema: special character list must have exactly 21 entries, got " +
          std::to_string(special_chars_.size()));
    if (punctuation_.size() != kPunctuationCount)
      throw std::invalid_argument(
          "schema: punctuation list must have exactly 10 entries, got " +
          std::to_string(punctuation_.size()));
    for (std::size_t i = 0; i < function_words_.size(); ++i) {
      if (!fw_index_.emplace(function_words_[i], i).second)
        throw std::invalid_argument("schema: duplicate function word \"" +
                                    function_words_[i] + "\"");
    }
    for (std::size_t i = 0; i < misspellings_.size(); ++i) {
      if (!ms_index_.emplace(misspellings_[i], i).second)
        throw std::invalid_argument("schema: duplicate misspelling \"" +
                                    misspellings_[i] + "\"");
    }
  }

  std::uint64_t id() const { return id_; }
  bool has_pos() const { return tagger_ != nullptr; }
  const PosTagger& tagger() const { return *tagger_; }
  const std::string& special_chars() const { return special_chars_; }
  const std::string& punctuation() const { return punctuation_; }

  // Index of a function word / misspelling, or npos.
  std::size_t function_word_index(const std::string& lowered) const {
    const auto it = fw_index_.find(lowered);
    return it == fw_index_.end() ? npos : it->second;
  }
  std::size_t misspelling_index(const std::string& lowered) const {
    const auto it = ms_index_.find(lowered);
    return it == ms_index_.end() ? npos : it->second;
  }

  // Current total feature count M (fixed groups + realized POS features).
  std::size_t total_features() const {
    std::lock_guard<std::mutex> lock(registry_->mutex);
    return feature_layout::kFixedFeatureCount + registry_->names.size();
  }

  std::size_t pos_feature_index(const std::string& name) const {
    std::lock_guard<std::mutex> lock(registry_->mutex);
    const auto it = registry_->index.find(name);
    if (it != registry_->index.end()) return it->second;
    const std::size_t idx =
        feature_layout::kFixedFeatureCount + registry_->names.size();
    registry_->index.emplace(name, idx);
    registry_->names.push_back(name);
    return idx;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  struct PosRegistry {
    mutable std::mutex mutex;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::string> names;
  };

  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
  }

  std::vector<std::string> function_words_;
  std::vector<std::string> misspellings_;
  std::string special_chars_;
  std::string punctuation_;
  std::shared_ptr<const PosTagger> tagger_;
  std::unordered_map<std::string, std::size_t> fw_index_;
  std::unordered_map<std::string, std::size_t> ms_index_;
  std::shared_ptr<PosRegistry> registry_;
  std::uint64_t id_;
};

// Sparse post-level feature vector; only strictly positive values are kept.
struct PostFeatures {
  std::string post_id;
  std::uint64_t schema_id = 0;
  std::map<std::size_t, double> values;

  double get(std::size_t index) const {
    const auto it = values.find(index);
    return it == values.end() ? 0.0 : it->second;
  }

  Json to_json() const {
    Json j;
    j["post_id"] = post_id;
    Json vals = Json::object();
    for (const auto& [idx, v] : values) vals[std::to_string(idx)] = v;
    j["features"] = vals;
    return j;
  }
};

// User-level binary attributes: attribute i is present when at least one of
// the user's posts has feature i; its weight counts those posts.
struct AttributeProfile {
  std::string user_id;
  std::uint64_t schema_id = 0;
  std::map<std::size_t, int> weights;

  bool has(std::size_t index) const { return weights.count(index) > 0; }
};

inline PostFeatures extract(const Post& post, const FeatureSchema& schema) {
  using namespace feature_layout;
  PostFeatures out;
  out.post_id = post.post_id;
  out.schema_id = schema.id();
  auto put = [&](std::size_t index, double value) {
    if (value > 0.0) out.values[index] = value;
  };

  // Length group.
  put(kLength + 0, static_cast<double>(count_codepoints(post.text)));
  put(kLength + 1, static_cast<double>(count_paragraphs(post.text)));

  const std::vector<Token> tokens = tokenize(post.text);
  if (!tokens.empty()) {
    std::size_t total_len = 0;
    for (const auto& t : tokens) total_len += t.length;
    put(kLength + 2, static_cast<double>(total_len) /
                         static_cast<double>(tokens.size()));
  }

  // Word length histogram: bins 1..19 exact, bin 20 holds length >= 20.
  std::map<std::size_t, double> counts;
  for (const auto& t : tokens) {
    const std::size_t bin = t.length >= 20 ? 20 : t.length;
    counts[kWordLength + bin - 1] += 1.0;
  }

  // Vocabulary richness over lowercased types.
  if (!tokens.empty()) {
    std::map<std::string, std::size_t> type_counts;
    for (const auto& t : tokens) ++type_counts[t.lowered];
    const double n = static_cast<double>(tokens.size());
    double sum = 0.0;
    std::size_t legomena[4] = {0, 0, 0, 0};
    for (const auto& [type, m] : type_counts) {
      sum += static_cast<double>(m) * static_cast<double>(m);
      if (m >= 1 && m <= 4) ++legomena[m - 1];
    }
    put(kVocabulary + 0, 1e4 * (sum - n) / (n * n));
    for (int i = 0; i < 4; ++i)
      put(kVocabulary + 1 + i, static_cast<double>(legomena[i]));
  }

  // Character-level groups.
  std::size_t ascii_letters = 0, upper_letters = 0;
  std::size_t pos = 0;
  const std::string& s = post.text;
  while (pos < s.size()) {
    const char32_t cp = next_codepoint(s, pos);
    if (is_ascii_letter(cp)) {
      ++ascii_letters;
      if (is_ascii_upper(cp)) ++upper_letters;
      const char32_t lower = is_ascii_upper(cp) ? cp - 'A' + 'a' : cp;
      counts[kLetters + (lower - 'a')] += 1.0;
    } else if (is_ascii_digit(cp)) {
      counts[kDigits + (cp - '0')] += 1.0;
    } else if (cp < 0x80) {
      const char c = static_cast<char>(cp);
      const auto sp = schema.special_chars().find(c);
      if (sp != std::string::npos) counts[kSpecials + sp] += 1.0;
      const auto pu = schema.punctuation().find(c);
      if (pu != std::string::npos) counts[kPunctuation + pu] += 1.0;
    }
  }
  if (ascii_letters > 0)
    put(kUppercase, static_cast<double>(upper_letters) /
                        static_cast<double>(ascii_letters));

  // Word shape: case class x length bucket, plus an other-script bucket for
  // words containing non-ASCII letters.
  for (const auto& t : tokens) {
    std::size_t slot;
    if (t.has_non_ascii) {
      slot = 20;
    } else {
      std::size_t cls;
      if (t.all_upper)
        cls = 0;
      else if (!t.has_upper)
        cls = 1;
      else if (t.first_upper && !t.inner_upper)
        cls = 2;
      else
        cls = 3;  // mixed case with an inner capital
      std::size_t bucket;
      if (t.length <= 1)
        bucket = 0;
      else if (t.length <= 4)
        bucket = 1;
      else if (t.length <= 7)
        bucket = 2;
      else if (t.length <= 10)
        bucket = 3;
      else
        bucket = 4;
      slot = cls * 5 + bucket;
    }
    counts[kWordShape + slot] += 1.0;
  }

  // Function words and misspellings (on lowercased tokens).
  for (const auto& t : tokens) {
    const std::size_t fw = schema.function_word_index(t.lowered);
    if (fw != FeatureSchema::npos) counts[kFunctionWords + fw] += 1.0;
    const std::size_t ms = schema.misspelling_index(t.lowered);
    if (ms != FeatureSchema::npos) counts[kMisspellings + ms] += 1.0;
  }

  // POS tag and tag-bigram frequencies (optional group).
  if (schema.has_pos() && !tokens.empty()) {
    const std::vector<std::string> tags = schema.tagger().tag(tokens);
    for (const auto& tag : tags)
      counts[schema.pos_feature_index("T:" + tag)] += 1.0;
    for (std::size_t i = 0; i + 1 < tags.size(); ++i)
      counts[schema.pos_feature_index("B:" + tags[i] + "+" + tags[i + 1])] += 1.0;
  }

  for (const auto& [idx, v] : counts) put(idx, v);
  return out;
}

inline AttributeProfile aggregate(const std::vector<PostFeatures>& posts,
                                  const std::string& user_id) {
  if (posts.empty())
    throw std::invalid_argument("aggregate: no posts for user " + user_id);
  AttributeProfile profile;
  profile.user_id = user_id;
  profile.schema_id = posts.front().schema_id;
  for (const auto& pf : posts) {
    if (pf.schema_id != profile.schema_id)
      throw std::invalid_argument(
          "aggregate: mixed feature schemas for user " + user_id);
    for (const auto& [idx, v] : pf.values) ++profile.weights[idx];
  }
  return profile;
}

}  // namespace dehealth
