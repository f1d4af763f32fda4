#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "dehealth/corpus.hpp"
#include "dehealth/lexicons.hpp"
#include "dehealth/rng.hpp"

namespace dehealth {

namespace synth_detail {

// Content wordbank for the generator. Forum-flavored everyday vocabulary;
// users draw from it with individually biased weights.
inline constexpr const char* kWordbank[] = {
    "ache", "advice", "afternoon", "allergy", "answer", "antibiotic",
    "anxiety", "appetite", "appointment", "arm", "aspirin", "asthma",
    "attack", "awful", "baby", "back", "balance", "bad", "bath", "bed",
    "benefit", "better", "blood", "body", "bone", "brain", "break",
    "breath", "bruise", "burn", "call", "care", "cause", "change", "chest",
    "child", "chill", "clinic", "cold", "comfort", "common", "concern",
    "condition", "control", "cough", "counter", "cramp", "cure", "damage",
    "danger", "day", "deal", "decision", "diet", "difference", "digestion",
    "dizzy", "doctor", "dose", "drink", "drug", "ear", "effect", "energy",
    "evening", "exam", "exercise", "experience", "eye", "face", "family",
    "fatigue", "fear", "feel", "fever", "fine", "finger", "flu", "food",
    "foot", "form", "friend", "fruit", "gain", "gland", "good", "habit",
    "hand", "head", "headache", "health", "heart", "heat", "help", "herb",
    "history", "home", "hope", "hospital", "hour", "hurt", "idea",
    "illness", "infection", "inflammation", "information", "injury",
    "insurance", "iron", "issue", "itch", "joint", "kidney", "knee", "lab",
    "leg", "level", "life", "liver", "loss", "lung", "meal", "medicine",
    "memory", "migraine", "mind", "minute", "moment", "month", "morning",
    "mouth", "muscle", "nap", "nausea", "neck", "nerve", "news", "night",
    "normal", "nose", "number", "nurse", "nutrition", "office", "pain",
    "panic", "patient", "pattern", "people", "period", "pharmacy", "pill",
    "place", "plan", "pollen", "posture", "pressure", "problem", "process",
    "program", "question", "range", "rash", "reaction", "reason", "recipe",
    "record", "recovery", "relief", "remedy", "report", "research", "rest",
    "result", "risk", "routine", "salt", "scan", "schedule", "screen",
    "season", "shot", "shoulder", "side", "sign", "sinus", "situation",
    "skin", "sleep", "smell", "sneeze", "soreness", "spasm", "specialist",
    "spine", "stage", "step", "stiffness", "stomach", "story", "strain",
    "strength", "stress", "stretch", "sugar", "supplement", "support",
    "surgery", "swelling", "symptom", "system", "tablet", "taste", "tea",
    "team", "teeth", "temperature", "tension", "test", "therapy", "thing",
    "throat", "time", "tip", "tissue", "today", "tongue", "tooth", "topic",
    "treatment", "trouble", "update", "vaccine", "value", "virus", "visit",
    "vitamin", "walk", "water", "way", "week", "weight", "wellness",
    "work", "worry", "wrist", "year", "yoga", "zinc", "ask", "become",
    "begin", "believe", "bother", "bring", "check", "choose", "continue",
    "cope", "decide", "describe", "develop", "discuss", "drive", "eat",
    "expect", "explain", "fight", "find", "finish", "follow", "forget",
    "get", "give", "go", "grow", "happen", "hear", "hold", "improve",
    "increase", "keep", "know", "learn", "leave", "listen", "live", "look",
    "lose", "make", "manage", "mention", "monitor", "notice", "occur",
    "order", "pay", "prescribe", "prevent", "push", "read", "realize",
    "recommend", "recover", "reduce", "relax", "remember", "remove",
    "respond", "return", "run", "settle", "see", "seek", "sense",
    "share", "show", "sit", "slow", "soothe", "speak", "spend", "start",
    "stay", "stop", "struggle", "suffer", "suggest", "swallow", "switch",
    "take", "talk", "tell", "think", "trace", "track", "treat", "try",
    "turn", "understand", "wait", "wake", "want", "watch", "wonder",
    "acute", "bitter", "calm", "careful", "chronic", "clear", "constant",
    "daily", "deep", "dry", "dull", "early", "easy", "extreme", "frequent",
    "gentle", "gradual", "heavy", "helpful", "high", "hot", "intense",
    "light", "low", "mild", "minor", "moderate", "natural", "new", "numb",
    "odd", "old", "painful", "persistent", "positive", "quick", "quiet",
    "rare", "raw", "recent", "regular", "severe", "sharp", "short", "sick",
    "similar", "simple", "slight", "small", "sore", "steady", "strange",
    "strong", "sudden", "swollen", "tender", "terrible", "thick", "tight",
    "tired", "typical", "uncomfortable", "unusual", "upset", "useful",
    "warm", "weak", "weird", "worse", "young",
};

inline constexpr std::size_t kWordbankSize =
    sizeof(kWordbank) / sizeof(kWordbank[0]);

// Weighted categorical sampler over a fixed support.
class Categorical {
 public:
  explicit Categorical(std::vector<double> weights) : cumulative_(std::move(weights)) {
    double total = 0.0;
    for (auto& w : cumulative_) {
      total += w;
      w = total;
    }
    total_ = total;
  }

  std::size_t sample(Rng& rng) const {
    const double x = rng.uniform01() * total_;
    const auto it =
        std::lower_bound(cumulative_.begin(), cumulative_.end(), x);
    const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    return idx < cumulative_.size() ? idx : cumulative_.size() - 1;
  }

 private:
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

}  // namespace synth_detail

// Knobs for the synthetic corpus generator. Defaults target the reference
// marginals: geometric posts-per-user with P(X < 5) ~ 0.873 and lognormal
// post length with mean 127.59 words.
struct SynthProfile {
  double posts_per_user_p = 0.403;
  std::size_t min_posts_per_user = 1;  // shifts the geometric draw
  double post_length_mean_words = 127.59;
  double post_length_sigma = 0.6;
  double vocab_concentration = 0.3;
  double function_word_rate = 0.35;
  double function_word_concentration = 0.4;
  double misspelling_rate_max = 0.08;
  int habitual_misspellings = 4;
  double comma_rate = 0.12;
  double digit_rate = 0.015;
  double special_rate = 0.01;
  double allcaps_rate_max = 0.03;
  double mean_sentence_words = 12.0;
  double sentences_per_paragraph = 4.0;
  double topic_density = 0.25;        // topics = max(2, n_users * density)
  double topics_per_user_p = 0.45;    // geometric; lower = more co-discussion
  double topic_popularity_exponent = 1.1;

  void validate() const {
    if (post_length_mean_words < 1.0)
      throw std::invalid_argument("synth profile: post length mean must be >= 1 word");
    if (posts_per_user_p <= 0.0 || posts_per_user_p > 1.0)
      throw std::invalid_argument("synth profile: posts_per_user_p must be in (0,1]");
    if (post_length_sigma < 0.0)
      throw std::invalid_argument("synth profile: negative post_length_sigma");
    if (topic_density <= 0.0)
      throw std::invalid_argument("synth profile: topic_density must be > 0");
  }
};

struct SynthResult {
  Corpus corpus;
  GroundTruth truth;
};

// Deterministic ground-truth corpus generator. Each user gets a persistent
// style: biased content vocabulary, preferred function words, habitual
// misspellings, punctuation and casing habits. Pure function of
// (n_users, profile, seed).
inline SynthResult synthesize(std::size_t n_users, const SynthProfile& profile,
                              std::uint64_t seed) {
  using namespace synth_detail;
  if (n_users < 2) throw std::invalid_argument("synthesize: n_users must be >= 2");
  profile.validate();

  Rng rng(mix_seed(seed, 0xC0FFEE));
  SynthResult out;
  out.corpus.label = "synthetic";

  const std::size_t n_topics = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(
             static_cast<double>(n_users) * profile.topic_density)));
  std::vector<double> topic_pop(n_topics);
  for (std::size_t t = 0; t < n_topics; ++t)
    topic_pop[t] = 1.0 / std::pow(static_cast<double>(t + 1),
                                  profile.topic_popularity_exponent);
  const Categorical topic_dist(topic_pop);

  const std::size_t n_fw =
      sizeof(lexicons::kFunctionWords) / sizeof(lexicons::kFunctionWords[0]);
  const std::size_t n_ms =
      sizeof(lexicons::kMisspellings) / sizeof(lexicons::kMisspellings[0]);
  const std::string specials = lexicons::kSpecialChars;

  const double log_mean = std::log(profile.post_length_mean_words) -
                          0.5 * profile.post_length_sigma *
                              profile.post_length_sigma;

  std::size_t post_counter = 0;
  char id_buf[32];

  for (std::size_t ui = 0; ui < n_users; ++ui) {
    std::snprintf(id_buf, sizeof(id_buf), "u%05zu", ui);
    const std::string user_id = id_buf;

    // Persistent per-user style.
    const Categorical vocab(rng.dirichlet(kWordbankSize, profile.vocab_concentration));
    const Categorical fw_pref(rng.dirichlet(n_fw, profile.function_word_concentration));
    std::vector<std::size_t> habits;
    for (int h = 0; h < profile.habitual_misspellings; ++h)
      habits.push_back(rng.uniform_index(n_ms));
    const double misspell_rate = rng.uniform(0.2, 1.0) * profile.misspelling_rate_max;
    const Categorical terminator(rng.dirichlet(3, 0.6));  // . ! ?
    const double comma_rate = profile.comma_rate * rng.uniform(0.3, 1.7);
    const double digit_rate = profile.digit_rate * rng.uniform(0.2, 1.8);
    const double special_rate = profile.special_rate * rng.uniform(0.1, 1.9);
    const double allcaps_rate = rng.uniform01() * profile.allcaps_rate_max;
    const std::size_t fav_special = rng.uniform_index(specials.size());

    // Topic membership.
    const std::size_t topic_count = std::min<std::size_t>(
        n_topics, rng.geometric(profile.topics_per_user_p));
    std::vector<std::string> my_topics;
    for (std::size_t t = 0; t < topic_count; ++t) {
      std::snprintf(id_buf, sizeof(id_buf), "t%04zu",
                    topic_dist.sample(rng));
      my_topics.emplace_back(id_buf);
    }

    const auto n_posts =
        std::max<std::size_t>(profile.min_posts_per_user, 1) - 1 +
        static_cast<std::size_t>(rng.geometric(profile.posts_per_user_p));
    for (std::size_t pi = 0; pi < n_posts; ++pi) {
      const double len_draw =
          std::exp(rng.normal(log_mean, profile.post_length_sigma));
      const auto n_words = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(len_draw)));

      std::string text;
      std::size_t words_in_sentence = 0;
      std::size_t sentences_in_paragraph = 0;
      std::size_t sentence_target = std::max<std::size_t>(
          3, rng.geometric(1.0 / profile.mean_sentence_words));
      bool sentence_start = true;
      for (std::size_t w = 0; w < n_words; ++w) {
        std::string word;
        const double pick = rng.uniform01();
        if (pick < misspell_rate && !habits.empty()) {
          word = lexicons::kMisspellings[habits[rng.uniform_index(habits.size())]];
        } else if (pick < misspell_rate + profile.function_word_rate) {
          word = lexicons::kFunctionWords[fw_pref.sample(rng)];
        } else {
          word = kWordbank[vocab.sample(rng)];
        }
        if (sentence_start) {
          word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
          sentence_start = false;
        } else if (rng.uniform01() < allcaps_rate) {
          for (auto& c : word)
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
        if (!text.empty()) text += ' ';
        text += word;
        if (rng.uniform01() < digit_rate) {
          text += ' ';
          text += std::to_string(1 + rng.uniform_index(999));
        }
        if (rng.uniform01() < special_rate) text += specials[fav_special];
        ++words_in_sentence;
        if (words_in_sentence >= sentence_target && w + 1 < n_words) {
          text += ".!?"[terminator.sample(rng)];
          words_in_sentence = 0;
          sentence_target = std::max<std::size_t>(
              3, rng.geometric(1.0 / profile.mean_sentence_words));
          sentence_start = true;
          ++sentences_in_paragraph;
          if (sentences_in_paragraph >=
              static_cast<std::size_t>(profile.sentences_per_paragraph)) {
            text += "\n\n";
            sentences_in_paragraph = 0;
          } else {
            text += ' ';
          }
        } else if (rng.uniform01() < comma_rate && w + 1 < n_words) {
          text += ',';
        }
      }
      text += ".!?"[terminator.sample(rng)];

      Post p;
      std::snprintf(id_buf, sizeof(id_buf), "p%07zu", post_counter++);
      p.post_id = id_buf;
      p.user_id = user_id;
      p.topic_id = my_topics[pi % my_topics.size()];
      p.timestamp = static_cast<std::int64_t>(1430438400 + 3600 * post_counter);
      p.text = std::move(text);
      out.corpus.add_post(std::move(p));
    }
  }

  out.truth = GroundTruth::identity(out.corpus);
  return out;
}

}  // namespace dehealth
