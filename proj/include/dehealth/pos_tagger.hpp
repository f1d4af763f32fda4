#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dehealth/text.hpp"

namespace dehealth {

// Tagger interface. The schema treats POS features as optional; any
// implementation can be plugged in as long as it returns one tag per token.
class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<std::string> tag(const std::vector<Token>& tokens) const = 0;
};

// Closed-class lexicon plus suffix rules. Deliberately lightweight: the tag
// stream only feeds frequency features, so systematic consistency matters
// more than per-token accuracy.
class RuleLexiconTagger : public PosTagger {
 public:
  RuleLexiconTagger() {
    auto add = [this](const char* tag, std::initializer_list<const char*> ws) {
      for (const char* w : ws) lexicon_[w] = tag;
    };
    add("DT", {"the", "a", "an", "this", "that", "these", "those", "some",
               "any", "no", "every", "each", "either", "neither", "all",
               "both", "another"});
    add("IN", {"in", "on", "at", "by", "for", "with", "about", "against",
               "between", "into", "through", "during", "before", "after",
               "above", "below", "from", "up", "down", "of", "off", "over",
               "under", "since", "until", "while", "because", "if",
               "although", "though", "unless", "upon", "within", "without",
               "near", "across", "behind", "beyond", "around", "among",
               "toward", "towards", "despite", "per", "than", "as"});
    add("PRP", {"i", "you", "he", "she", "it", "we", "they", "me", "him",
                "her", "us", "them", "myself", "yourself", "himself",
                "herself", "itself", "ourselves", "themselves", "someone",
                "anyone", "everyone", "nobody", "something", "anything",
                "everything", "nothing"});
    add("PRP$", {"my", "your", "his", "its", "our", "their", "mine",
                 "yours", "hers", "ours", "theirs"});
    add("CC", {"and", "or", "but", "nor", "so", "yet"});
    add("MD", {"can", "could", "will", "would", "shall", "should", "may",
               "might", "must", "ought"});
    add("VB", {"be", "am", "is", "are", "was", "were", "been", "being",
               "have", "has", "had", "having", "do", "does", "did", "doing",
               "get", "got", "go", "goes", "went", "make", "made", "take",
               "took", "see", "saw", "know", "knew", "feel", "felt",
               "think", "thought", "say", "said"});
    add("RB", {"not", "never", "always", "often", "sometimes", "usually",
               "very", "too", "also", "just", "still", "again", "here",
               "there", "now", "then", "soon", "already", "almost", "quite",
               "rather", "really", "maybe", "perhaps", "however", "instead",
               "even", "once", "twice", "away", "back", "well"});
    add("WP", {"who", "whom", "whose", "which", "what"});
    add("WRB", {"when", "where", "why", "how"});
    add("TO", {"to"});
    add("UH", {"oh", "wow", "hey", "ouch", "ugh", "hmm", "yes", "yeah",
               "okay", "ok"});
  }

  std::vector<std::string> tag(const std::vector<Token>& tokens) const override {
    std::vector<std::string> tags;
    tags.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      const auto it = lexicon_.find(t.lowered);
      if (it != lexicon_.end()) {
        tags.push_back(it->second);
        continue;
      }
      tags.push_back(suffix_tag(t, i == 0));
    }
    return tags;
  }

 private:
  static bool ends_with(const std::string& s, const char* suffix) {
    const std::size_t n = std::char_traits<char>::length(suffix);
    return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
  }

  static std::string suffix_tag(const Token& t, bool sentence_initial) {
    const std::string& w = t.lowered;
    if (t.first_upper && !t.all_upper && !sentence_initial) return "NNP";
    if (ends_with(w, "ly")) return "RB";
    if (ends_with(w, "ing")) return "VBG";
    if (ends_with(w, "ed")) return "VBD";
    if (ends_with(w, "tion") || ends_with(w, "sion") || ends_with(w, "ment") ||
        ends_with(w, "ness") || ends_with(w, "ity") || ends_with(w, "ism"))
      return "NN";
    if (ends_with(w, "ous") || ends_with(w, "ful") || ends_with(w, "ive") ||
        ends_with(w, "able") || ends_with(w, "ible") || ends_with(w, "al") ||
        ends_with(w, "ic"))
      return "JJ";
    if (ends_with(w, "est") && w.size() > 4) return "JJS";
    if (ends_with(w, "er") && w.size() > 3) return "JJR";
    if (ends_with(w, "ize") || ends_with(w, "ise")) return "VB";
    if (w.size() > 2 && w.back() == 's' && w[w.size() - 2] != 's') return "NNS";
    return "NN";
  }

  std::map<std::string, std::string> lexicon_;
};

inline std::shared_ptr<const PosTagger> default_tagger() {
  return std::make_shared<RuleLexiconTagger>();
}

}  // namespace dehealth
