#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

namespace dehealth {

// Minimal UTF-8 walker. Invalid bytes are treated as single one-byte
// codepoints so arbitrary input never throws.
inline char32_t next_codepoint(const std::string& s, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return b0;
  }
  std::size_t p = pos + 1;
  for (int i = 0; i < extra; ++i, ++p) {
    if (p >= s.size() || (static_cast<unsigned char>(s[p]) & 0xC0) != 0x80) {
      ++pos;
      return b0;
    }
    cp = (cp << 6) | (static_cast<unsigned char>(s[p]) & 0x3F);
  }
  pos = p;
  return cp;
}

inline bool is_ascii_letter(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}

inline bool is_ascii_upper(char32_t cp) { return cp >= 'A' && cp <= 'Z'; }

inline bool is_ascii_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

// Word characters: ASCII letters plus any non-ASCII codepoint. Keeps the
// tokenizer Unicode-tolerant without a full character database.
inline bool is_word_char(char32_t cp) {
  return is_ascii_letter(cp) || cp >= 0x80;
}

struct Token {
  std::string text;       // original spelling
  std::string lowered;    // ASCII-lowercased form
  std::size_t length = 0; // codepoints
  bool has_non_ascii = false;
  bool has_upper = false;       // any ASCII uppercase
  bool first_upper = false;     // first codepoint is ASCII uppercase
  bool inner_upper = false;     // ASCII uppercase after the first codepoint
  bool all_upper = false;       // every ASCII letter uppercase (and >=1 letter)
};

// Words are maximal runs of word characters.
inline std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  Token cur;
  std::size_t ascii_letters = 0, upper_letters = 0;
  auto flush = [&]() {
    if (cur.length == 0) return;
    cur.all_upper = ascii_letters > 0 && upper_letters == ascii_letters;
    tokens.push_back(std::move(cur));
    cur = Token{};
    ascii_letters = upper_letters = 0;
  };
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = next_codepoint(text, pos);
    if (is_word_char(cp)) {
      const bool first = cur.length == 0;
      cur.text.append(text, start, pos - start);
      if (is_ascii_letter(cp)) {
        ++ascii_letters;
        if (is_ascii_upper(cp)) {
          ++upper_letters;
          cur.has_upper = true;
          if (first)
            cur.first_upper = true;
          else
            cur.inner_upper = true;
          cur.lowered += static_cast<char>(cp - 'A' + 'a');
        } else {
          cur.lowered += static_cast<char>(cp);
        }
      } else {
        cur.has_non_ascii = true;
        cur.lowered.append(text, start, pos - start);
      }
      ++cur.length;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

// Paragraphs are blocks separated by at least one blank line.
inline std::size_t count_paragraphs(const std::string& text) {
  std::size_t paragraphs = 0;
  bool in_paragraph = false;
  bool line_has_content = false;
  for (char ch : text) {
    if (ch == '\n') {
      if (!line_has_content && in_paragraph) in_paragraph = false;
      line_has_content = false;
    } else if (!static_cast<bool>(std::isspace(static_cast<unsigned char>(ch)))) {
      line_has_content = true;
      if (!in_paragraph) {
        in_paragraph = true;
        ++paragraphs;
      }
    }
  }
  return paragraphs;
}

inline std::size_t count_codepoints(const std::string& text) {
  std::size_t n = 0, pos = 0;
  while (pos < text.size()) {
    next_codepoint(text, pos);
    ++n;
  }
  return n;
}

}  // namespace dehealth
