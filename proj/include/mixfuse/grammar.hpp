// mixfuse/grammar.hpp
//
// Copyright 2026  The mixfuse authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MIXFUSE_GRAMMAR_HPP_
#define MIXFUSE_GRAMMAR_HPP_

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixfuse/textutil.hpp"

namespace mixfuse {

struct GrammarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Declarative alphabet for a practical tonal orthography. The engine is
// language-portable: everything the parser and the rule set key on comes
// from here.
struct Grammar {
  std::set<char32_t> vowels;
  std::set<char32_t> consonants;
  std::set<char32_t> tone_digits;
  std::vector<std::u32string> multigraphs;  // sorted longest-first

  char32_t prefix_separator = U'-';
  char32_t enclitic_separator = U'=';
  char32_t glottal = U'\'';
  char32_t open_paren = U'(';
  char32_t close_paren = U')';

  // Yoloxóchitl Mixtec practical orthography, the default grammar.
  static Grammar yoloxochitl_mixtec() {
    Grammar g;
    for (char32_t c : std::u32string(U"aeiou")) g.vowels.insert(c);
    for (char32_t c : std::u32string(U"bcdghjklmnprstxy")) {
      g.consonants.insert(c);
    }
    for (char32_t c : std::u32string(U"1234")) g.tone_digits.insert(c);
    g.multigraphs = {U"ch", U"nd", U"ts"};
    g.sort_multigraphs();
    return g;
  }

  // File format: one "key = values" entry per line, '#' comments.
  // Keys: vowels, consonants, multigraphs, tone_digits, prefix_separator,
  // enclitic_separator, glottal, parentheses.
  static Grammar load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GrammarError("cannot open grammar file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
  }

  static Grammar parse(const std::string& content, const std::string& origin) {
    Grammar g;
    std::istringstream in(content);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      std::string norm = normalize_text(line);
      if (norm.empty()) continue;
      auto eq = norm.find('=');
      // '=' may legitimately appear as a value (enclitic_separator); only
      // the first one splits key from values.
      if (eq == std::string::npos) {
        throw GrammarError(origin + ":" + std::to_string(line_no) +
                           ": expected 'key = values'");
      }
      std::string key = normalize_text(norm.substr(0, eq));
      std::vector<std::string> values = split_words(norm.substr(eq + 1));
      auto single = [&](const std::string& v) -> char32_t {
        std::u32string u = decode_utf8(v);
        if (u.size() != 1) {
          throw GrammarError(origin + ":" + std::to_string(line_no) +
                             ": expected a single character, got '" + v + "'");
        }
        return u[0];
      };
      if (key == "vowels") {
        for (const auto& v : values) g.vowels.insert(single(v));
      } else if (key == "consonants") {
        for (const auto& v : values) g.consonants.insert(single(v));
      } else if (key == "tone_digits") {
        for (const auto& v : values) g.tone_digits.insert(single(v));
      } else if (key == "multigraphs") {
        for (const auto& v : values) g.multigraphs.push_back(decode_utf8(v));
      } else if (key == "prefix_separator") {
        if (!values.empty()) g.prefix_separator = single(values[0]);
      } else if (key == "enclitic_separator") {
        if (!values.empty()) g.enclitic_separator = single(values[0]);
      } else if (key == "glottal") {
        if (!values.empty()) g.glottal = single(values[0]);
      } else if (key == "parentheses") {
        if (values.size() != 2) {
          throw GrammarError(origin + ":" + std::to_string(line_no) +
                             ": parentheses needs exactly two characters");
        }
        g.open_paren = single(values[0]);
        g.close_paren = single(values[1]);
      } else {
        throw GrammarError(origin + ":" + std::to_string(line_no) +
                           ": unknown key '" + key + "'");
      }
    }
    if (g.vowels.empty() || g.tone_digits.empty()) {
      throw GrammarError(origin + ": grammar needs vowels and tone_digits");
    }
    g.sort_multigraphs();
    return g;
  }

  void sort_multigraphs() {
    std::sort(multigraphs.begin(), multigraphs.end(),
              [](const std::u32string& a, const std::u32string& b) {
                return a.size() != b.size() ? a.size() > b.size() : a < b;
              });
  }

  bool is_vowel(char32_t c) const { return vowels.count(c) != 0; }
  bool is_consonant(char32_t c) const { return consonants.count(c) != 0; }
  bool is_tone(char32_t c) const { return tone_digits.count(c) != 0; }
  bool is_separator(char32_t c) const {
    return c == prefix_separator || c == enclitic_separator;
  }
  bool is_paren(char32_t c) const {
    return c == open_paren || c == close_paren;
  }
  bool is_marker(char32_t c) const {
    return is_separator(c) || c == glottal || is_paren(c);
  }
  bool in_alphabet(char32_t c) const {
    return is_vowel(c) || is_consonant(c) || is_tone(c) || is_marker(c);
  }

  // Length of the consonant (multigraph or single letter) starting at i,
  // 0 if none.
  std::size_t consonant_len(std::u32string_view s, std::size_t i) const {
    if (i >= s.size()) return 0;
    for (const auto& m : multigraphs) {
      if (s.size() - i >= m.size() && s.compare(i, m.size(), m) == 0) {
        return m.size();
      }
    }
    return i < s.size() && is_consonant(s[i]) ? 1 : 0;
  }

  // Every codepoint of the alphabet, for random-string generators.
  std::vector<char32_t> alphabet() const {
    std::vector<char32_t> out(vowels.begin(), vowels.end());
    out.insert(out.end(), consonants.begin(), consonants.end());
    out.insert(out.end(), tone_digits.begin(), tone_digits.end());
    out.push_back(prefix_separator);
    out.push_back(enclitic_separator);
    out.push_back(glottal);
    out.push_back(open_paren);
    out.push_back(close_paren);
    return out;
  }
};

}  // namespace mixfuse

#endif  // MIXFUSE_GRAMMAR_HPP_
