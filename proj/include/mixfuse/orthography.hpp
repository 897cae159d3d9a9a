// mixfuse/orthography.hpp
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
//
// Parser and renderer for underlying-form practical orthography:
// prefixes split off by "-", enclitics by "=", glottal stop "'", tone
// digits on each mora, elided tones in parentheses. The lenient parser
// never discards characters: every input codepoint lands in exactly one
// syllable slice, so rendering reproduces the input byte for byte.
// Tokens without tone digits or markers are code-switched words (Spanish
// in the default grammar) and stay opaque.

#ifndef MIXFUSE_ORTHOGRAPHY_HPP_
#define MIXFUSE_ORTHOGRAPHY_HPP_

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mixfuse/grammar.hpp"
#include "mixfuse/textutil.hpp"

namespace mixfuse {

enum class Anomaly {
  ToneInitial,           // tone digits with no preceding segment
  ToneAfterConsonant,    // tone digits straight after an onset consonant
  Empty,                 // morph or syllable without a nucleus
  MalformedParentheses,  // unbalanced, empty, or misplaced "( )"
  StrayMark,             // glottal or other mark in an impossible position
};

inline const char* anomaly_name(Anomaly a) {
  switch (a) {
    case Anomaly::ToneInitial: return "ToneInitial";
    case Anomaly::ToneAfterConsonant: return "ToneAfterConsonant";
    case Anomaly::Empty: return "Empty";
    case Anomaly::MalformedParentheses: return "MalformedParentheses";
    case Anomaly::StrayMark: return "StrayMark";
  }
  return "?";
}

enum class ParseMode { Strict, Lenient };

enum class ParseErrorCode {
  IllegalCharacter,
  MalformedParentheses,
  StrayTone,
  MalformedWord,
};

inline const char* parse_error_name(ParseErrorCode c) {
  switch (c) {
    case ParseErrorCode::IllegalCharacter: return "IllegalCharacter";
    case ParseErrorCode::MalformedParentheses: return "MalformedParentheses";
    case ParseErrorCode::StrayTone: return "StrayTone";
    case ParseErrorCode::MalformedWord: return "MalformedWord";
  }
  return "?";
}

struct ParseError : std::runtime_error {
  ParseError(ParseErrorCode c, const std::string& what)
      : std::runtime_error(what), code(c) {}
  ParseErrorCode code;
};

// One vowel-weight unit: vowel, optional glottal, optional nasal coda,
// then up to two tone digits, parenthesized when elided.
struct Mora {
  char32_t vowel = 0;
  bool glottal_after = false;
  bool nasal_coda = false;
  std::u32string tones;
  bool elided = false;
};

enum class SyllableShape { CV, CVV, CVGlottalV, Other };

inline const char* shape_name(SyllableShape s) {
  switch (s) {
    case SyllableShape::CV: return "CV";
    case SyllableShape::CVV: return "CVV";
    case SyllableShape::CVGlottalV: return "CV'V";
    case SyllableShape::Other: return "Other";
  }
  return "?";
}

struct Syllable {
  std::u32string text;  // exact source slice, always authoritative
  std::u32string onset;
  std::vector<Mora> moras;
  std::u32string bare_tones;  // digits of a tone-only syllable ("=2")
  std::set<Anomaly> anomalies;

  bool clean() const { return anomalies.empty(); }

  SyllableShape shape() const {
    if (!anomalies.empty()) return SyllableShape::Other;
    if (moras.size() == 1 && !moras[0].glottal_after) return SyllableShape::CV;
    if (moras.size() == 2 && !moras[1].glottal_after) {
      return moras[0].glottal_after ? SyllableShape::CVGlottalV
                                    : SyllableShape::CVV;
    }
    return SyllableShape::Other;
  }

  // Rendered text minus tone digits and parentheses; what rule S2 calls
  // "segments".
  std::u32string segments(const Grammar& g) const {
    std::u32string out;
    for (char32_t c : text) {
      if (!g.is_tone(c) && !g.is_paren(c)) out.push_back(c);
    }
    return out;
  }

  // All tone digits in source order, elided or not.
  std::u32string tone_digit_sequence(const Grammar& g) const {
    std::u32string out;
    for (char32_t c : text) {
      if (g.is_tone(c)) out.push_back(c);
    }
    return out;
  }

  // Clean syllables render from structure (checked against `text` by the
  // round-trip tests); anomalous ones fall back to the raw slice.
  std::u32string render(const Grammar& g) const {
    if (!anomalies.empty()) return text;
    if (!bare_tones.empty()) return bare_tones;
    std::u32string out = onset;
    for (const Mora& m : moras) {
      out.push_back(m.vowel);
      if (m.glottal_after) out.push_back(g.glottal);
      if (m.nasal_coda) out.push_back(U'n');
      if (m.elided) {
        out.push_back(g.open_paren);
        out += m.tones;
        out.push_back(g.close_paren);
      } else {
        out += m.tones;
      }
    }
    return out;
  }
};

struct Morph {
  enum class Role { Prefix, Stem, Enclitic };
  Role role = Role::Stem;
  std::u32string separator;  // exact separator preceding this morph, if any
  std::u32string text;
  std::vector<Syllable> syllables;
  bool tone_only = false;

  bool empty() const { return text.empty(); }
};

inline const char* role_name(Morph::Role r) {
  switch (r) {
    case Morph::Role::Prefix: return "Prefix";
    case Morph::Role::Stem: return "Stem";
    case Morph::Role::Enclitic: return "Enclitic";
  }
  return "?";
}

struct MixtecWord {
  std::vector<Morph> morphs;
  bool separator_order_ok = true;  // false for shapes like "a=b-c"

  std::size_t syllable_count() const {
    std::size_t n = 0;
    for (const Morph& m : morphs) n += m.syllables.size();
    return n;
  }

  std::vector<const Syllable*> syllables() const {
    std::vector<const Syllable*> out;
    for (const Morph& m : morphs) {
      for (const Syllable& s : m.syllables) out.push_back(&s);
    }
    return out;
  }

  std::set<Anomaly> all_anomalies() const {
    std::set<Anomaly> out;
    for (const Morph& m : morphs) {
      if (m.empty()) out.insert(Anomaly::Empty);
      for (const Syllable& s : m.syllables) {
        out.insert(s.anomalies.begin(), s.anomalies.end());
      }
    }
    return out;
  }
};

enum class TokenKind { Mixtec, CodeSwitch };

struct Token {
  TokenKind kind = TokenKind::CodeSwitch;
  std::string raw;
  std::optional<MixtecWord> word;  // present iff kind == Mixtec

  bool has_anomaly() const {
    if (!word) return false;
    return !word->all_anomalies().empty() || !word->separator_order_ok;
  }
};

// Character-class code-switch test: a token with no tone digits and none
// of the marker characters is a code-switched word. No dictionary is
// consulted.
inline bool is_code_switch_text(std::string_view raw, const Grammar& g) {
  try {
    for (char32_t c : decode_utf8(raw)) {
      if (g.is_tone(c) || g.is_marker(c)) return false;
    }
    return true;
  } catch (const Utf8Error&) {
    return false;
  }
}

namespace detail {

// True when an 'n' at position i closes the current mora as a nasal coda:
// everything except a following vowel (tone digit, marker, another
// consonant, or end of morph) keeps it in the coda; a vowel hands it to
// the next onset.
inline bool nasal_coda_position(std::u32string_view s, std::size_t i,
                                const Grammar& g) {
  return i + 1 >= s.size() || !g.is_vowel(s[i + 1]);
}

// Length of a well-formed elided tone group "(d)" or "(dd)" at i, else 0.
inline std::size_t elided_group_len(std::u32string_view s, std::size_t i,
                                    const Grammar& g) {
  if (i >= s.size() || s[i] != g.open_paren) return 0;
  std::size_t j = i + 1;
  std::size_t digits = 0;
  while (j < s.size() && g.is_tone(s[j])) {
    ++digits;
    ++j;
  }
  if (digits < 1 || digits > 2) return 0;
  if (j >= s.size() || s[j] != g.close_paren) return 0;
  return j - i + 1;
}

}  // namespace detail

// Splits a separator-free morph text into syllables. Lossless: the
// concatenated syllable slices reproduce the input. Structure is filled
// for well-formed syllables; anything irregular keeps its raw slice and
// an anomaly flag.
inline std::vector<Syllable> syllabify(std::u32string_view text,
                                       const Grammar& g) {
  std::vector<Syllable> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const std::size_t start = i;
    Syllable syll;

    if (g.consonant_len(text, i) == 0 && !g.is_vowel(text[i])) {
      // Bare run: digits, parens, glottals, or anything else that cannot
      // begin a syllable.
      bool all_digits = true;
      bool has_paren = false;
      while (i < n && g.consonant_len(text, i) == 0 && !g.is_vowel(text[i])) {
        all_digits = all_digits && g.is_tone(text[i]);
        has_paren = has_paren || g.is_paren(text[i]);
        ++i;
      }
      syll.text = std::u32string(text.substr(start, i - start));
      if (all_digits) {
        syll.anomalies.insert(Anomaly::ToneInitial);
        syll.bare_tones = syll.text;
      } else if (has_paren) {
        syll.anomalies.insert(Anomaly::MalformedParentheses);
      } else {
        syll.anomalies.insert(Anomaly::StrayMark);
      }
      out.push_back(std::move(syll));
      continue;
    }

    // Onset: maximal consonant run, multigraphs first.
    while (true) {
      std::size_t len = g.consonant_len(text, i);
      if (len == 0) break;
      syll.onset += text.substr(i, len);
      i += len;
    }

    // Tones straight after the onset (novice slip like "k3a").
    if (!syll.onset.empty()) {
      bool stray_tone = false;
      while (i < n) {
        if (g.is_tone(text[i])) {
          ++i;
          stray_tone = true;
        } else if (std::size_t glen = detail::elided_group_len(text, i, g)) {
          i += glen;
          stray_tone = true;
        } else {
          break;
        }
      }
      if (stray_tone) syll.anomalies.insert(Anomaly::ToneAfterConsonant);
    }

    // Moras: consecutive vowels stay in one syllable; a consonant breaks.
    while (i < n && g.is_vowel(text[i])) {
      Mora m;
      m.vowel = text[i];
      ++i;
      if (i < n && text[i] == g.glottal) {
        m.glottal_after = true;
        ++i;
      }
      if (i < n && text[i] == U'n' && g.is_consonant(U'n') &&
          detail::nasal_coda_position(text, i, g)) {
        m.nasal_coda = true;
        ++i;
      }
      if (i < n && text[i] == g.open_paren) {
        std::size_t glen = detail::elided_group_len(text, i, g);
        if (glen > 0) {
          m.elided = true;
          m.tones = text.substr(i + 1, glen - 2);
          i += glen;
        }
        // A malformed group is left for the bare-run handler above.
      } else {
        while (i < n && g.is_tone(text[i]) && m.tones.size() < 2) {
          m.tones.push_back(text[i]);
          ++i;
        }
      }
      syll.moras.push_back(std::move(m));
    }

    if (syll.moras.empty() && syll.anomalies.empty()) {
      // Onset with no nucleus, e.g. trailing "nd".
      syll.anomalies.insert(Anomaly::Empty);
    }
    syll.text = std::u32string(text.substr(start, i - start));
    out.push_back(std::move(syll));
  }
  return out;
}

namespace detail {

struct StrictFinding {
  ParseErrorCode code;
  std::string detail;
};

inline std::vector<StrictFinding> strict_findings(const MixtecWord& w) {
  std::vector<StrictFinding> out;
  if (!w.separator_order_ok) {
    out.push_back({ParseErrorCode::MalformedWord,
                   "prefix separator after an enclitic"});
  }
  for (const Morph& m : w.morphs) {
    if (m.empty()) {
      out.push_back({ParseErrorCode::MalformedWord, "empty morph"});
      continue;
    }
    for (const Syllable& s : m.syllables) {
      for (Anomaly a : s.anomalies) {
        std::string where = "'" + encode_utf8(s.text) + "'";
        switch (a) {
          case Anomaly::ToneInitial:
          case Anomaly::ToneAfterConsonant:
            out.push_back({ParseErrorCode::StrayTone,
                           std::string(anomaly_name(a)) + " in " + where});
            break;
          case Anomaly::MalformedParentheses:
            out.push_back({ParseErrorCode::MalformedParentheses,
                           "malformed parentheses in " + where});
            break;
          case Anomaly::Empty:
          case Anomaly::StrayMark:
            out.push_back({ParseErrorCode::MalformedWord,
                           std::string(anomaly_name(a)) + " in " + where});
            break;
        }
      }
    }
  }
  return out;
}

}  // namespace detail

// Parses one whitespace-free, NFC-normalized token. Code-switch detection
// runs first and is purely character-class based: no tone digits and no
// markers means the token stays opaque. Lenient mode accepts anything
// over the alphabet and records anomalies; Strict rejects any anomaly.
inline Token parse_token(std::string_view raw, ParseMode mode,
                         const Grammar& g) {
  if (raw.empty()) {
    throw std::invalid_argument("parse_token: empty token");
  }
  std::u32string u;
  try {
    u = decode_utf8(raw);
  } catch (const Utf8Error& e) {
    throw ParseError(ParseErrorCode::IllegalCharacter,
                     "token is not valid UTF-8");
  }

  bool marked = false;
  for (char32_t c : u) {
    if (is_space(c)) {
      throw std::invalid_argument("parse_token: token contains whitespace");
    }
    if (g.is_tone(c) || g.is_marker(c)) marked = true;
  }
  if (!marked) {  // code-switch detection runs first
    return Token{TokenKind::CodeSwitch, std::string(raw), std::nullopt};
  }

  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!g.in_alphabet(u[i])) {
      throw ParseError(ParseErrorCode::IllegalCharacter,
                       "character '" + encode_utf8(std::u32string(1, u[i])) +
                           "' at position " + std::to_string(i) +
                           " is outside the alphabet");
    }
  }

  // Split on separators; each piece keeps the exact separator before it.
  MixtecWord word;
  {
    std::u32string sep;
    std::u32string piece;
    auto flush = [&]() {
      Morph m;
      m.separator = sep;
      m.text = piece;
      word.morphs.push_back(std::move(m));
      piece.clear();
    };
    for (char32_t c : u) {
      if (g.is_separator(c)) {
        flush();
        sep = std::u32string(1, c);
      } else {
        piece.push_back(c);
      }
    }
    flush();
  }

  // Role assignment: the stem is the morph just before the first "="
  // piece, or the last morph when there is no enclitic.
  std::size_t stem_idx = word.morphs.size() - 1;
  for (std::size_t i = 0; i < word.morphs.size(); ++i) {
    if (!word.morphs[i].separator.empty() &&
        word.morphs[i].separator[0] == g.enclitic_separator) {
      stem_idx = i == 0 ? 0 : i - 1;
      break;
    }
  }
  for (std::size_t i = 0; i < word.morphs.size(); ++i) {
    Morph& m = word.morphs[i];
    m.role = i < stem_idx   ? Morph::Role::Prefix
             : i > stem_idx ? Morph::Role::Enclitic
                            : Morph::Role::Stem;
    if (i > stem_idx && !m.separator.empty() &&
        m.separator[0] == g.prefix_separator) {
      word.separator_order_ok = false;
    }
    m.syllables = syllabify(m.text, g);
    // A tone-only enclitic like "=2" is grammatical, not a stray tone.
    if (m.role == Morph::Role::Enclitic && m.syllables.size() == 1 &&
        !m.syllables[0].bare_tones.empty()) {
      m.tone_only = true;
      m.syllables[0].anomalies.erase(Anomaly::ToneInitial);
    }
  }

  Token token{TokenKind::Mixtec, std::string(raw), std::move(word)};

  if (mode == ParseMode::Strict) {
    auto findings = detail::strict_findings(*token.word);
    if (!findings.empty()) {
      throw ParseError(findings[0].code, "'" + std::string(raw) +
                                             "': " + findings[0].detail);
    }
  }
  return token;
}

// Exact inverse of the lenient parse.
inline std::string render(const Token& t, const Grammar& g) {
  if (t.kind == TokenKind::CodeSwitch) return t.raw;
  std::u32string out;
  for (const Morph& m : t.word->morphs) {
    out += m.separator;
    for (const Syllable& s : m.syllables) out += s.render(g);
  }
  return encode_utf8(out);
}

// Drops every elided mora's tones together with their parentheses and
// deletes morph separators. This is the only underlying-to-surface step
// in scope; nasalization and the other phonological processes are not
// applied.
inline std::string strip_elided(const Token& t, const Grammar& g) {
  if (t.kind == TokenKind::CodeSwitch) return t.raw;
  std::u32string out;
  for (const Morph& m : t.word->morphs) {
    for (const Syllable& s : m.syllables) {
      if (s.clean()) {
        if (!s.bare_tones.empty()) {
          out += s.bare_tones;
          continue;
        }
        out += s.onset;
        for (const Mora& mora : s.moras) {
          out.push_back(mora.vowel);
          if (mora.glottal_after) out.push_back(g.glottal);
          if (mora.nasal_coda) out.push_back(U'n');
          if (!mora.elided) out += mora.tones;
        }
      } else {
        // Best effort on anomalous slices: drop well-formed "(d...)"
        // groups, keep the rest.
        std::size_t i = 0;
        while (i < s.text.size()) {
          std::size_t glen = detail::elided_group_len(s.text, i, g);
          if (glen > 0) {
            i += glen;
          } else {
            out.push_back(s.text[i]);
            ++i;
          }
        }
      }
    }
  }
  return encode_utf8(out);
}

}  // namespace mixfuse

#endif  // MIXFUSE_ORTHOGRAPHY_HPP_
