// mixfuse/metrics.hpp
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
// WER/CER scoring against expert references, with character errors
// classified into orthography categories (enclitic "=", prefix "-",
// glottal "'", parentheses, tone digits, stem-nasal coda "n", others).
// CER runs over the concatenated character stream with inter-word
// whitespace dropped; rates micro-average across the utterance set.

#ifndef MIXFUSE_METRICS_HPP_
#define MIXFUSE_METRICS_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixfuse/alignment.hpp"
#include "mixfuse/corpus_io.hpp"
#include "mixfuse/grammar.hpp"
#include "mixfuse/orthography.hpp"
#include "mixfuse/textutil.hpp"

namespace mixfuse {

struct EmptyReference : std::runtime_error {
  EmptyReference() : std::runtime_error("reference set is empty") {}
};

struct ZeroBaseline : std::runtime_error {
  ZeroBaseline() : std::runtime_error("baseline rate is zero") {}
};

// S, D, I against a reference of a given size, at one level.
struct LevelCounts {
  std::int64_t substitutions = 0;
  std::int64_t deletions = 0;
  std::int64_t insertions = 0;
  std::int64_t reference_count = 0;

  std::int64_t errors() const { return substitutions + deletions + insertions; }

  // (S + D + I) / N as percent, one decimal.
  double rate_percent() const {
    if (reference_count == 0) return 0.0;
    double raw = 100.0 * static_cast<double>(errors()) /
                 static_cast<double>(reference_count);
    return std::round(raw * 10.0) / 10.0;
  }

  LevelCounts& operator+=(const LevelCounts& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    reference_count += o.reference_count;
    return *this;
  }
};

enum class ErrorCategory {
  Enclitics,
  Prefixes,
  GlottalStop,
  Parenthesis,
  Tone,
  StemNasal,
  Others,
};
inline constexpr std::size_t kCategoryCount = 7;

inline const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Enclitics: return "Enclitics";
    case ErrorCategory::Prefixes: return "Prefixes";
    case ErrorCategory::GlottalStop: return "GlottalStop";
    case ErrorCategory::Parenthesis: return "Parenthesis";
    case ErrorCategory::Tone: return "Tone";
    case ErrorCategory::StemNasal: return "StemNasal";
    case ErrorCategory::Others: return "Others";
  }
  return "?";
}

struct CategoryCounts {
  std::array<std::int64_t, kCategoryCount> counts{};

  std::int64_t& operator[](ErrorCategory c) {
    return counts[static_cast<std::size_t>(c)];
  }
  std::int64_t operator[](ErrorCategory c) const {
    return counts[static_cast<std::size_t>(c)];
  }
  std::int64_t total() const {
    std::int64_t t = 0;
    for (auto v : counts) t += v;
    return t;
  }
  CategoryCounts& operator+=(const CategoryCounts& o) {
    for (std::size_t i = 0; i < kCategoryCount; ++i) counts[i] += o.counts[i];
    return *this;
  }
};

struct ErrorReport {
  LevelCounts wer;
  LevelCounts cer;
  CategoryCounts categories;
  std::int64_t utterances = 0;
  std::int64_t missing_hypotheses = 0;

  nlohmann::json to_json() const {
    auto level = [](const LevelCounts& c, const char* unit) {
      return nlohmann::json{{"substitutions", c.substitutions},
                            {"deletions", c.deletions},
                            {"insertions", c.insertions},
                            {std::string("reference_") + unit,
                             c.reference_count},
                            {"errors", c.errors()},
                            {"rate", c.rate_percent()}};
    };
    nlohmann::json cats;
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
      cats[category_name(static_cast<ErrorCategory>(i))] = categories.counts[i];
    }
    return nlohmann::json{{"wer", level(wer, "tokens")},
                          {"cer", level(cer, "chars")},
                          {"categories", cats},
                          {"utterances", utterances},
                          {"missing_hypotheses", missing_hypotheses}};
  }
};

// 100 * (baseline - new) / baseline.
inline double relative_reduction(double baseline_rate, double new_rate) {
  if (baseline_rate == 0.0) throw ZeroBaseline();
  return 100.0 * (baseline_rate - new_rate) / baseline_rate;
}

inline double round1(double x) { return std::round(x * 10.0) / 10.0; }

namespace detail {

enum class CharClass {
  Enclitic,
  Prefix,
  Glottal,
  Paren,
  Tone,
  StemNasal,
  Other,
};

inline ErrorCategory to_category(CharClass c) {
  switch (c) {
    case CharClass::Enclitic: return ErrorCategory::Enclitics;
    case CharClass::Prefix: return ErrorCategory::Prefixes;
    case CharClass::Glottal: return ErrorCategory::GlottalStop;
    case CharClass::Paren: return ErrorCategory::Parenthesis;
    case CharClass::Tone: return ErrorCategory::Tone;
    case CharClass::StemNasal: return ErrorCategory::StemNasal;
    case CharClass::Other: return ErrorCategory::Others;
  }
  return ErrorCategory::Others;
}

inline CharClass plain_char_class(char32_t c, const Grammar& g) {
  if (c == g.enclitic_separator) return CharClass::Enclitic;
  if (c == g.prefix_separator) return CharClass::Prefix;
  if (c == g.glottal) return CharClass::Glottal;
  if (g.is_paren(c)) return CharClass::Paren;
  if (g.is_tone(c)) return CharClass::Tone;
  return CharClass::Other;
}

// Per-character classes for one token; "n" counts as StemNasal only in
// nasal-coda position, which needs the orthography parse. The class
// array must stay exactly parallel to the token's codepoints, so any
// structural surprise falls back to plain character classes.
inline void append_token_classes(const std::string& token, const Grammar& g,
                                 std::vector<CharClass>& out) {
  std::u32string u = decode_utf8(token);
  auto plain = [&]() {
    for (char32_t c : u) out.push_back(plain_char_class(c, g));
  };

  Token t;
  try {
    t = parse_token(token, ParseMode::Lenient, g);
  } catch (const std::exception&) {
    plain();
    return;
  }
  if (t.kind == TokenKind::CodeSwitch) {
    out.insert(out.end(), u.size(), CharClass::Other);
    return;
  }

  std::vector<CharClass> cls;
  for (const Morph& m : t.word->morphs) {
    for (char32_t c : m.separator) cls.push_back(plain_char_class(c, g));
    for (const Syllable& s : m.syllables) {
      if (!s.clean()) {
        for (char32_t c : s.text) cls.push_back(plain_char_class(c, g));
        continue;
      }
      if (!s.bare_tones.empty()) {
        cls.insert(cls.end(), s.bare_tones.size(), CharClass::Tone);
        continue;
      }
      cls.insert(cls.end(), s.onset.size(), CharClass::Other);
      for (const Mora& mora : s.moras) {
        cls.push_back(CharClass::Other);  // the vowel
        if (mora.glottal_after) cls.push_back(CharClass::Glottal);
        if (mora.nasal_coda) cls.push_back(CharClass::StemNasal);
        if (mora.elided) cls.push_back(CharClass::Paren);
        cls.insert(cls.end(), mora.tones.size(), CharClass::Tone);
        if (mora.elided) cls.push_back(CharClass::Paren);
      }
    }
  }
  if (cls.size() != u.size()) {
    plain();
    return;
  }
  out.insert(out.end(), cls.begin(), cls.end());
}

// The whitespace-free character stream of an utterance plus the parallel
// class array.
struct CharStream {
  std::u32string chars;
  std::vector<CharClass> classes;
};

inline CharStream char_stream(const std::string& utt_text, const Grammar& g) {
  CharStream out;
  for (const std::string& token : split_words(utt_text)) {
    std::u32string u = decode_utf8(token);
    out.chars += u;
    append_token_classes(token, g, out.classes);
  }
  return out;
}

}  // namespace detail

// Token-level scores, micro-averaged; an utterance id missing from the
// hypothesis scores as all deletions.
inline LevelCounts wer(const UtteranceTable& ref, const UtteranceTable& hyp,
                       std::int64_t* missing = nullptr) {
  LevelCounts total;
  for (const auto& [id, ref_text] : ref.entries) {
    std::vector<std::string> r = split_words(ref_text);
    std::vector<std::string> h;
    auto it = hyp.entries.find(id);
    if (it != hyp.entries.end()) {
      h = split_words(it->second);
    } else if (missing) {
      ++*missing;
    }
    AlignmentResult a =
        edit_align(r, h, naive_cost_model<std::string>(), AlignLevel::Word);
    LevelCounts c;
    c.reference_count = static_cast<std::int64_t>(r.size());
    for (const EditOp& op : a.ops) {
      if (op.type == EditOpType::Substitute) ++c.substitutions;
      if (op.type == EditOpType::Delete) ++c.deletions;
      if (op.type == EditOpType::Insert) ++c.insertions;
    }
    total += c;
  }
  if (total.reference_count == 0) throw EmptyReference();
  return total;
}

inline LevelCounts cer(const UtteranceTable& ref, const UtteranceTable& hyp,
                       const Grammar& g, std::int64_t* missing = nullptr,
                       CategoryCounts* categories = nullptr) {
  LevelCounts total;
  for (const auto& [id, ref_text] : ref.entries) {
    detail::CharStream r = detail::char_stream(ref_text, g);
    detail::CharStream h;
    auto it = hyp.entries.find(id);
    if (it != hyp.entries.end()) {
      h = detail::char_stream(it->second, g);
    } else if (missing) {
      ++*missing;
    }
    AlignmentResult a = align_chars(r.chars, h.chars);
    LevelCounts c;
    c.reference_count = static_cast<std::int64_t>(r.chars.size());
    for (const EditOp& op : a.ops) {
      if (op.type == EditOpType::Match) continue;
      detail::CharClass cls = detail::CharClass::Other;
      switch (op.type) {
        case EditOpType::Substitute: {
          ++c.substitutions;
          cls = r.classes[op.i];
          // Unclassified reference char against a hypothesis marker:
          // count the marker.
          if (cls == detail::CharClass::Other) {
            detail::CharClass hc = h.classes[op.j];
            if (hc == detail::CharClass::Enclitic ||
                hc == detail::CharClass::Prefix ||
                hc == detail::CharClass::Glottal ||
                hc == detail::CharClass::Paren) {
              cls = hc;
            }
          }
          break;
        }
        case EditOpType::Delete:
          ++c.deletions;
          cls = r.classes[op.i];
          break;
        case EditOpType::Insert:
          ++c.insertions;
          cls = h.classes[op.j];
          break;
        default:
          break;
      }
      if (categories) (*categories)[detail::to_category(cls)] += 1;
    }
    total += c;
  }
  if (total.reference_count == 0) throw EmptyReference();
  return total;
}

inline CategoryCounts classify_errors(const UtteranceTable& ref,
                                      const UtteranceTable& hyp,
                                      const Grammar& g) {
  CategoryCounts categories;
  cer(ref, hyp, g, nullptr, &categories);
  return categories;
}

// The full report: WER + CER + the error-category table.
inline ErrorReport score(const UtteranceTable& ref, const UtteranceTable& hyp,
                         const Grammar& g) {
  ErrorReport report;
  report.utterances = static_cast<std::int64_t>(ref.size());
  report.wer = wer(ref, hyp, &report.missing_hypotheses);
  report.cer = cer(ref, hyp, g, nullptr, &report.categories);
  return report;
}

// Per-utterance breakdown, TSV: uttid, then S/D/I/N/rate at word and
// character level.
inline std::string per_utterance_tsv(const UtteranceTable& ref,
                                     const UtteranceTable& hyp,
                                     const Grammar& g) {
  std::string out =
      "uttid\twer_sub\twer_del\twer_ins\twer_ref\twer_rate\t"
      "cer_sub\tcer_del\tcer_ins\tcer_ref\tcer_rate\n";
  for (const auto& [id, ref_text] : ref.entries) {
    UtteranceTable r1;
    r1.entries[id] = ref_text;
    UtteranceTable h1;
    auto it = hyp.entries.find(id);
    if (it != hyp.entries.end()) h1.entries[id] = it->second;
    LevelCounts w;
    LevelCounts c;
    try {
      w = wer(r1, h1);
      c = cer(r1, h1, g);
    } catch (const EmptyReference&) {
      // Zero-token reference: report hypothesis insertions only.
      w = LevelCounts{};
      c = LevelCounts{};
      if (it != hyp.entries.end()) {
        w.insertions =
            static_cast<std::int64_t>(split_words(it->second).size());
        c.insertions = static_cast<std::int64_t>(
            detail::char_stream(it->second, g).chars.size());
      }
    }
    auto fmt = [](const LevelCounts& lc) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%lld\t%lld\t%lld\t%lld\t%.1f",
                    static_cast<long long>(lc.substitutions),
                    static_cast<long long>(lc.deletions),
                    static_cast<long long>(lc.insertions),
                    static_cast<long long>(lc.reference_count),
                    lc.rate_percent());
      return std::string(buf);
    };
    out += id + "\t" + fmt(w) + "\t" + fmt(c) + "\n";
  }
  return out;
}

}  // namespace mixfuse

#endif  // MIXFUSE_METRICS_HPP_
