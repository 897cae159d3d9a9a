// mixfuse/fusion.hpp
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
// Rule-based fusion of a novice transcription with an ASR hypothesis.
// Rules run word -> syllable -> character over an aligned utterance pair:
//
//   W1  code-switched novice word is kept verbatim
//   W2  novice-only words are kept (ASR-only words are dropped)
//   S1  tone-initial novice syllable -> take the ASR syllable
//   S2  same segments, different tone digits -> take the ASR tones
//   S3  novice CV against ASR CVV/CV'V -> take the ASR syllable
//   S4  tones after a non-coda consonant -> take the other side
//   C1  markers ("-", "=", "(", ")", "'") the ASR has and the novice
//       lacks are spliced in; parentheses only as balanced pairs
//
// The novice transcription is the base document: when no rule fires the
// novice unit is kept. Within a syllable the precedence is S1 > S4 > S2 >
// S3, first firing rule wins; a whole-unit replacement is final and no
// lower-level rule reruns on it. Fusion1 aligns with unit costs, Fusion2
// with the hierarchical normalized costs.

#ifndef MIXFUSE_FUSION_HPP_
#define MIXFUSE_FUSION_HPP_

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mixfuse/alignment.hpp"
#include "mixfuse/grammar.hpp"
#include "mixfuse/orthography.hpp"
#include "mixfuse/textutil.hpp"

namespace mixfuse {

enum class RuleId { W1, W2, S1, S2, S3, S4, C1 };
inline constexpr std::size_t kRuleCount = 7;

inline const char* rule_name(RuleId r) {
  switch (r) {
    case RuleId::W1: return "W1";
    case RuleId::W2: return "W2";
    case RuleId::S1: return "S1";
    case RuleId::S2: return "S2";
    case RuleId::S3: return "S3";
    case RuleId::S4: return "S4";
    case RuleId::C1: return "C1";
  }
  return "?";
}

inline std::optional<RuleId> rule_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kRuleCount; ++i) {
    RuleId r = static_cast<RuleId>(i);
    if (name == rule_name(r)) return r;
  }
  return std::nullopt;
}

struct RuleSetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Which rules are live; all on by default. File format: one
// "<rule-id> = on|off" per line, '#' comments.
struct RuleSet {
  std::array<bool, kRuleCount> enabled;

  RuleSet() { enabled.fill(true); }

  static RuleSet all() { return RuleSet(); }

  bool is_enabled(RuleId r) const {
    return enabled[static_cast<std::size_t>(r)];
  }
  void set(RuleId r, bool on) { enabled[static_cast<std::size_t>(r)] = on; }

  static RuleSet load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuleSetError("cannot open rule set file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
  }

  static RuleSet parse(const std::string& content, const std::string& origin) {
    RuleSet rs;
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
      if (eq == std::string::npos) {
        throw RuleSetError(origin + ":" + std::to_string(line_no) +
                           ": expected '<rule> = on|off'");
      }
      std::string key = normalize_text(norm.substr(0, eq));
      std::string value = normalize_text(norm.substr(eq + 1));
      auto rule = rule_from_name(key);
      if (!rule) {
        throw RuleSetError(origin + ":" + std::to_string(line_no) +
                           ": unknown rule '" + key + "'");
      }
      if (value == "on" || value == "true" || value == "1") {
        rs.set(*rule, true);
      } else if (value == "off" || value == "false" || value == "0") {
        rs.set(*rule, false);
      } else {
        throw RuleSetError(origin + ":" + std::to_string(line_no) +
                           ": expected on/off, got '" + value + "'");
      }
    }
    return rs;
  }
};

enum class FusionMode { Fusion1, Fusion2 };

// One rule firing. position = word index in the novice utterance;
// syllable_index = slot index inside that word, -1 for word-level rules.
// Replaying chosen fragments over the novice slots reconstructs the
// fused output exactly.
struct TraceEntry {
  std::string utt_id;
  int word_index = 0;
  int syllable_index = -1;
  RuleId rule = RuleId::W1;
  std::string novice_fragment;
  std::string asr_fragment;
  std::string chosen_fragment;
};

struct FusionTrace {
  std::vector<TraceEntry> entries;

  // TSV: uttid, position (word or word.syll), rule, novice, asr, chosen.
  std::string to_tsv() const {
    std::string out;
    for (const TraceEntry& e : entries) {
      out += e.utt_id;
      out += '\t';
      out += std::to_string(e.word_index);
      if (e.syllable_index >= 0) {
        out += '.';
        out += std::to_string(e.syllable_index);
      }
      out += '\t';
      out += rule_name(e.rule);
      out += '\t';
      out += e.novice_fragment;
      out += '\t';
      out += e.asr_fragment;
      out += '\t';
      out += e.chosen_fragment;
      out += '\n';
    }
    return out;
  }
};

struct FusionResult {
  std::string fused;
  FusionTrace trace;
};

// ---- Rule predicates -------------------------------------------------

// W1 wants a genuine code-switched word, not just any token the parser
// left opaque.
inline bool rule_w1_fires(const Token& novice, const Grammar& g) {
  return novice.kind == TokenKind::CodeSwitch &&
         is_code_switch_text(novice.raw, g);
}

inline bool rule_s1_fires(const Syllable& novice) {
  return novice.anomalies.count(Anomaly::ToneInitial) != 0;
}

// Same segments, different tone digit sequences. Elision parentheses do
// not count as a tone difference; those belong to C1.
inline bool rule_s2_fires(const Syllable& novice, const Syllable& asr,
                          const Grammar& g) {
  return novice.segments(g) == asr.segments(g) &&
         novice.tone_digit_sequence(g) != asr.tone_digit_sequence(g);
}

inline bool rule_s3_fires(const Syllable& novice, const Syllable& asr) {
  SyllableShape as = asr.shape();
  return novice.shape() == SyllableShape::CV &&
         (as == SyllableShape::CVV || as == SyllableShape::CVGlottalV);
}

struct S4Decision {
  bool fires = false;
  bool choose_asr = false;  // when both sides are anomalous, keep novice
};

// Tone after a consonant (a nasal coda is exempt: that tone placement is
// grammatical). Whichever side is anomalous yields to the other; if both
// are, the novice stays.
inline S4Decision rule_s4(const Syllable& novice, const Syllable& asr) {
  bool nov_bad = novice.anomalies.count(Anomaly::ToneAfterConsonant) != 0;
  bool asr_bad = asr.anomalies.count(Anomaly::ToneAfterConsonant) != 0;
  if (!nov_bad && !asr_bad) return {false, false};
  if (nov_bad && asr_bad) return {true, false};
  return {true, nov_bad};
}

struct C1Result {
  std::u32string fused;
  bool changed = false;
  bool unbalanced_skipped = false;
};

// Splices ASR marker characters the novice lacks into the novice slot,
// at their aligned positions. Parentheses go in as balanced pairs only;
// when just one of "(" ")" would be inserted, neither is, so the output
// stays parseable.
inline C1Result rule_c1(const std::u32string& novice_slot,
                        const std::u32string& asr_slot, const Grammar& g) {
  AlignmentResult chars = align_chars(novice_slot, asr_slot);
  int opens = 0;
  int closes = 0;
  for (const EditOp& op : chars.ops) {
    if (op.type != EditOpType::Insert) continue;
    char32_t c = asr_slot[op.j];
    if (c == g.open_paren) ++opens;
    if (c == g.close_paren) ++closes;
  }
  const bool parens_ok = opens == closes;

  C1Result result;
  result.unbalanced_skipped = !parens_ok && (opens > 0 || closes > 0);
  for (const EditOp& op : chars.ops) {
    switch (op.type) {
      case EditOpType::Match:
      case EditOpType::Substitute:
      case EditOpType::Delete:
        result.fused.push_back(novice_slot[op.i]);
        break;
      case EditOpType::Insert: {
        char32_t c = asr_slot[op.j];
        bool is_paren = g.is_paren(c);
        if (g.is_marker(c) && (!is_paren || parens_ok)) {
          result.fused.push_back(c);
          result.changed = true;
        }
        break;
      }
    }
  }
  return result;
}

// ---- The fusion pipeline ----------------------------------------------

namespace detail {

inline Token parse_lenient_or_opaque(const std::string& raw,
                                     const Grammar& g) {
  try {
    return parse_token(raw, ParseMode::Lenient, g);
  } catch (const std::exception&) {
    // Tokens outside the alphabet pass through untouched; fuse() never
    // fails on degenerate input.
    return Token{TokenKind::CodeSwitch, raw, std::nullopt};
  }
}

}  // namespace detail

inline FusionResult fuse(std::string_view novice_utt, std::string_view asr_utt,
                         FusionMode mode, const RuleSet& rules,
                         const Grammar& g, std::string_view utt_id = "") {
  std::vector<std::string> novice_words = split_words(novice_utt);
  std::vector<std::string> asr_words = split_words(asr_utt);

  std::vector<Token> novice;
  std::vector<Token> asr;
  novice.reserve(novice_words.size());
  asr.reserve(asr_words.size());
  for (const auto& w : novice_words) {
    novice.push_back(detail::parse_lenient_or_opaque(w, g));
  }
  for (const auto& w : asr_words) {
    asr.push_back(detail::parse_lenient_or_opaque(w, g));
  }

  HierarchicalAlignment ha = hierarchical_align(
      novice, asr,
      mode == FusionMode::Fusion2 ? AlignMode::Hierarchical
                                  : AlignMode::Naive);

  FusionResult result;
  std::vector<std::string> fused_words;
  fused_words.reserve(novice.size());

  auto trace = [&](int w, int s, RuleId rule, const std::string& nov,
                   const std::string& asr_frag, const std::string& chosen) {
    result.trace.entries.push_back(TraceEntry{std::string(utt_id), w, s, rule,
                                              nov, asr_frag, chosen});
  };

  for (std::size_t k = 0; k < ha.words.ops.size(); ++k) {
    const EditOp& wop = ha.words.ops[k];
    if (wop.type == EditOpType::Insert) continue;  // ASR-only word: dropped

    const Token& nw = novice[wop.i];
    if (wop.type == EditOpType::Delete) {
      // Novice-only word.
      if (rules.is_enabled(RuleId::W2)) {
        trace(static_cast<int>(wop.i), -1, RuleId::W2, nw.raw, "", nw.raw);
      }
      fused_words.push_back(nw.raw);
      continue;
    }

    const Token& aw = asr[wop.j];
    if (nw.raw == aw.raw) {  // nothing to decide
      fused_words.push_back(nw.raw);
      continue;
    }

    if (nw.kind == TokenKind::CodeSwitch) {
      // Genuine code-switch and unparseable tokens are both kept; only
      // real code-switch words are W1 firings.
      if (rules.is_enabled(RuleId::W1) && rule_w1_fires(nw, g)) {
        trace(static_cast<int>(wop.i), -1, RuleId::W1, nw.raw, aw.raw, nw.raw);
      }
      fused_words.push_back(nw.raw);
      continue;
    }
    if (aw.kind != TokenKind::Mixtec || !ha.details[k]) {
      // No syllable structure to compare against: keep the novice word.
      fused_words.push_back(nw.raw);
      continue;
    }

    const WordPairAlignment& wp = *ha.details[k];
    std::vector<SyllableSlot> nslots = syllable_slots(nw);
    std::vector<SyllableSlot> aslots = syllable_slots(aw);

    std::u32string fused_word;
    for (std::size_t s = 0; s < wp.syllables.ops.size(); ++s) {
      const EditOp& sop = wp.syllables.ops[s];
      if (sop.type == EditOpType::Insert) continue;  // ASR-only syllable
      const SyllableSlot& ns = nslots[sop.i];
      if (sop.type == EditOpType::Delete) {
        fused_word += ns.slot_text();
        continue;
      }
      const SyllableSlot& as = aslots[sop.j];
      if (ns.slot_text() == as.slot_text()) {
        fused_word += ns.slot_text();
        continue;
      }

      // Syllable rules, precedence S1 > S4 > S2 > S3; replacement keeps
      // the novice separator and is final.
      std::optional<RuleId> fired;
      bool choose_asr = true;
      if (ns.syllable && as.syllable) {
        if (rules.is_enabled(RuleId::S1) && rule_s1_fires(*ns.syllable)) {
          fired = RuleId::S1;
        } else if (rules.is_enabled(RuleId::S4)) {
          S4Decision d = rule_s4(*ns.syllable, *as.syllable);
          if (d.fires) {
            fired = RuleId::S4;
            choose_asr = d.choose_asr;
          }
        }
        if (!fired && rules.is_enabled(RuleId::S2) &&
            rule_s2_fires(*ns.syllable, *as.syllable, g)) {
          fired = RuleId::S2;
        }
        if (!fired && rules.is_enabled(RuleId::S3) &&
            rule_s3_fires(*ns.syllable, *as.syllable)) {
          fired = RuleId::S3;
        }
      }

      if (fired) {
        std::u32string chosen =
            ns.separator + (choose_asr ? as.text : ns.text);
        fused_word += chosen;
        trace(static_cast<int>(wop.i), static_cast<int>(sop.i), *fired,
              encode_utf8(ns.slot_text()), encode_utf8(as.slot_text()),
              encode_utf8(chosen));
        continue;
      }

      if (rules.is_enabled(RuleId::C1)) {
        C1Result c1 = rule_c1(ns.slot_text(), as.slot_text(), g);
        if (c1.changed) {
          fused_word += c1.fused;
          trace(static_cast<int>(wop.i), static_cast<int>(sop.i), RuleId::C1,
                encode_utf8(ns.slot_text()), encode_utf8(as.slot_text()),
                encode_utf8(c1.fused));
          continue;
        }
      }
      fused_word += ns.slot_text();
    }

    std::string fused_utf8 = encode_utf8(fused_word);
    fused_words.push_back(fused_utf8.empty() ? nw.raw : fused_utf8);
  }

  result.fused = join_words(fused_words);
  return result;
}

}  // namespace mixfuse

#endif  // MIXFUSE_FUSION_HPP_
