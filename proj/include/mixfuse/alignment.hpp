// mixfuse/alignment.hpp
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
// Minimum-cost edit alignment at character, syllable, and word level.
// The naive model prices every edit at 1; the hierarchical model prices
// a syllable substitution as the character edit distance normalized by
// the first argument's rendered length, and a word substitution as the
// syllable alignment cost normalized by the first word's syllable count.
// Costs are exact rationals so tie-breaking never depends on float luck.

#ifndef MIXFUSE_ALIGNMENT_HPP_
#define MIXFUSE_ALIGNMENT_HPP_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixfuse/orthography.hpp"
#include "mixfuse/rational.hpp"

namespace mixfuse {

enum class EditOpType { Match, Substitute, Insert, Delete };

inline const char* edit_op_name(EditOpType t) {
  switch (t) {
    case EditOpType::Match: return "M";
    case EditOpType::Substitute: return "S";
    case EditOpType::Insert: return "I";
    case EditOpType::Delete: return "D";
  }
  return "?";
}

// i indexes the first (source) sequence, j the second (target); -1 when
// the op does not consume that side.
struct EditOp {
  EditOpType type;
  std::ptrdiff_t i = -1;
  std::ptrdiff_t j = -1;
  Rational cost;
};

enum class AlignLevel { Char, Syllable, Word };

struct AlignmentResult {
  std::vector<EditOp> ops;
  Rational total_cost;
  AlignLevel level = AlignLevel::Char;
};

struct ZeroLengthReference : std::runtime_error {
  ZeroLengthReference()
      : std::runtime_error("normalized cost needs a non-empty reference") {}
};

// Generic DP over two sequences, possibly of different unit types (the
// word transition network aligns slots against words). Backtrace
// tie-break is fixed: Match/Substitute over Delete over Insert at equal
// cost, so identical inputs always produce identical op sequences.
template <class A, class B, class DelF, class InsF, class SubF>
AlignmentResult edit_align_generic(const std::vector<A>& a,
                                   const std::vector<B>& b, DelF del_cost,
                                   InsF ins_cost, SubF sub_cost,
                                   AlignLevel level) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<Rational> dist((n + 1) * (m + 1));
  std::vector<unsigned char> move((n + 1) * (m + 1), 0);
  enum : unsigned char { kStart = 0, kDiag = 1, kUp = 2, kLeft = 3 };
  auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };

  for (std::size_t i = 1; i <= n; ++i) {
    dist[at(i, 0)] = dist[at(i - 1, 0)] + del_cost(a[i - 1]);
    move[at(i, 0)] = kUp;
  }
  for (std::size_t j = 1; j <= m; ++j) {
    dist[at(0, j)] = dist[at(0, j - 1)] + ins_cost(b[j - 1]);
    move[at(0, j)] = kLeft;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      Rational best = dist[at(i - 1, j - 1)] + sub_cost(a[i - 1], b[j - 1]);
      unsigned char mv = kDiag;
      Rational up = dist[at(i - 1, j)] + del_cost(a[i - 1]);
      if (up < best) {
        best = up;
        mv = kUp;
      }
      Rational left = dist[at(i, j - 1)] + ins_cost(b[j - 1]);
      if (left < best) {
        best = left;
        mv = kLeft;
      }
      dist[at(i, j)] = best;
      move[at(i, j)] = mv;
    }
  }

  AlignmentResult result;
  result.level = level;
  result.total_cost = dist[at(n, m)];
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    switch (move[at(i, j)]) {
      case kDiag: {
        Rational c = sub_cost(a[i - 1], b[j - 1]);
        result.ops.push_back(
            {c == Rational(0) ? EditOpType::Match : EditOpType::Substitute,
             static_cast<std::ptrdiff_t>(i - 1),
             static_cast<std::ptrdiff_t>(j - 1), c});
        --i;
        --j;
        break;
      }
      case kUp:
        result.ops.push_back({EditOpType::Delete,
                              static_cast<std::ptrdiff_t>(i - 1), -1,
                              del_cost(a[i - 1])});
        --i;
        break;
      default:
        result.ops.push_back({EditOpType::Insert, -1,
                              static_cast<std::ptrdiff_t>(j - 1),
                              ins_cost(b[j - 1])});
        --j;
        break;
    }
  }
  std::reverse(result.ops.begin(), result.ops.end());
  return result;
}

template <class T>
struct CostModel {
  std::function<Rational(const T&)> insert_cost;
  std::function<Rational(const T&)> delete_cost;
  std::function<Rational(const T&, const T&)> substitute_cost;
};

// Insert = delete = 1; substitute = 0 when equal, else 1.
template <class T>
CostModel<T> naive_cost_model() {
  CostModel<T> cm;
  cm.insert_cost = [](const T&) { return Rational(1); };
  cm.delete_cost = [](const T&) { return Rational(1); };
  cm.substitute_cost = [](const T& x, const T& y) {
    return x == y ? Rational(0) : Rational(1);
  };
  return cm;
}

template <class T>
AlignmentResult edit_align(const std::vector<T>& a, const std::vector<T>& b,
                           const CostModel<T>& costs, AlignLevel level) {
  return edit_align_generic(a, b, costs.delete_cost, costs.insert_cost,
                            costs.substitute_cost, level);
}

inline AlignmentResult align_chars(const std::u32string& a,
                                   const std::u32string& b) {
  std::vector<char32_t> av(a.begin(), a.end());
  std::vector<char32_t> bv(b.begin(), b.end());
  return edit_align(av, bv, naive_cost_model<char32_t>(), AlignLevel::Char);
}

inline Rational char_edit_distance(const std::u32string& a,
                                   const std::u32string& b) {
  return align_chars(a, b).total_cost;
}

// Normalized character-level distance between two rendered syllables:
// D_char(s1, s2) / |s1|. The first argument is the reference side (the
// novice transcription throughout fusion), which makes the cost
// asymmetric by design.
inline Rational syllable_sub_cost(const std::u32string& s1,
                                  const std::u32string& s2) {
  if (s1.empty()) throw ZeroLengthReference();
  return char_edit_distance(s1, s2) /
         Rational(static_cast<std::int64_t>(s1.size()));
}

inline Rational syllable_sub_cost(const Syllable& s1, const Syllable& s2) {
  return syllable_sub_cost(s1.text, s2.text);
}

// One syllable-sized unit of a word as the aligner sees it: the exact
// syllable slice, plus the separator that precedes it when it opens a
// morph. Empty morphs contribute an empty slot so reassembly stays
// lossless.
struct SyllableSlot {
  std::u32string separator;
  std::u32string text;
  const Syllable* syllable = nullptr;

  std::u32string slot_text() const { return separator + text; }
};

inline std::vector<SyllableSlot> syllable_slots(const Token& t) {
  std::vector<SyllableSlot> out;
  if (t.kind != TokenKind::Mixtec) return out;
  for (const Morph& m : t.word->morphs) {
    if (m.syllables.empty()) {
      out.push_back({m.separator, std::u32string(), nullptr});
      continue;
    }
    for (std::size_t k = 0; k < m.syllables.size(); ++k) {
      out.push_back({k == 0 ? m.separator : std::u32string(),
                     m.syllables[k].text, &m.syllables[k]});
    }
  }
  return out;
}

namespace detail {

inline Rational slot_sub_cost(const SyllableSlot& a, const SyllableSlot& b) {
  try {
    return syllable_sub_cost(a.text, b.text);
  } catch (const ZeroLengthReference&) {
    return a.text == b.text ? Rational(0) : Rational(1);
  }
}

inline AlignmentResult align_syllables(const std::vector<SyllableSlot>& a,
                                       const std::vector<SyllableSlot>& b,
                                       bool hierarchical) {
  auto unit = [](const SyllableSlot&) { return Rational(1); };
  if (hierarchical) {
    return edit_align_generic(a, b, unit, unit, slot_sub_cost,
                              AlignLevel::Syllable);
  }
  return edit_align_generic(
      a, b, unit, unit,
      [](const SyllableSlot& x, const SyllableSlot& y) {
        return x.text == y.text ? Rational(0) : Rational(1);
      },
      AlignLevel::Syllable);
}

}  // namespace detail

// Word-level substitution cost: the syllable alignment cost of w1 vs w2
// (insert/delete 1 per syllable) divided by w1's syllable count. Word
// pairs involving a code-switched or unparsed token fall back to the
// normalized character distance over the raw texts.
inline Rational word_sub_cost(const Token& w1, const Token& w2) {
  if (w1.kind != TokenKind::Mixtec || w2.kind != TokenKind::Mixtec) {
    std::u32string a = decode_utf8(w1.raw);
    std::u32string b = decode_utf8(w2.raw);
    if (a.empty()) throw ZeroLengthReference();
    return char_edit_distance(a, b) /
           Rational(static_cast<std::int64_t>(a.size()));
  }
  std::size_t ref_sylls = w1.word->syllable_count();
  if (ref_sylls == 0) throw ZeroLengthReference();
  AlignmentResult syll = detail::align_syllables(
      syllable_slots(w1), syllable_slots(w2), /*hierarchical=*/true);
  return syll.total_cost / Rational(static_cast<std::int64_t>(ref_sylls));
}

enum class AlignMode { Naive, Hierarchical };

// Per aligned word pair: the syllable alignment, and for every aligned
// syllable pair the character alignment over the slot texts (separator
// included, so the character rules can see "-" and "="). Entries in
// `chars` run parallel to `syllables.ops`; unpaired ops carry nullopt.
struct WordPairAlignment {
  AlignmentResult syllables;
  std::vector<std::optional<AlignmentResult>> chars;
};

// Three-level alignment of two tokenized utterances; `details` runs
// parallel to `words.ops` and is populated for Match/Substitute pairs of
// two parseable Mixtec words. This is the structure the fusion rule
// engine consumes.
struct HierarchicalAlignment {
  AlignmentResult words;
  std::vector<std::optional<WordPairAlignment>> details;
};

namespace detail {

inline Rational word_sub_cost_guarded(const Token& a, const Token& b) {
  try {
    return word_sub_cost(a, b);
  } catch (const ZeroLengthReference&) {
    return a.raw == b.raw ? Rational(0) : Rational(1);
  }
}

}  // namespace detail

inline HierarchicalAlignment hierarchical_align(
    const std::vector<Token>& novice, const std::vector<Token>& asr,
    AlignMode mode = AlignMode::Hierarchical) {
  auto unit = [](const Token&) { return Rational(1); };
  AlignmentResult words;
  if (mode == AlignMode::Hierarchical) {
    words = edit_align_generic(novice, asr, unit, unit,
                               detail::word_sub_cost_guarded, AlignLevel::Word);
  } else {
    words = edit_align_generic(
        novice, asr, unit, unit,
        [](const Token& a, const Token& b) {
          return a.raw == b.raw ? Rational(0) : Rational(1);
        },
        AlignLevel::Word);
  }

  HierarchicalAlignment out;
  out.details.resize(words.ops.size());
  for (std::size_t k = 0; k < words.ops.size(); ++k) {
    const EditOp& op = words.ops[k];
    if (op.type != EditOpType::Match && op.type != EditOpType::Substitute) {
      continue;
    }
    const Token& nw = novice[op.i];
    const Token& aw = asr[op.j];
    if (nw.kind != TokenKind::Mixtec || aw.kind != TokenKind::Mixtec) continue;
    WordPairAlignment detail;
    std::vector<SyllableSlot> nslots = syllable_slots(nw);
    std::vector<SyllableSlot> aslots = syllable_slots(aw);
    detail.syllables = detail::align_syllables(
        nslots, aslots, mode == AlignMode::Hierarchical);
    detail.chars.resize(detail.syllables.ops.size());
    for (std::size_t s = 0; s < detail.syllables.ops.size(); ++s) {
      const EditOp& sop = detail.syllables.ops[s];
      if (sop.type == EditOpType::Match ||
          sop.type == EditOpType::Substitute) {
        detail.chars[s] = align_chars(nslots[sop.i].slot_text(),
                                      aslots[sop.j].slot_text());
      }
    }
    out.details[k] = std::move(detail);
  }
  out.words = std::move(words);
  return out;
}

}  // namespace mixfuse

#endif  // MIXFUSE_ALIGNMENT_HPP_
