// mixfuse/synth.hpp
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
// Synthetic data: grammar-valid reference corpora and controlled error
// injection for testing the scorer and the fusion pipeline.

#ifndef MIXFUSE_SYNTH_HPP_
#define MIXFUSE_SYNTH_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mixfuse/corpus_io.hpp"
#include "mixfuse/grammar.hpp"
#include "mixfuse/metrics.hpp"
#include "mixfuse/orthography.hpp"
#include "mixfuse/textutil.hpp"

namespace mixfuse {

struct SynthConfig {
  int utterances = 500;
  int min_words = 3;
  int max_words = 9;
  double code_switch_prob = 0.07;
  std::uint32_t seed = 0;
};

namespace synth_detail {

template <class Rng>
char32_t pick(const std::vector<char32_t>& v, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
  return v[d(rng)];
}

template <class Rng>
inline std::u32string random_syllable(const Grammar& g, Rng& rng,
                                      bool allow_elided) {
  std::vector<char32_t> vowels(g.vowels.begin(), g.vowels.end());
  std::vector<char32_t> tones(g.tone_digits.begin(), g.tone_digits.end());

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::u32string out;

  // Onset: single consonant or multigraph, occasionally none.
  if (coin(rng) > 0.15) {
    if (!g.multigraphs.empty() && coin(rng) < 0.2) {
      std::uniform_int_distribution<std::size_t> d(0, g.multigraphs.size() - 1);
      out += g.multigraphs[d(rng)];
    } else {
      std::vector<char32_t> cons(g.consonants.begin(), g.consonants.end());
      out.push_back(pick(cons, rng));
    }
  }

  int moras = coin(rng) < 0.45 ? 2 : 1;
  for (int m = 0; m < moras; ++m) {
    out.push_back(pick(vowels, rng));
    if (m == 0 && moras == 2 && coin(rng) < 0.3) out.push_back(g.glottal);
    bool last = m == moras - 1;
    if (last && coin(rng) < 0.25 && g.is_consonant(U'n')) out.push_back(U'n');
    bool elide = allow_elided && last && coin(rng) < 0.5;
    int digits = coin(rng) < 0.15 ? 2 : 1;
    if (elide) out.push_back(g.open_paren);
    for (int d = 0; d < digits; ++d) out.push_back(pick(tones, rng));
    if (elide) out.push_back(g.close_paren);
  }
  return out;
}

template <class Rng>
inline std::string random_word(const Grammar& g, Rng& rng,
                               double code_switch_prob) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < code_switch_prob) {
    static const char* kLoans[] = {"tucena", "enero",  "lunes", "kilo",
                                   "metro",  "burro",  "peso",  "lima",
                                   "martes", "semana", "vaso",  "litro"};
    std::uniform_int_distribution<std::size_t> d(
        0, sizeof(kLoans) / sizeof(kLoans[0]) - 1);
    return kLoans[d(rng)];
  }

  std::u32string out;
  bool has_enclitic = coin(rng) < 0.35;
  if (coin(rng) < 0.2) {  // prefix morph
    out += random_syllable(g, rng, false);
    out.push_back(g.prefix_separator);
  }
  int stem_sylls = coin(rng) < 0.6 ? 1 : 2;
  for (int s = 0; s < stem_sylls; ++s) {
    // Tone elision only on the stem-final syllable and only before an
    // enclitic, the context that licenses it.
    bool final_syll = s == stem_sylls - 1;
    out += random_syllable(g, rng, has_enclitic && final_syll);
  }
  if (has_enclitic) {
    out.push_back(g.enclitic_separator);
    std::vector<char32_t> tones(g.tone_digits.begin(), g.tone_digits.end());
    if (coin(rng) < 0.4) {
      out.push_back(pick(tones, rng));  // tone-only enclitic
    } else {
      out += random_syllable(g, rng, false);
    }
  }
  return encode_utf8(out);
}

}  // namespace synth_detail

// A strict-parseable reference corpus drawn from the grammar.
inline UtteranceTable make_reference_corpus(const SynthConfig& cfg,
                                            const Grammar& g) {
  std::mt19937 rng(cfg.seed);
  std::uniform_int_distribution<int> words(cfg.min_words, cfg.max_words);
  UtteranceTable table;
  for (int u = 0; u < cfg.utterances; ++u) {
    int n = words(rng);
    std::vector<std::string> ws;
    ws.reserve(n);
    for (int w = 0; w < n; ++w) {
      ws.push_back(synth_detail::random_word(g, rng, cfg.code_switch_prob));
    }
    char id[32];
    std::snprintf(id, sizeof(id), "utt%04d", u);
    table.entries[id] = join_words(ws);
  }
  return table;
}

// ---- Error injection ----------------------------------------------------

// How parenthesis errors are injected: single characters (each one error,
// what the exact-count contract wants) or whole pairs (the novice writes
// the tone bare; two errors per site).
enum class ParenInjection { SingleChar, Pair };

namespace synth_detail {

struct Site {
  std::size_t word;  // token index
  std::size_t pos;   // codepoint index inside the token
  std::size_t pos2 = SIZE_MAX;  // paired position (paren pairs)
};

// Candidate edit sites for one category over tokenized text.
inline std::vector<Site> collect_sites(const std::vector<std::u32string>& toks,
                                       ErrorCategory cat, const Grammar& g,
                                       ParenInjection paren_mode) {
  std::vector<Site> sites;
  for (std::size_t w = 0; w < toks.size(); ++w) {
    const std::u32string& t = toks[w];
    switch (cat) {
      case ErrorCategory::Enclitics:
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (t[i] == g.enclitic_separator) sites.push_back({w, i});
        }
        break;
      case ErrorCategory::Prefixes:
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (t[i] == g.prefix_separator) sites.push_back({w, i});
        }
        break;
      case ErrorCategory::GlottalStop:
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (t[i] == g.glottal) sites.push_back({w, i});
        }
        break;
      case ErrorCategory::Parenthesis:
        if (paren_mode == ParenInjection::SingleChar) {
          for (std::size_t i = 0; i < t.size(); ++i) {
            if (g.is_paren(t[i])) sites.push_back({w, i});
          }
        } else {
          for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] != g.open_paren) continue;
            std::size_t j = i + 1;
            while (j < t.size() && t[j] != g.close_paren) ++j;
            if (j < t.size()) sites.push_back({w, i, j});
          }
        }
        break;
      case ErrorCategory::Tone:
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (g.is_tone(t[i])) sites.push_back({w, i});
        }
        break;
      case ErrorCategory::StemNasal: {
        // Coda "n" in a token with no other "n": deletion then cannot be
        // re-read as an onset-n edit by the aligner.
        std::size_t n_count = 0;
        for (char32_t c : t) {
          if (c == U'n') ++n_count;
        }
        if (n_count != 1) break;
        Token tok;
        try {
          tok = parse_token(encode_utf8(t), ParseMode::Lenient, g);
        } catch (const std::exception&) {
          break;
        }
        if (tok.kind != TokenKind::Mixtec) break;
        std::size_t pos = 0;
        for (const Morph& m : tok.word->morphs) {
          pos += m.separator.size();
          for (const Syllable& s : m.syllables) {
            if (!s.clean() || !s.bare_tones.empty()) {
              pos += s.text.size();
              continue;
            }
            std::size_t p = pos + s.onset.size();
            for (const Mora& mora : s.moras) {
              ++p;  // vowel
              if (mora.glottal_after) ++p;
              if (mora.nasal_coda) sites.push_back({w, p});
              if (mora.nasal_coda) ++p;
              p += mora.tones.size() + (mora.elided ? 2 : 0);
            }
            pos += s.text.size();
          }
        }
        break;
      }
      case ErrorCategory::Others:
        for (std::size_t i = 0; i < t.size(); ++i) {
          if ((g.is_vowel(t[i]) || g.is_consonant(t[i])) && t[i] != U'n') {
            sites.push_back({w, i});
          }
        }
        break;
    }
  }
  return sites;
}

template <class Rng>
inline char32_t different_pick(const std::vector<char32_t>& pool,
                               char32_t current, Rng& rng) {
  if (pool.size() < 2) return current;
  std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
  char32_t c = current;
  while (c == current) c = pool[d(rng)];
  return c;
}

}  // namespace synth_detail

// Injects up to k errors of one category into an utterance; returns the
// corrupted text and the number of classified errors actually injected
// (a paren pair counts 2). Sites are chosen without replacement.
template <class Rng>
inline std::pair<std::string, int> inject_category_errors(
    const std::string& utt_text, ErrorCategory cat, int k, Rng& rng,
    const Grammar& g,
    ParenInjection paren_mode = ParenInjection::SingleChar) {
  std::vector<std::u32string> toks;
  for (const std::string& w : split_words(utt_text)) {
    toks.push_back(decode_utf8(w));
  }
  std::vector<synth_detail::Site> sites =
      synth_detail::collect_sites(toks, cat, g, paren_mode);
  std::shuffle(sites.begin(), sites.end(), rng);

  std::vector<char32_t> vowels(g.vowels.begin(), g.vowels.end());
  std::vector<char32_t> consonants(g.consonants.begin(), g.consonants.end());
  std::vector<char32_t> tones(g.tone_digits.begin(), g.tone_digits.end());

  // StemNasal keeps one edit per token (the site collector already
  // restricts to unique-n tokens); other categories may edit several
  // distinct positions of a token, sub/del edits of one category cannot
  // change each other's class.
  std::vector<bool> token_used(toks.size(), false);
  struct Edit {
    std::size_t word;
    std::size_t pos;
    std::size_t pos2;
    char32_t replacement;  // 0 = delete
  };
  std::vector<Edit> edits;
  int injected = 0;
  for (const synth_detail::Site& s : sites) {
    if (injected >= k) break;
    if (cat == ErrorCategory::StemNasal && token_used[s.word]) continue;
    bool pair = s.pos2 != SIZE_MAX;
    if (pair && injected + 2 > k) continue;
    char32_t replacement = 0;
    if (cat == ErrorCategory::Tone) {
      replacement =
          synth_detail::different_pick(tones, toks[s.word][s.pos], rng);
      if (replacement == toks[s.word][s.pos]) continue;
    } else if (cat == ErrorCategory::Others) {
      char32_t cur = toks[s.word][s.pos];
      const std::vector<char32_t>& pool =
          g.is_vowel(cur) ? vowels : consonants;
      replacement = synth_detail::different_pick(pool, cur, rng);
      if (replacement == cur || replacement == U'n') continue;
    }
    token_used[s.word] = true;
    edits.push_back({s.word, s.pos, s.pos2, replacement});
    injected += pair ? 2 : 1;
  }

  // Apply right to left inside each token so positions stay valid.
  std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    return a.word != b.word ? a.word < b.word : a.pos > b.pos;
  });
  for (const Edit& e : edits) {
    std::u32string& t = toks[e.word];
    if (e.pos2 != SIZE_MAX) {
      t.erase(e.pos2, 1);  // close paren first
      t.erase(e.pos, 1);
    } else if (e.replacement == 0) {
      t.erase(e.pos, 1);
    } else {
      t[e.pos] = e.replacement;
    }
  }

  std::vector<std::string> out;
  out.reserve(toks.size());
  for (const auto& t : toks) {
    if (!t.empty()) out.push_back(encode_utf8(t));
  }
  return {join_words(out), injected};
}

// Error mix by category, in the fixed category order.
struct CategoryProfile {
  std::array<std::int64_t, kCategoryCount> weights{};

  std::int64_t total() const {
    std::int64_t t = 0;
    for (auto w : weights) t += w;
    return t;
  }
};

// Corrupts a whole reference corpus at roughly `target_cer_percent`, with
// errors split across categories in proportion to the profile.
inline UtteranceTable inject_profile(const UtteranceTable& ref,
                                     const CategoryProfile& profile,
                                     double target_cer_percent,
                                     std::uint32_t seed, const Grammar& g,
                                     ParenInjection paren_mode) {
  std::mt19937 rng(seed);
  std::int64_t ref_chars = 0;
  for (const auto& [id, text] : ref.entries) {
    ref_chars += static_cast<std::int64_t>(
        mixfuse::detail::char_stream(text, g).chars.size());
  }
  double budget = target_cer_percent / 100.0 * static_cast<double>(ref_chars);
  std::int64_t weight_total = profile.total();
  if (weight_total == 0) return ref;

  std::vector<std::string> ids;
  for (const auto& [id, text] : ref.entries) ids.push_back(id);

  UtteranceTable out = ref;
  for (std::size_t c = 0; c < kCategoryCount; ++c) {
    auto cat = static_cast<ErrorCategory>(c);
    auto want = static_cast<std::int64_t>(
        budget * static_cast<double>(profile.weights[c]) /
        static_cast<double>(weight_total));
    std::int64_t done = 0;
    bool progress = true;
    while (done < want && progress) {
      progress = false;
      std::shuffle(ids.begin(), ids.end(), rng);
      for (const std::string& id : ids) {
        if (done >= want) break;
        int ask = static_cast<int>(std::min<std::int64_t>(want - done, 3));
        auto [text, n] =
            inject_category_errors(out.entries[id], cat, ask, rng, g,
                                   cat == ErrorCategory::Parenthesis
                                       ? paren_mode
                                       : ParenInjection::SingleChar);
        if (n > 0) {
          out.entries[id] = text;
          done += n;
          progress = true;
        }
      }
    }
  }
  return out;
}

}  // namespace mixfuse

#endif  // MIXFUSE_SYNTH_HPP_
