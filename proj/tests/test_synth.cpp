#include <doctest.h>

#include <random>
#include <string>

#include "mixfuse/metrics.hpp"
#include "mixfuse/synth.hpp"

using namespace mixfuse;

namespace {
const Grammar& g() {
  static Grammar grammar = Grammar::yoloxochitl_mixtec();
  return grammar;
}
}  // namespace

TEST_CASE("synthetic corpus is strict-parseable and deterministic") {
  SynthConfig cfg;
  cfg.utterances = 80;
  cfg.seed = 5;
  UtteranceTable t1 = make_reference_corpus(cfg, g());
  UtteranceTable t2 = make_reference_corpus(cfg, g());
  CHECK(t1.entries == t2.entries);
  REQUIRE(t1.size() == 80);

  int mixtec_words = 0;
  int elided = 0;
  int glottal = 0;
  int prefixes = 0;
  for (const auto& [id, text] : t1.entries) {
    for (const std::string& w : split_words(text)) {
      Token tok;
      CHECK_NOTHROW(tok = parse_token(w, ParseMode::Strict, g()));
      if (tok.kind == TokenKind::Mixtec) ++mixtec_words;
      if (w.find('(') != std::string::npos) ++elided;
      if (w.find('\'') != std::string::npos) ++glottal;
      if (w.find('-') != std::string::npos) ++prefixes;
    }
  }
  // The generator covers the phenomena the rules and metrics care about.
  CHECK(mixtec_words > 200);
  CHECK(elided > 20);
  CHECK(glottal > 20);
  CHECK(prefixes > 20);
}

TEST_CASE("profile injection lands near the requested rate") {
  SynthConfig cfg;
  cfg.utterances = 150;
  cfg.seed = 9;
  UtteranceTable ref = make_reference_corpus(cfg, g());

  CategoryProfile mix;
  mix.weights = {96, 141, 341, 1607, 4144, 0, 4263};
  UtteranceTable noisy =
      inject_profile(ref, mix, 6.0, 1234, g(), ParenInjection::Pair);

  auto c = cer(ref, noisy, g());
  double rate = c.rate_percent();
  CHECK(rate > 4.0);
  CHECK(rate < 8.0);

  // Tone should dominate the injected error mass, as the profile says.
  auto cats = classify_errors(ref, noisy, g());
  CHECK(cats[ErrorCategory::Tone] > cats[ErrorCategory::GlottalStop]);
  CHECK(cats[ErrorCategory::Parenthesis] > 0);
  CHECK(cats[ErrorCategory::StemNasal] == 0);
}

TEST_CASE("inject_category_errors is seed-deterministic") {
  std::string text = "ni1-xi3xi(3)=2 be'3e3=an4 ka3ni3";
  std::mt19937 r1(42);
  std::mt19937 r2(42);
  auto a = inject_category_errors(text, ErrorCategory::Tone, 2, r1, g());
  auto b = inject_category_errors(text, ErrorCategory::Tone, 2, r2, g());
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(a.second == 2);
  CHECK(a.first != text);
}
