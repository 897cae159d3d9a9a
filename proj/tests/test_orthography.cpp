#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "mixfuse/orthography.hpp"

using namespace mixfuse;

namespace {
const Grammar& g() {
  static Grammar grammar = Grammar::yoloxochitl_mixtec();
  return grammar;
}

Token lenient(const std::string& s) {
  return parse_token(s, ParseMode::Lenient, g());
}
}  // namespace

TEST_CASE("code-switch detection is purely character-class based") {
  CHECK(lenient("tucena").kind == TokenKind::CodeSwitch);
  CHECK(lenient("enero").kind == TokenKind::CodeSwitch);
  CHECK(lenient("día").kind == TokenKind::CodeSwitch);  // opaque passthrough
  CHECK(lenient("pa3san4tu2").kind == TokenKind::Mixtec);
  CHECK(lenient("ka3").kind == TokenKind::Mixtec);
  CHECK(lenient("be'e").kind == TokenKind::Mixtec);  // glottal marks Mixtec
  CHECK(lenient("ni1-xi3xi").kind == TokenKind::Mixtec);
}

TEST_CASE("parse be'3e3=an4") {
  Token t = parse_token("be'3e3=an4", ParseMode::Strict, g());
  REQUIRE(t.kind == TokenKind::Mixtec);
  REQUIRE(t.word->morphs.size() == 2);

  const Morph& stem = t.word->morphs[0];
  CHECK(stem.role == Morph::Role::Stem);
  REQUIRE(stem.syllables.size() == 1);  // CV'V is one syllable, two moras
  const Syllable& s = stem.syllables[0];
  CHECK(s.onset == U"b");
  REQUIRE(s.moras.size() == 2);
  CHECK(s.moras[0].vowel == U'e');
  CHECK(s.moras[0].glottal_after);
  CHECK(s.moras[0].tones == U"3");
  CHECK(s.moras[1].vowel == U'e');
  CHECK_FALSE(s.moras[1].glottal_after);
  CHECK(s.moras[1].tones == U"3");
  CHECK(s.shape() == SyllableShape::CVGlottalV);

  const Morph& encl = t.word->morphs[1];
  CHECK(encl.role == Morph::Role::Enclitic);
  CHECK(encl.separator == U"=");
  REQUIRE(encl.syllables.size() == 1);
  REQUIRE(encl.syllables[0].moras.size() == 1);
  CHECK(encl.syllables[0].moras[0].vowel == U'a');
  CHECK(encl.syllables[0].moras[0].nasal_coda);
  CHECK(encl.syllables[0].moras[0].tones == U"4");
}

TEST_CASE("parse ni1-xi3xi(3)=2") {
  Token t = parse_token("ni1-xi3xi(3)=2", ParseMode::Strict, g());
  REQUIRE(t.word->morphs.size() == 3);
  CHECK(t.word->morphs[0].role == Morph::Role::Prefix);
  CHECK(t.word->morphs[0].syllables.size() == 1);
  CHECK(t.word->morphs[1].role == Morph::Role::Stem);
  CHECK(t.word->morphs[1].separator == U"-");
  REQUIRE(t.word->morphs[1].syllables.size() == 2);
  CHECK(t.word->morphs[1].syllables[1].moras[0].elided);
  CHECK(t.word->morphs[1].syllables[1].moras[0].tones == U"3");
  CHECK(t.word->morphs[2].role == Morph::Role::Enclitic);
  CHECK(t.word->morphs[2].tone_only);
  CHECK_FALSE(t.has_anomaly());
}

TEST_CASE("syllabify fixtures") {
  auto sylls = [&](const char32_t* s) { return syllabify(s, g()); };

  SUBCASE("ka4 is a single CV syllable") {
    auto v = sylls(U"ka4");
    REQUIRE(v.size() == 1);
    CHECK(v[0].text == U"ka4");
    CHECK(v[0].shape() == SyllableShape::CV);
  }
  SUBCASE("be'3e3 is one CV'V syllable with two moras") {
    auto v = sylls(U"be'3e3");
    REQUIRE(v.size() == 1);
    CHECK(v[0].shape() == SyllableShape::CVGlottalV);
    CHECK(v[0].moras.size() == 2);
  }
  SUBCASE("tone-initial novice error splits off a bare syllable") {
    auto v = sylls(U"3ba4");
    REQUIRE(v.size() == 2);
    CHECK(v[0].text == U"3");
    CHECK(v[0].anomalies.count(Anomaly::ToneInitial) == 1);
    CHECK(v[1].text == U"ba4");
    CHECK(v[1].clean());
  }
  SUBCASE("tone after onset consonant stays in one flagged syllable") {
    auto v = sylls(U"k3a");
    REQUIRE(v.size() == 1);
    CHECK(v[0].text == U"k3a");
    CHECK(v[0].anomalies.count(Anomaly::ToneAfterConsonant) == 1);
  }
  SUBCASE("pa3san4tu2 has three clean syllables") {
    auto v = sylls(U"pa3san4tu2");
    REQUIRE(v.size() == 3);
    CHECK(v[0].text == U"pa3");
    CHECK(v[1].text == U"san4");
    CHECK(v[2].text == U"tu2");
    for (const auto& s : v) CHECK(s.clean());
  }
  SUBCASE("third tone digit spills into a flagged bare syllable") {
    auto v = sylls(U"ka341");
    REQUIRE(v.size() == 2);
    CHECK(v[0].text == U"ka34");
    CHECK(v[1].anomalies.count(Anomaly::ToneInitial) == 1);
  }
}

TEST_CASE("nasal coda disambiguation") {
  SUBCASE("an4: n before a tone digit is a coda") {
    auto v = syllabify(U"an4", g());
    REQUIRE(v.size() == 1);
    REQUIRE(v[0].moras.size() == 1);
    CHECK(v[0].moras[0].nasal_coda);
  }
  SUBCASE("na4ma3: n before a vowel begins the next onset") {
    auto v = syllabify(U"na4ma3", g());
    REQUIRE(v.size() == 2);
    CHECK(v[0].onset == U"n");
    CHECK(v[1].onset == U"m");
  }
  SUBCASE("anda4: n before a consonant is a coda") {
    auto v = syllabify(U"anda4", g());
    REQUIRE(v.size() == 2);
    CHECK(v[0].text == U"an");
    CHECK(v[0].moras[0].nasal_coda);
    CHECK(v[1].text == U"da4");
  }
  SUBCASE("ka3ndi4: n after tone digits joins the nd onset") {
    auto v = syllabify(U"ka3ndi4", g());
    REQUIRE(v.size() == 2);
    CHECK(v[1].onset == U"nd");
  }
}

TEST_CASE("shape_of fixtures") {
  Syllable cv;
  cv.onset = U"b";
  cv.moras.push_back({U'e', false, false, U"", false});
  CHECK(cv.shape() == SyllableShape::CV);

  Syllable cvgv;
  cvgv.onset = U"b";
  cvgv.moras.push_back({U'e', true, false, U"3", false});
  cvgv.moras.push_back({U'e', false, false, U"3", false});
  CHECK(cvgv.shape() == SyllableShape::CVGlottalV);

  Syllable cvv;  // empty onset still counts
  cvv.moras.push_back({U'a', false, false, U"", false});
  cvv.moras.push_back({U'a', false, false, U"", false});
  CHECK(cvv.shape() == SyllableShape::CVV);

  Syllable anomalous;
  anomalous.anomalies.insert(Anomaly::ToneInitial);
  CHECK(anomalous.shape() == SyllableShape::Other);
}

TEST_CASE("render is the exact inverse of lenient parsing") {
  for (const char* s :
       {"be'3e(3)=2", "tucena", "ni1-xi3xi(3)=2", "pa3san4tu2", "3ba4", "k3a",
        "a--b", "ka3(4)", "(3)a", "ka341", "-ka3", "an4", "ji'4in(4)=2",
        "ka'4an2=on4", "=2", "ab-", "x)3'n((b4"}) {
    CAPTURE(s);
    CHECK(render(lenient(s), g()) == s);
  }
}

TEST_CASE("strip_elided") {
  CHECK(strip_elided(lenient("be'3e(3)=2"), g()) == "be'3e2");
  CHECK(strip_elided(lenient("ka4"), g()) == "ka4");
  // Nasalization is not applied; only elision parens and separators go.
  CHECK(strip_elided(lenient("ni1-xi3xi(3)=2"), g()) == "ni1xi3xi2");
  CHECK(strip_elided(lenient("tucena"), g()) == "tucena");
}

TEST_CASE("strict mode rejects every anomaly") {
  auto code = [&](const std::string& s) {
    try {
      parse_token(s, ParseMode::Strict, g());
    } catch (const ParseError& e) {
      return e.code;
    }
    FAIL("expected ParseError for ", s);
    return ParseErrorCode::IllegalCharacter;
  };
  CHECK(code("3ba4") == ParseErrorCode::StrayTone);
  CHECK(code("k3a") == ParseErrorCode::StrayTone);
  CHECK(code("ka(3") == ParseErrorCode::MalformedParentheses);
  CHECK(code("ka()3") == ParseErrorCode::MalformedParentheses);
  CHECK(code("ka(341)") == ParseErrorCode::MalformedParentheses);
  CHECK(code("café3") == ParseErrorCode::IllegalCharacter);
  CHECK(code("a--b") == ParseErrorCode::MalformedWord);
  CHECK(code("a=b-c") == ParseErrorCode::MalformedWord);
  CHECK(code("=2") == ParseErrorCode::MalformedWord);  // enclitic, no stem
  CHECK(code("ka3q") == ParseErrorCode::IllegalCharacter);
}

TEST_CASE("strict mode accepts expert forms") {
  for (const char* s : {"be'3e3=an4", "ni1-xi3xi(3)=2", "pa3san4tu2", "tan3",
                        "ji'4in(4)=2", "ka'4an2=on4", "ndi4", "ba'1a1=2",
                        "sa3kan4", "be'3e(3)=2"}) {
    CAPTURE(s);
    CHECK_NOTHROW(parse_token(s, ParseMode::Strict, g()));
  }
}

TEST_CASE("lenient parse rejects only out-of-alphabet characters") {
  CHECK_THROWS_AS(lenient("ka3."), ParseError);
  CHECK_THROWS_AS(lenient("ka3 "), std::invalid_argument);  // whitespace
  CHECK_NOTHROW(lenient("((("));
  CHECK_NOTHROW(lenient("----"));
}

TEST_CASE("strict acceptance implies zero anomalies") {
  std::mt19937 rng(7);
  auto alphabet = g().alphabet();
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(1, 10);
  int strict_ok = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    std::u32string s;
    int n = len(rng);
    for (int k = 0; k < n; ++k) s.push_back(alphabet[pick(rng)]);
    std::string raw = encode_utf8(s);
    Token t = lenient(raw);
    bool strict_accepts;
    try {
      parse_token(raw, ParseMode::Strict, g());
      strict_accepts = true;
      ++strict_ok;
    } catch (const ParseError&) {
      strict_accepts = false;
    }
    CAPTURE(raw);
    CHECK(strict_accepts == !t.has_anomaly());
    // Lossless round trip for everything over the alphabet.
    CHECK(render(t, g()) == raw);
  }
  CHECK(strict_ok > 0);  // the generator does hit valid forms
}
