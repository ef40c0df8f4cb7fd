#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "powellcalc/words.hpp"

using namespace powellcalc;

namespace {

// Independent oracle: repeatedly erase the first cancelling adjacent pair
// until none remains (quadratic fixpoint, no shared code with reduce()).
Word reduce_by_erasure(Word w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.letters.size(); ++i) {
      if (w.letters[i].symbol == w.letters[i + 1].symbol &&
          w.letters[i].exponent == -w.letters[i + 1].exponent) {
        w.letters.erase(w.letters.begin() + i, w.letters.begin() + i + 2);
        changed = true;
        break;
      }
    }
  }
  return w;
}

Word random_word(std::mt19937_64& rng, std::size_t length) {
  Word w;
  for (std::size_t i = 0; i < length; ++i) {
    GeneratorSymbol s;
    switch (rng() % 6) {
      case 0: s = Flip{std::nullopt}; break;
      case 1: s = Flip{static_cast<int>(rng() % 4 + 1)}; break;
      case 2: s = Exchange{static_cast<int>(rng() % 3 + 1)}; break;
      case 3: s = Rotation{}; break;
      case 4: s = Eyeglass{ClassExpr::basis('a', 1), ClassExpr::basis('b', 2)}; break;
      default: s = Rho{static_cast<RhoAxis>(rng() % 4)}; break;
    }
    w.letters.push_back({s, rng() % 2 ? 1 : -1});
  }
  return w;
}

Letter let(GeneratorSymbol s, int e = 1) { return Letter{s, e}; }

}  // namespace

TEST_CASE("reduce cancels adjacent inverse pairs") {
  Word w{{let(Exchange{1}), let(Exchange{2}), let(Exchange{2}, -1), let(Exchange{1})}};
  Word expect{{let(Exchange{1}), let(Exchange{1})}};
  CHECK(reduce(w) == expect);
  CHECK(reduce(w) == reduce_by_erasure(w));
}

TEST_CASE("reduce handles nested cancellation") {
  Word w{{let(Flip{}), let(Exchange{1}), let(Exchange{1}, -1), let(Flip{}, -1)}};
  CHECK(reduce(w).letters.empty());
  CHECK(reduce_by_erasure(w).letters.empty());
}

TEST_CASE("reduce is idempotent and matches the erasure oracle") {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  for (int trial = 0; trial < 200; ++trial) {
    Word w = random_word(rng, rng() % 64);
    Word r = reduce(w);
    CHECK(reduce(r) == r);
    CHECK(r == reduce_by_erasure(w));
  }
  // one long word, as the contract pins behavior up to length 10^4
  Word big = random_word(rng, 10000);
  Word r = reduce(big);
  CHECK(reduce(r) == r);
  CHECK(r == reduce_by_erasure(big));
}

TEST_CASE("distinct flip spellings do not cancel") {
  // w and w1 evaluate identically downstream but are distinct free symbols.
  Word w{{let(Flip{std::nullopt}), let(Flip{1}, -1)}};
  CHECK(reduce(w) == w);
}

TEST_CASE("invert reverses and negates") {
  Word w{{let(Flip{}), let(Exchange{1})}};
  Word expect{{let(Exchange{1}, -1), let(Flip{}, -1)}};
  CHECK(invert(w) == expect);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    Word u = random_word(rng, rng() % 40);
    CHECK(invert(invert(u)) == u);
    CHECK(reduce(concat(u, invert(u))).letters.empty());
  }
}

TEST_CASE("invert of empty word is empty") {
  CHECK(invert(Word{}).letters.empty());
}

TEST_CASE("conjugate wraps and reduces") {
  Word w{{let(Exchange{1})}};
  Word by{{let(Rotation{})}};
  Word expect{{let(Rotation{}), let(Exchange{1}), let(Rotation{}, -1)}};
  CHECK(conjugate(w, by) == expect);

  // conjugating by w itself collapses the wrapper
  Word self{{let(Exchange{1})}};
  CHECK(conjugate(self, self) == self);

  // empty conjugator is the identity operation modulo reduction
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Word u = random_word(rng, rng() % 20);
    CHECK(conjugate(u, Word{}) == reduce(u));
  }
}

TEST_CASE("parse handles the full token alphabet") {
  Word w = parse_word("w w3 x2 e t t(a1+a3,b2) re r0 r1 r2 e^-1");
  REQUIRE(w.letters.size() == 11);
  CHECK(w.letters[0].symbol == GeneratorSymbol{Flip{std::nullopt}});
  CHECK(w.letters[1].symbol == GeneratorSymbol{Flip{3}});
  CHECK(w.letters[2].symbol == GeneratorSymbol{Exchange{2}});
  CHECK(w.letters[3].symbol == GeneratorSymbol{Rotation{}});
  CHECK(w.letters[4].symbol ==
        GeneratorSymbol{Eyeglass{ClassExpr::basis('a', 1), ClassExpr::basis('b', 2)}});
  ClassExpr a1a3;
  a1a3.terms = {{'a', 1}, {'a', 3}};
  CHECK(w.letters[5].symbol == GeneratorSymbol{Eyeglass{a1a3, ClassExpr::basis('b', 2)}});
  CHECK(w.letters[6].symbol == GeneratorSymbol{Rho{RhoAxis::e}});
  CHECK(w.letters[9].symbol == GeneratorSymbol{Rho{RhoAxis::q2}});
  CHECK(w.letters[10].exponent == -1);
}

TEST_CASE("bare t names the standard eyeglass") {
  CHECK(parse_word("t") == parse_word("t(a1,b2)"));
}

TEST_CASE("class expression terms are sorted") {
  CHECK(parse_word("t(a3+a1,b2)") == parse_word("t(a1+a3,b2)"));
}

TEST_CASE("print round-trips reduced words") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    Word w = reduce(random_word(rng, rng() % 32));
    CHECK(parse_word(to_string(w)) == w);
  }
  CHECK(to_string(parse_word("w w3 x2 e t t(a1+a3,b2) re^-1")) ==
        "w w3 x2 e t t(a1+a3,b2) re^-1");
  CHECK(to_string(Word{}) == "");
  CHECK(parse_word("").letters.empty());
  CHECK(parse_word("  \t\n ").letters.empty());
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK_THROWS_AS(parse_word("q"), ParseError);
  try {
    parse_word("w x1 q");
  } catch (const ParseError& e) {
    CHECK(e.offset == 5);
  }
  try {
    parse_word("x0");
  } catch (const ParseError& e) {
    CHECK(e.offset >= 1);
  }
  CHECK_THROWS_AS(parse_word("x"), ParseError);
  CHECK_THROWS_AS(parse_word("w0"), ParseError);
  CHECK_THROWS_AS(parse_word("r"), ParseError);
  CHECK_THROWS_AS(parse_word("r3"), ParseError);
  CHECK_THROWS_AS(parse_word("t(a1,b1"), ParseError);
  CHECK_THROWS_AS(parse_word("t(a1)"), ParseError);
  CHECK_THROWS_AS(parse_word("t(c1,b2)"), ParseError);
  CHECK_THROWS_AS(parse_word("e^2"), ParseError);
  CHECK_THROWS_AS(parse_word("e^"), ParseError);
  CHECK_THROWS_AS(parse_word("x1x2"), ParseError);
}

TEST_CASE("exponents are stored as plus or minus one") {
  for (const Letter& l : parse_word("w x1^-1 e^-1 t").letters)
    CHECK((l.exponent == 1 || l.exponent == -1));
}
