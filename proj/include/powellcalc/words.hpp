#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace powellcalc {

// Formal nonnegative sum of meridian/longitude basis classes, e.g. "a1",
// "b2", "a1+a3".  Terms are kept sorted ('a' before 'b', then by index) and
// repeats encode multiplicity, so equal sums compare equal.
struct ClassExpr {
  std::vector<std::pair<char, int>> terms;

  static ClassExpr basis(char side, int index);
  void normalize();
  bool operator==(const ClassExpr&) const = default;
};

// Generator alphabet.  A word is a free product of these symbols; no group
// relation is applied by this module.
struct Flip {
  // Half rotation of one bubble.  No slot means the standard flip, which
  // acts on slot 1; an explicit slot i >= 1 is the conjugated flip at slot i.
  std::optional<int> slot;
  bool operator==(const Flip&) const = default;
};

struct Exchange {
  // Swaps the bubbles in slots index and index+1 (1-based).
  int index = 1;
  bool operator==(const Exchange&) const = default;
};

struct Rotation {
  // Cyclic shift moving every bubble one slot up.
  bool operator==(const Rotation&) const = default;
};

struct Eyeglass {
  // Twist along an eyeglass keyed by its two lens classes.  The bare token
  // "t" abbreviates Eyeglass(a1, b2).
  ClassExpr lens_a;
  ClassExpr lens_b;
  bool operator==(const Eyeglass&) const = default;
};

enum class RhoAxis { e, q0, q1, q2 };

struct Rho {
  // Rotation generators of the sphere-pair symmetry group.
  RhoAxis axis = RhoAxis::e;
  bool operator==(const Rho&) const = default;
};

using GeneratorSymbol = std::variant<Flip, Exchange, Rotation, Eyeglass, Rho>;

struct Letter {
  GeneratorSymbol symbol;
  int exponent = 1;  // +1 or -1
  bool operator==(const Letter&) const = default;
};

struct Word {
  std::vector<Letter> letters;
  bool operator==(const Word&) const = default;
};

struct ParseError : std::runtime_error {
  std::size_t offset;  // byte offset into the input text
  ParseError(const std::string& message, std::size_t offset_);
};

// Free reduction: repeatedly cancel adjacent letters with equal symbol and
// opposite exponent.  Idempotent.
Word reduce(const Word& w);

// Reversed letter order with negated exponents.
Word invert(const Word& w);

Word concat(const Word& u, const Word& v);

// reduce(by . w . by^-1).
Word conjugate(const Word& w, const Word& by);

// Token grammar (whitespace separated): w, w<i>, x<i>, e, t,
// t(<classexpr>,<classexpr>), re, r0, r1, r2; a token may carry the suffix
// ^-1.  Class expressions are a<i>, b<i> and +-sums such as a1+a3.
Word parse_word(std::string_view text);

// Parses a bare class expression such as "a1" or "a1+b3"; the whole input
// must be consumed apart from surrounding whitespace.
ClassExpr parse_class_expr(std::string_view text);

std::string to_string(const ClassExpr& c);
std::string to_string(const GeneratorSymbol& s);
std::string to_string(const Word& w);

}  // namespace powellcalc
