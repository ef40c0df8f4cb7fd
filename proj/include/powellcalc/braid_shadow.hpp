#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <string>
#include <vector>

#include "powellcalc/words.hpp"

namespace powellcalc {

using Rational = boost::multiprecision::cpp_rational;

// Action of a word on the g bubbles: a permutation of slots together with the
// number of full turns each bubble accumulates.  Slots are 0-based here;
// perm[s] is the destination slot of the occupant starting in slot s, and
// framing[s] is indexed by starting slot as well.
struct FramedPermutation {
  std::vector<std::size_t> perm;
  std::vector<Rational> framing;

  static FramedPermutation identity(std::size_t genus);
  std::size_t genus() const { return perm.size(); }
  bool operator==(const FramedPermutation&) const = default;
};

// Group law matching right-to-left word evaluation: `second` acts first.
FramedPermutation compose(const FramedPermutation& first,
                          const FramedPermutation& second);
FramedPermutation inverse(const FramedPermutation& x);

// Slot action only (framing discarded).  Throws std::invalid_argument on pole
// symbols or on indices out of range for the genus.
std::vector<std::size_t> perm_of_word(std::size_t genus, const Word& w);
FramedPermutation framed_of_word(std::size_t genus, const Word& w);

// Every bubble makes one complete turn while no slot moves.
FramedPermutation central_framing(std::size_t genus);

Rational total_framing(const FramedPermutation& x);

struct CheckReport {
  bool pass = false;
  std::string witness;  // empty when the check passes
};

// Rotation against the exchange chain: equal slot action at the given genus,
// and equal framed action once the two compensating half-turn flips are
// prepended to the chain.
CheckReport verify_newgen(std::size_t genus);

// 1-based disjoint-cycle notation; "()" for the identity.
std::string cycle_string(const std::vector<std::size_t>& perm);
std::string to_string(const FramedPermutation& x);

}  // namespace powellcalc
