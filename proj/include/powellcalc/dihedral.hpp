#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "powellcalc/words.hpp"

namespace powellcalc {

// Element of the order-12 symmetry group of the three-bubble sphere pair,
// written as a signed permutation of the marked points {0,1,2}.  The sign
// records whether the two poles are swapped: '-' means swapped.
struct DihElement {
  bool pole_swap = false;
  std::array<std::uint8_t, 3> perm{0, 1, 2};  // one-line notation

  bool operator==(const DihElement&) const = default;
  // Canonical order: sign first ('+' before '-'), then one-line notation.
  bool operator<(const DihElement& o) const {
    if (pole_swap != o.pole_swap) return !pole_swap;
    return perm < o.perm;
  }
};

inline constexpr DihElement dih_identity{};

// x then-apply-after y: (compose(x,y))(p) = x(y(p)).
DihElement dih_compose(const DihElement& x, const DihElement& y);
DihElement dih_inverse(const DihElement& x);

// Images of the four rho generators: re swaps the poles and fixes the marked
// points; r<i> fixes the poles and transposes the two marked points != i.
DihElement dih_rho(RhoAxis axis);

// Smallest subset containing the generators and the identity, closed under
// composition and inverse.  Returned in canonical sorted order.
std::vector<DihElement> dih_closure(const std::vector<DihElement>& gens);

// Evaluates a word whose letters are all Rho symbols.  Throws
// std::invalid_argument on any genus-indexed symbol.
DihElement eval_dih(const Word& w);

// Element syntax: sign, then one cycle in parentheses, e.g. "+(021)", "-()",
// "-(12)".  Every nonidentity element of S3 is a single cycle.
DihElement parse_dih(std::string_view text);
std::string to_string(const DihElement& x);

// Whether labeled A-meridian i and labeled B-meridian j cross in a single
// point (an orthogonal pair).  a_i is disjoint from b_i and orthogonal to the
// other two.  Indices range over 0..2.
bool meridian_orthogonal(int i, int j);

}  // namespace powellcalc
