#include "powellcalc/dihedral.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace powellcalc {

DihElement dih_compose(const DihElement& x, const DihElement& y) {
  DihElement z;
  z.pole_swap = x.pole_swap != y.pole_swap;
  for (int i = 0; i < 3; ++i) z.perm[i] = x.perm[y.perm[i]];
  return z;
}

DihElement dih_inverse(const DihElement& x) {
  DihElement z;
  z.pole_swap = x.pole_swap;
  for (int i = 0; i < 3; ++i) z.perm[x.perm[i]] = static_cast<std::uint8_t>(i);
  return z;
}

DihElement dih_rho(RhoAxis axis) {
  switch (axis) {
    case RhoAxis::e: return DihElement{true, {0, 1, 2}};
    case RhoAxis::q0: return DihElement{false, {0, 2, 1}};
    case RhoAxis::q1: return DihElement{false, {2, 1, 0}};
    default: return DihElement{false, {1, 0, 2}};
  }
}

std::vector<DihElement> dih_closure(const std::vector<DihElement>& gens) {
  std::set<DihElement> seen{dih_identity};
  std::vector<DihElement> frontier{dih_identity};
  while (!frontier.empty()) {
    std::vector<DihElement> next;
    for (const DihElement& x : frontier) {
      for (const DihElement& g : gens) {
        DihElement y = dih_compose(x, g);
        if (seen.insert(y).second) next.push_back(y);
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

DihElement eval_dih(const Word& w) {
  DihElement acc = dih_identity;
  for (const Letter& l : w.letters) {
    const Rho* r = std::get_if<Rho>(&l.symbol);
    if (!r)
      throw std::invalid_argument(
          "eval_dih: word contains a genus-indexed symbol: " + to_string(l.symbol));
    DihElement img = dih_rho(r->axis);
    if (l.exponent == -1) img = dih_inverse(img);
    acc = dih_compose(acc, img);
  }
  return acc;
}

DihElement parse_dih(std::string_view text) {
  if (text.empty() || (text[0] != '+' && text[0] != '-'))
    throw ParseError("malformed sign: expected '+' or '-'", 0);
  DihElement x;
  x.pole_swap = text[0] == '-';
  if (text.size() < 2 || text[1] != '(')
    throw ParseError("expected '(' after sign", 1);
  std::size_t pos = 2;
  std::vector<int> cycle;
  bool used[3] = {false, false, false};
  while (pos < text.size() && text[pos] != ')') {
    char c = text[pos];
    if (c < '0' || c > '2') throw ParseError("invalid digit: marked points are 0..2", pos);
    int p = c - '0';
    if (used[p]) throw ParseError("non-cycle: repeated digit", pos);
    used[p] = true;
    cycle.push_back(p);
    ++pos;
  }
  if (pos >= text.size()) throw ParseError("expected ')'", pos);
  ++pos;
  if (pos != text.size()) throw ParseError("trailing characters after element", pos);
  for (std::size_t i = 0; i < cycle.size(); ++i)
    x.perm[cycle[i]] = static_cast<std::uint8_t>(cycle[(i + 1) % cycle.size()]);
  return x;
}

std::string to_string(const DihElement& x) {
  std::string out;
  out += x.pole_swap ? '-' : '+';
  out += '(';
  // start the cycle at the smallest moved point; identity prints as ()
  for (int start = 0; start < 3; ++start) {
    if (x.perm[start] != start) {
      int p = start;
      do {
        out += static_cast<char>('0' + p);
        p = x.perm[p];
      } while (p != start);
      break;
    }
  }
  out += ')';
  return out;
}

bool meridian_orthogonal(int i, int j) {
  if (i < 0 || i > 2 || j < 0 || j > 2)
    throw std::invalid_argument("meridian_orthogonal: labels range over 0..2");
  return i != j;
}

}  // namespace powellcalc
