#include "powellcalc/braid_shadow.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace powellcalc {

FramedPermutation FramedPermutation::identity(std::size_t genus) {
  FramedPermutation f;
  f.perm.resize(genus);
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  f.framing.assign(genus, Rational(0));
  return f;
}

FramedPermutation compose(const FramedPermutation& first,
                          const FramedPermutation& second) {
  if (first.genus() != second.genus())
    throw std::invalid_argument("framed permutation genus mismatch");
  const std::size_t g = first.genus();
  FramedPermutation out;
  out.perm.resize(g);
  out.framing.resize(g);
  for (std::size_t s = 0; s < g; ++s) {
    out.perm[s] = first.perm[second.perm[s]];
    out.framing[s] = second.framing[s] + first.framing[second.perm[s]];
  }
  return out;
}

FramedPermutation inverse(const FramedPermutation& x) {
  const std::size_t g = x.genus();
  FramedPermutation out = FramedPermutation::identity(g);
  for (std::size_t s = 0; s < g; ++s) out.perm[x.perm[s]] = s;
  for (std::size_t s = 0; s < g; ++s) out.framing[s] = -x.framing[out.perm[s]];
  return out;
}

namespace {

void validate_lens(const ClassExpr& c, std::size_t genus) {
  for (const auto& [side, index] : c.terms)
    if (index < 1 || static_cast<std::size_t>(index) > genus)
      throw std::invalid_argument("homology class index exceeds genus");
}

FramedPermutation generator_image(const GeneratorSymbol& sym,
                                  std::size_t genus) {
  FramedPermutation f = FramedPermutation::identity(genus);
  if (const auto* flip = std::get_if<Flip>(&sym)) {
    const int slot = flip->slot.value_or(1);
    if (slot < 1 || static_cast<std::size_t>(slot) > genus)
      throw std::invalid_argument("flip slot exceeds genus");
    f.framing[static_cast<std::size_t>(slot) - 1] = Rational(1, 2);
  } else if (const auto* ex = std::get_if<Exchange>(&sym)) {
    const int i = ex->index;
    if (i < 1 || static_cast<std::size_t>(i) >= genus)
      throw std::invalid_argument("exchange index exceeds genus - 1");
    const std::size_t lo = static_cast<std::size_t>(i) - 1;
    f.perm[lo] = lo + 1;
    f.perm[lo + 1] = lo;
    f.framing[lo] = Rational(1, genus);        // moves up one slot
    f.framing[lo + 1] = Rational(-1, genus);   // moves down one slot
  } else if (std::holds_alternative<Rotation>(sym)) {
    for (std::size_t s = 0; s < genus; ++s) {
      f.perm[s] = (s + 1) % genus;
      f.framing[s] = Rational(1, genus);
    }
  } else if (const auto* eye = std::get_if<Eyeglass>(&sym)) {
    validate_lens(eye->lens_a, genus);
    validate_lens(eye->lens_b, genus);
    // trivial slot action
  } else {
    throw std::invalid_argument("pole symbol has no bubble action");
  }
  return f;
}

}  // namespace

FramedPermutation framed_of_word(std::size_t genus, const Word& w) {
  if (genus < 1) throw std::invalid_argument("genus must be positive");
  FramedPermutation acc = FramedPermutation::identity(genus);
  for (const Letter& letter : w.letters) {
    FramedPermutation img = generator_image(letter.symbol, genus);
    if (letter.exponent < 0) img = inverse(img);
    acc = compose(acc, img);
  }
  return acc;
}

std::vector<std::size_t> perm_of_word(std::size_t genus, const Word& w) {
  return framed_of_word(genus, w).perm;
}

FramedPermutation central_framing(std::size_t genus) {
  FramedPermutation f = FramedPermutation::identity(genus);
  f.framing.assign(genus, Rational(1));
  return f;
}

Rational total_framing(const FramedPermutation& x) {
  Rational sum(0);
  for (const Rational& f : x.framing) sum += f;
  return sum;
}

CheckReport verify_newgen(std::size_t genus) {
  if (genus < 1) throw std::invalid_argument("genus must be positive");
  std::string chain;
  for (std::size_t i = 1; i < genus; ++i) {
    if (!chain.empty()) chain += ' ';
    chain += 'x';
    chain += std::to_string(i);
  }
  const Word rotation = parse_word("e");
  const Word chain_word = parse_word(chain);
  const Word flipped_chain =
      parse_word(chain.empty() ? "w w" : "w w " + chain);

  CheckReport report;
  report.pass = true;
  if (perm_of_word(genus, rotation) != perm_of_word(genus, chain_word)) {
    report.pass = false;
    report.witness = "slot action differs: rotation " +
                     cycle_string(perm_of_word(genus, rotation)) +
                     " vs chain " +
                     cycle_string(perm_of_word(genus, chain_word));
    return report;
  }
  const FramedPermutation lhs = framed_of_word(genus, rotation);
  const FramedPermutation rhs = framed_of_word(genus, flipped_chain);
  if (!(lhs == rhs)) {
    report.pass = false;
    report.witness = "framed action differs: rotation " + to_string(lhs) +
                     " vs flipped chain " + to_string(rhs);
  }
  return report;
}

std::string cycle_string(const std::vector<std::size_t>& perm) {
  std::string out;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t s = 0; s < perm.size(); ++s) {
    if (seen[s] || perm[s] == s) {
      seen[s] = true;
      continue;
    }
    out += '(';
    std::size_t c = s;
    bool first = true;
    while (!seen[c]) {
      seen[c] = true;
      if (!first) out += ' ';
      out += std::to_string(c + 1);
      first = false;
      c = perm[c];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

std::string to_string(const FramedPermutation& x) {
  std::ostringstream os;
  os << cycle_string(x.perm) << " [";
  for (std::size_t s = 0; s < x.framing.size(); ++s) {
    if (s) os << ", ";
    os << x.framing[s];
  }
  os << ']';
  return os.str();
}

}  // namespace powellcalc
