#include "powellcalc/words.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace powellcalc {

ParseError::ParseError(const std::string& message, std::size_t offset_)
    : std::runtime_error(message + " (at byte " + std::to_string(offset_) + ")"),
      offset(offset_) {}

ClassExpr ClassExpr::basis(char side, int index) {
  ClassExpr c;
  c.terms.emplace_back(side, index);
  return c;
}

void ClassExpr::normalize() { std::sort(terms.begin(), terms.end()); }

Word reduce(const Word& w) {
  Word out;
  out.letters.reserve(w.letters.size());
  for (const Letter& l : w.letters) {
    if (!out.letters.empty() && out.letters.back().symbol == l.symbol &&
        out.letters.back().exponent == -l.exponent) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(l);
    }
  }
  return out;
}

Word invert(const Word& w) {
  Word out;
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back({it->symbol, -it->exponent});
  return out;
}

Word concat(const Word& u, const Word& v) {
  Word out = u;
  out.letters.insert(out.letters.end(), v.letters.begin(), v.letters.end());
  return out;
}

Word conjugate(const Word& w, const Word& by) {
  return reduce(concat(concat(by, w), invert(by)));
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

// Parses digits at text[pos..]; requires a positive value.
int parse_index(std::string_view text, std::size_t& pos, std::size_t token_start) {
  std::size_t begin = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == begin) throw ParseError("malformed index: digits expected", pos);
  long value = 0;
  for (std::size_t i = begin; i < pos; ++i) {
    value = value * 10 + (text[i] - '0');
    if (value > 1000000) throw ParseError("malformed index: too large", token_start);
  }
  if (value < 1) throw ParseError("malformed index: must be >= 1", begin);
  return static_cast<int>(value);
}

ClassExpr parse_class_expr(std::string_view text, std::size_t& pos) {
  ClassExpr c;
  while (true) {
    if (pos >= text.size() || (text[pos] != 'a' && text[pos] != 'b'))
      throw ParseError("malformed class expression: expected 'a' or 'b'", pos);
    char side = text[pos++];
    int index = parse_index(text, pos, pos);
    c.terms.emplace_back(side, index);
    if (pos < text.size() && text[pos] == '+') {
      ++pos;
      continue;
    }
    break;
  }
  c.normalize();
  return c;
}

GeneratorSymbol parse_symbol(std::string_view text, std::size_t& pos) {
  std::size_t start = pos;
  char c = text[pos];
  switch (c) {
    case 'w': {
      ++pos;
      if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        return Flip{parse_index(text, pos, start)};
      return Flip{std::nullopt};
    }
    case 'x': {
      ++pos;
      return Exchange{parse_index(text, pos, start)};
    }
    case 'e': {
      ++pos;
      return Rotation{};
    }
    case 't': {
      ++pos;
      if (pos < text.size() && text[pos] == '(') {
        ++pos;
        ClassExpr lens_a = parse_class_expr(text, pos);
        if (pos >= text.size() || text[pos] != ',')
          throw ParseError("malformed eyeglass: expected ','", pos);
        ++pos;
        ClassExpr lens_b = parse_class_expr(text, pos);
        if (pos >= text.size() || text[pos] != ')')
          throw ParseError("malformed eyeglass: expected ')'", pos);
        ++pos;
        return Eyeglass{lens_a, lens_b};
      }
      return Eyeglass{ClassExpr::basis('a', 1), ClassExpr::basis('b', 2)};
    }
    case 'r': {
      ++pos;
      if (pos >= text.size()) throw ParseError("unknown token: bare 'r'", start);
      char axis = text[pos++];
      switch (axis) {
        case 'e': return Rho{RhoAxis::e};
        case '0': return Rho{RhoAxis::q0};
        case '1': return Rho{RhoAxis::q1};
        case '2': return Rho{RhoAxis::q2};
        default: throw ParseError("unknown token: bad rho axis", start);
      }
    }
    default:
      throw ParseError("unknown token", start);
  }
}

}  // namespace

Word parse_word(std::string_view text) {
  Word w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (is_space(text[pos])) {
      ++pos;
      continue;
    }
    std::size_t start = pos;
    GeneratorSymbol sym = parse_symbol(text, pos);
    int exponent = 1;
    if (pos < text.size() && text[pos] == '^') {
      if (text.compare(pos, 3, "^-1") != 0)
        throw ParseError("syntax error: only the suffix ^-1 is supported", pos);
      pos += 3;
      exponent = -1;
    }
    if (pos < text.size() && !is_space(text[pos]))
      throw ParseError("syntax error: unexpected character after token", pos);
    w.letters.push_back({sym, exponent});
    (void)start;
  }
  return w;
}

ClassExpr parse_class_expr(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size() && is_space(text[pos])) ++pos;
  ClassExpr c = parse_class_expr(text, pos);
  while (pos < text.size() && is_space(text[pos])) ++pos;
  if (pos != text.size())
    throw ParseError("syntax error: trailing characters after class expression", pos);
  return c;
}

std::string to_string(const ClassExpr& c) {
  std::string out;
  for (std::size_t i = 0; i < c.terms.size(); ++i) {
    if (i) out += '+';
    out += c.terms[i].first;
    out += std::to_string(c.terms[i].second);
  }
  return out;
}

std::string to_string(const GeneratorSymbol& s) {
  struct Printer {
    std::string operator()(const Flip& f) const {
      return f.slot ? "w" + std::to_string(*f.slot) : "w";
    }
    std::string operator()(const Exchange& x) const { return "x" + std::to_string(x.index); }
    std::string operator()(const Rotation&) const { return "e"; }
    std::string operator()(const Eyeglass& t) const {
      if (t.lens_a == ClassExpr::basis('a', 1) && t.lens_b == ClassExpr::basis('b', 2))
        return "t";
      return "t(" + to_string(t.lens_a) + "," + to_string(t.lens_b) + ")";
    }
    std::string operator()(const Rho& r) const {
      switch (r.axis) {
        case RhoAxis::e: return "re";
        case RhoAxis::q0: return "r0";
        case RhoAxis::q1: return "r1";
        default: return "r2";
      }
    }
  };
  return std::visit(Printer{}, s);
}

std::string to_string(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out += ' ';
    out += to_string(w.letters[i].symbol);
    if (w.letters[i].exponent == -1) out += "^-1";
  }
  return out;
}

}  // namespace powellcalc
