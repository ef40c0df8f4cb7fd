#include "powellcalc/symplectic.hpp"

#include <cctype>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

namespace powellcalc {

SpMatrix SpMatrix::identity(std::size_t n) {
  SpMatrix m = zero(n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

SpMatrix SpMatrix::zero(std::size_t n) {
  SpMatrix m;
  m.n = n;
  m.data.assign(n * n, BigInt(0));
  return m;
}

SpMatrix multiply(const SpMatrix& x, const SpMatrix& y) {
  if (x.n != y.n) throw std::invalid_argument("matrix dimension mismatch");
  const std::size_t n = x.n;
  SpMatrix out = SpMatrix::zero(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const BigInt& f = x.at(r, k);
      if (f == 0) continue;
      for (std::size_t c = 0; c < n; ++c) out.at(r, c) += f * y.at(k, c);
    }
  return out;
}

HomologyClass act(const SpMatrix& m, const HomologyClass& v) {
  if (m.n != v.size()) throw std::invalid_argument("matrix/vector dimension mismatch");
  HomologyClass out(m.n, BigInt(0));
  for (std::size_t r = 0; r < m.n; ++r)
    for (std::size_t c = 0; c < m.n; ++c) out[r] += m.at(r, c) * v[c];
  return out;
}

namespace {

SpMatrix transpose(const SpMatrix& m) {
  SpMatrix out = SpMatrix::zero(m.n);
  for (std::size_t r = 0; r < m.n; ++r)
    for (std::size_t c = 0; c < m.n; ++c) out.at(c, r) = m.at(r, c);
  return out;
}

SpMatrix pairing_matrix(std::size_t n) {
  SpMatrix j = SpMatrix::zero(n);
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    j.at(k, k + 1) = 1;
    j.at(k + 1, k) = -1;
  }
  return j;
}

HomologyClass add_classes(const HomologyClass& x, const HomologyClass& y) {
  HomologyClass out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return out;
}

}  // namespace

SpMatrix sp_inverse(const SpMatrix& m) {
  const std::size_t n = m.n;
  SpMatrix j = pairing_matrix(n);
  SpMatrix neg_j = SpMatrix::zero(n);
  for (std::size_t i = 0; i < n * n; ++i) neg_j.data[i] = -j.data[i];
  SpMatrix inv = multiply(multiply(neg_j, transpose(m)), j);
  if (!(multiply(inv, m) == SpMatrix::identity(n)))
    throw std::invalid_argument("matrix is not symplectic");
  return inv;
}

bool is_symplectic(const SpMatrix& m) {
  if (m.n % 2 != 0) return false;
  SpMatrix j = pairing_matrix(m.n);
  return multiply(multiply(transpose(m), j), m) == j;
}

HomologyClass class_vector(std::size_t genus, const ClassExpr& expr) {
  HomologyClass v(2 * genus, BigInt(0));
  for (const auto& [side, index] : expr.terms) {
    if (index < 1 || static_cast<std::size_t>(index) > genus)
      throw std::invalid_argument("homology class index exceeds genus");
    v[2 * (static_cast<std::size_t>(index) - 1) + (side == 'b' ? 1 : 0)] += 1;
  }
  return v;
}

BigInt intersection(const HomologyClass& x, const HomologyClass& y) {
  if (x.size() != y.size() || x.size() % 2 != 0)
    throw std::invalid_argument("class dimension mismatch");
  BigInt s(0);
  for (std::size_t k = 0; k + 1 < x.size(); k += 2)
    s += x[k] * y[k + 1] - x[k + 1] * y[k];
  return s;
}

SpMatrix transvection_power(std::size_t genus, const HomologyClass& c, long long k) {
  const std::size_t n = 2 * genus;
  if (c.size() != n) throw std::invalid_argument("class dimension mismatch");
  SpMatrix m = SpMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    HomologyClass e(n, BigInt(0));
    e[col] = 1;
    const BigInt w = k * intersection(e, c);
    for (std::size_t row = 0; row < n; ++row) m.at(row, col) += w * c[row];
  }
  return m;
}

SpMatrix transvection(std::size_t genus, const HomologyClass& c) {
  return transvection_power(genus, c, 1);
}

SpMatrix eyeglass_map(std::size_t genus, const HomologyClass& lens_a,
                      const HomologyClass& lens_b, int direction) {
  const HomologyClass sum = add_classes(lens_a, lens_b);
  return multiply(multiply(transvection_power(genus, sum, direction),
                           transvection_power(genus, lens_a, -direction)),
                  transvection_power(genus, lens_b, -direction));
}

SpMatrix flip_matrix(std::size_t genus, std::size_t slot) {
  if (slot < 1 || slot > genus) throw std::invalid_argument("flip slot exceeds genus");
  SpMatrix m = SpMatrix::identity(2 * genus);
  m.at(2 * (slot - 1), 2 * (slot - 1)) = -1;
  m.at(2 * (slot - 1) + 1, 2 * (slot - 1) + 1) = -1;
  return m;
}

SpMatrix exchange_matrix(std::size_t genus, std::size_t i, std::size_t j) {
  if (i < 1 || i >= j || j > genus)
    throw std::invalid_argument("exchange blocks must satisfy 1 <= i < j <= genus");
  SpMatrix m = SpMatrix::identity(2 * genus);
  const std::size_t bi = 2 * (i - 1), bj = 2 * (j - 1);
  for (std::size_t r = 0; r < 2; ++r) {
    m.at(bi + r, bi + r) = 0;
    m.at(bj + r, bj + r) = 0;
    m.at(bj + r, bi + r) = 1;  // block i lands on block j
    m.at(bi + r, bj + r) = 1;  // block j lands on block i
  }
  return m;
}

SpMatrix rotation_matrix(std::size_t genus) {
  if (genus < 1) throw std::invalid_argument("genus must be positive");
  SpMatrix m = SpMatrix::zero(2 * genus);
  for (std::size_t k = 0; k < genus; ++k) {
    const std::size_t dest = (k + 1) % genus;
    m.at(2 * dest, 2 * k) = 1;
    m.at(2 * dest + 1, 2 * k + 1) = 1;
  }
  return m;
}

namespace {

SpMatrix sp_generator_image(const GeneratorSymbol& sym, std::size_t genus) {
  if (const auto* flip = std::get_if<Flip>(&sym)) {
    const int slot = flip->slot.value_or(1);
    if (slot < 1) throw std::invalid_argument("flip slot exceeds genus");
    return flip_matrix(genus, static_cast<std::size_t>(slot));
  }
  if (const auto* ex = std::get_if<Exchange>(&sym)) {
    const int i = ex->index;
    if (i < 1 || static_cast<std::size_t>(i) >= genus)
      throw std::invalid_argument("exchange index exceeds genus - 1");
    return exchange_matrix(genus, static_cast<std::size_t>(i),
                           static_cast<std::size_t>(i) + 1);
  }
  if (std::holds_alternative<Rotation>(sym)) return rotation_matrix(genus);
  if (const auto* eye = std::get_if<Eyeglass>(&sym))
    return eyeglass_map(genus, class_vector(genus, eye->lens_a),
                        class_vector(genus, eye->lens_b), 1);
  throw std::invalid_argument("pole symbol has no homology action");
}

}  // namespace

SpMatrix eval_sp(std::size_t genus, const Word& w) {
  if (genus < 1) throw std::invalid_argument("genus must be positive");
  SpMatrix acc = SpMatrix::identity(2 * genus);
  for (const Letter& letter : w.letters) {
    SpMatrix img = sp_generator_image(letter.symbol, genus);
    if (letter.exponent < 0) img = sp_inverse(img);
    acc = multiply(acc, img);
  }
  return acc;
}

SpMatrix stabilize(const SpMatrix& m, std::size_t new_genus) {
  if (2 * new_genus < m.n) throw std::invalid_argument("cannot shrink a matrix");
  SpMatrix out = SpMatrix::identity(2 * new_genus);
  for (std::size_t r = 0; r < m.n; ++r)
    for (std::size_t c = 0; c < m.n; ++c) out.at(r, c) = m.at(r, c);
  return out;
}

namespace {

HomologyClass random_class(std::mt19937_64& rng, std::size_t genus) {
  HomologyClass v(2 * genus);
  for (auto& e : v) e = static_cast<long long>(rng() % 5) - 2;
  return v;
}

std::string class_string(const HomologyClass& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].str();
  }
  return s + ")";
}

}  // namespace

CheckReport eyeglass_composition_check(std::size_t trials, std::uint64_t seed,
                                       std::size_t max_genus) {
  if (max_genus < 1) throw std::invalid_argument("genus must be positive");
  std::mt19937_64 rng(seed);
  CheckReport report;
  report.pass = true;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t g = 1 + rng() % max_genus;
    const HomologyClass la = random_class(rng, g);
    HomologyClass mu, lb;
    do mu = random_class(rng, g);
    while (intersection(la, mu) != 0);
    do lb = random_class(rng, g);
    while (intersection(la, lb) != 0 || intersection(mu, lb) != 0);
    const int d = rng() % 2 ? 1 : -1;
    const SpMatrix lhs =
        multiply(eyeglass_map(g, la, lb, d), eyeglass_map(g, mu, lb, d));
    const SpMatrix rhs = eyeglass_map(g, add_classes(la, mu), lb, d);
    if (!(lhs == rhs)) {
      report.pass = false;
      report.witness = "composition law fails at trial " + std::to_string(t) +
                       ": lens_a=" + class_string(la) + " mu=" + class_string(mu) +
                       " lens_b=" + class_string(lb) +
                       " direction=" + std::to_string(d);
      return report;
    }
  }
  return report;
}

CheckReport conjugation_covariance_check(std::size_t trials, std::uint64_t seed,
                                         std::size_t max_genus) {
  if (max_genus < 1) throw std::invalid_argument("genus must be positive");
  std::mt19937_64 rng(seed);
  CheckReport report;
  report.pass = true;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t g = 1 + rng() % max_genus;
    SpMatrix m = SpMatrix::identity(2 * g);
    const std::size_t factors = 1 + rng() % 5;
    for (std::size_t k = 0; k < factors; ++k) {
      long long power = static_cast<long long>(rng() % 4) - 2;
      if (power == 0) power = 1;
      m = multiply(m, transvection_power(g, random_class(rng, g), power));
    }
    const HomologyClass la = random_class(rng, g);
    HomologyClass lb;
    do lb = random_class(rng, g);
    while (intersection(la, lb) != 0);
    const int d = rng() % 2 ? 1 : -1;
    const SpMatrix lhs =
        multiply(multiply(m, eyeglass_map(g, la, lb, d)), sp_inverse(m));
    const SpMatrix rhs = eyeglass_map(g, act(m, la), act(m, lb), d);
    if (!(lhs == rhs)) {
      report.pass = false;
      report.witness = "covariance fails at trial " + std::to_string(t) +
                       ": lens_a=" + class_string(la) + " lens_b=" +
                       class_string(lb) + " direction=" + std::to_string(d);
      return report;
    }
  }
  return report;
}

CheckReport local_sl2_check() {
  SpMatrix twist = SpMatrix::identity(2);   // action of the boundary twist
  twist.at(0, 1) = 2;
  SpMatrix loop = SpMatrix::identity(2);    // action of the companion loop
  loop.at(1, 0) = -1;

  CheckReport report;
  report.pass = true;
  auto fail = [&report](const std::string& what) {
    report.pass = false;
    report.witness = what;
  };

  SpMatrix expected = SpMatrix::zero(2);
  expected.at(0, 0) = 1;
  expected.at(0, 1) = 2;
  expected.at(1, 0) = -1;
  expected.at(1, 1) = -1;
  const SpMatrix m = multiply(loop, twist);
  if (!(m == expected)) return fail("product matrix differs from the pinned value"), report;
  if (!is_symplectic(twist) || !is_symplectic(loop))
    return fail("generator is not unimodular"), report;

  const HomologyClass fixed{1, 0};
  if (act(twist, fixed) != fixed) return fail("twist moves the fixed class"), report;

  const HomologyClass start{0, 1};
  const HomologyClass step1 = act(m, start);
  if (step1 != HomologyClass{2, -1}) return fail("first image differs"), report;
  const HomologyClass step2 = act(m, step1);
  if (step2 != HomologyClass{0, -1}) return fail("second image differs"), report;

  SpMatrix power = SpMatrix::identity(2);
  for (int k = 0; k < 6; ++k) power = multiply(power, m);
  SpMatrix minus_identity = SpMatrix::identity(2);
  minus_identity.at(0, 0) = -1;
  minus_identity.at(1, 1) = -1;
  if (!(multiply(m, m) == minus_identity)) return fail("square is not minus identity"), report;
  if (!(power == minus_identity || power == SpMatrix::identity(2)))
    return fail("sixth power is not plus or minus identity"), report;
  return report;
}

bool matches_exchange(const SpMatrix& m) {
  return m.n == 4 && m == exchange_matrix(2, 1, 2);
}

RealizationResult exchange_realization_search() {
  // Local genus-2 model: block 1 carries the standard classes (a_s, b_s),
  // block 2 the generic ones (x, y).
  const std::size_t g = 2;
  auto basis = [](std::size_t i) {
    HomologyClass v(4, BigInt(0));
    v[i] = 1;
    return v;
  };
  const HomologyClass a_s = basis(0), b_s = basis(1), x = basis(2), y = basis(3);

  struct LensPair {
    const char* name;
    HomologyClass first, second;
  };
  const LensPair pairs[] = {{"(a_s,x)", a_s, x},
                            {"(a_s,y)", a_s, y},
                            {"(b_s,x)", b_s, x},
                            {"(b_s,y)", b_s, y}};
  const int directions[] = {1, -1};
  const char* factor_names[] = {"none", "post-std", "post-gen", "pre-std", "pre-gen"};

  const SpMatrix standard_flip = flip_matrix(g, 1);
  const SpMatrix generic_flip = flip_matrix(g, 2);
  // The bubble move acts trivially on homology: a transvection cancelled by
  // its own inverse.  Kept in the product so the assembled word shape is
  // visible in one place.
  const SpMatrix bubble = multiply(transvection_power(g, x, 1),
                                   transvection_power(g, x, -1));

  RealizationResult result;
  result.target = exchange_matrix(2, 1, 2);
  for (int factor = 0; factor < 5; ++factor)
    for (const LensPair& eta1 : pairs)
      for (int d1 : directions)
        for (const LensPair& eta2 : pairs)
          for (int d2 : directions) {
            const SpMatrix t1 = eyeglass_map(g, eta1.first, eta1.second, d1);
            const SpMatrix t2 = eyeglass_map(g, eta2.first, eta2.second, d2);
            SpMatrix c = multiply(
                bubble,
                multiply(multiply(multiply(sp_inverse(t1), standard_flip), t2), t1));
            switch (factor) {
              case 1: c = multiply(standard_flip, c); break;
              case 2: c = multiply(generic_flip, c); break;
              case 3: c = multiply(c, standard_flip); break;
              case 4: c = multiply(c, generic_flip); break;
              default: break;
            }
            result.product = c;
            if (matches_exchange(c)) {
              result.found = true;
              result.convention = std::string("factor=") + factor_names[factor] +
                                  " eta1=" + eta1.name + " d1=" +
                                  (d1 > 0 ? "+1" : "-1") + " eta2=" + eta2.name +
                                  " d2=" + (d2 > 0 ? "+1" : "-1");
              return result;
            }
          }
  return result;
}

std::string format_matrix(const SpMatrix& m) {
  std::ostringstream os;
  os << "g=" << m.genus() << '\n';
  for (std::size_t r = 0; r < m.n; ++r) {
    for (std::size_t c = 0; c < m.n; ++c) {
      if (c) os << ' ';
      os << m.at(r, c);
    }
    os << '\n';
  }
  return os.str();
}

SpMatrix parse_matrix(const std::string& text) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  if (text.compare(pos, 2, "g=") != 0)
    throw ParseError("expected header g=<genus>", pos);
  pos += 2;
  std::size_t digits_start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == digits_start) throw ParseError("expected genus digits", pos);
  const unsigned long genus = std::stoul(text.substr(digits_start, pos - digits_start));
  if (genus < 1 || genus > 10000) throw ParseError("genus out of range", digits_start);
  const std::size_t n = 2 * genus;

  SpMatrix m = SpMatrix::zero(n);
  for (std::size_t i = 0; i < n * n; ++i) {
    skip_space();
    const std::size_t token_start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    const std::size_t first_digit = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == first_digit) throw ParseError("expected matrix entry", token_start);
    std::string token = text.substr(token_start, pos - token_start);
    if (token.front() == '+') token.erase(0, 1);
    m.data[i] = BigInt(token);
  }
  skip_space();
  if (pos != text.size()) throw ParseError("unexpected trailing content", pos);
  return m;
}

}  // namespace powellcalc
