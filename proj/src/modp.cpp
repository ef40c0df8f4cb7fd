#include "powellcalc/modp.hpp"

#include <bit>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace powellcalc {

ModPMatrix ModPMatrix::identity(std::size_t n, std::uint32_t p) {
  ModPMatrix m;
  m.p = p;
  m.n = n;
  m.data.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

namespace {

void validate_modulus(std::uint32_t p) {
  if (p >= 65536 || !is_prime(p))
    throw std::invalid_argument("modulus must be a prime below 65536");
}

void validate_compatible(const ModPMatrix& x, const ModPMatrix& y) {
  if (x.p != y.p || x.n != y.n)
    throw std::invalid_argument("matrices have different dimension or modulus");
}

std::uint32_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint32_t p) {
  std::uint64_t result = 1 % p, b = base % p;
  while (exp) {
    if (exp & 1) result = result * b % p;
    b = b * b % p;
    exp >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

std::uint32_t mod_inv_scalar(std::uint32_t a, std::uint32_t p) {
  return mod_pow(a, p - 2, p);
}

}  // namespace

ModPMatrix reduce_mod_p(const SpMatrix& m, std::uint32_t p) {
  validate_modulus(p);
  ModPMatrix out;
  out.p = p;
  out.n = m.n;
  out.data.resize(m.n * m.n);
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    BigInt r = m.data[i] % p;
    if (r < 0) r += p;
    out.data[i] = r.convert_to<std::uint32_t>();
  }
  return out;
}

ModPMatrix mul(const ModPMatrix& x, const ModPMatrix& y) {
  validate_compatible(x, y);
  const std::size_t n = x.n;
  ModPMatrix out;
  out.p = x.p;
  out.n = n;
  out.data.assign(n * n, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      std::uint64_t s = 0;
      for (std::size_t k = 0; k < n; ++k)
        s += static_cast<std::uint64_t>(x.at(r, k)) * y.at(k, c);
      out.at(r, c) = static_cast<std::uint32_t>(s % x.p);
    }
  return out;
}

std::vector<std::uint32_t> act(const ModPMatrix& m,
                               const std::vector<std::uint32_t>& v) {
  if (m.n != v.size())
    throw std::invalid_argument("matrix/vector dimension mismatch");
  std::vector<std::uint32_t> out(m.n);
  for (std::size_t r = 0; r < m.n; ++r) {
    std::uint64_t s = 0;
    for (std::size_t c = 0; c < m.n; ++c)
      s += static_cast<std::uint64_t>(m.at(r, c)) * v[c];
    out[r] = static_cast<std::uint32_t>(s % m.p);
  }
  return out;
}

ModPMatrix mod_inverse(const ModPMatrix& m) {
  const std::size_t n = m.n;
  const std::uint32_t p = m.p;
  ModPMatrix a = m;
  ModPMatrix inv = ModPMatrix::identity(n, p);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t r = col; r < n; ++r)
      if (a.at(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot == n) throw std::invalid_argument("matrix is singular mod p");
    if (pivot != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a.at(pivot, c), a.at(col, c));
        std::swap(inv.at(pivot, c), inv.at(col, c));
      }
    const std::uint32_t scale = mod_inv_scalar(a.at(col, col), p);
    for (std::size_t c = 0; c < n; ++c) {
      a.at(col, c) = static_cast<std::uint32_t>(
          static_cast<std::uint64_t>(a.at(col, c)) * scale % p);
      inv.at(col, c) = static_cast<std::uint32_t>(
          static_cast<std::uint64_t>(inv.at(col, c)) * scale % p);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a.at(r, col) == 0) continue;
      const std::uint64_t f = p - a.at(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        a.at(r, c) = static_cast<std::uint32_t>(
            (a.at(r, c) + f * a.at(col, c)) % p);
        inv.at(r, c) = static_cast<std::uint32_t>(
            (inv.at(r, c) + f * inv.at(col, c)) % p);
      }
    }
  }
  return inv;
}

std::string format_matrix(const ModPMatrix& m) {
  std::ostringstream os;
  for (std::size_t r = 0; r < m.n; ++r) {
    for (std::size_t c = 0; c < m.n; ++c) {
      if (c) os << ' ';
      os << m.at(r, c);
    }
    os << '\n';
  }
  return os.str();
}

StabilizerChain::StabilizerChain(const std::vector<ModPMatrix>& generators) {
  if (generators.empty())
    throw std::invalid_argument("stabilizer chain needs at least one generator");
  p_ = generators.front().p;
  n_ = generators.front().n;
  validate_modulus(p_);
  if (n_ == 0 || n_ > 16)
    throw std::invalid_argument("stabilizer chain supports dimensions 1..16");
  for (const ModPMatrix& g : generators) validate_compatible(g, generators.front());

  std::vector<bool> dirty;
  const ModPMatrix id = ModPMatrix::identity(n_, p_);
  for (const ModPMatrix& g : generators)
    if (!(g == id)) insert_generator(g, dirty);
  run(dirty);
}

StabilizerChain::Key StabilizerChain::pack(
    const std::vector<std::uint32_t>& v) const {
  Key key{0, 0, 0, 0};
  for (std::size_t i = 0; i < v.size(); ++i)
    key[i / 4] |= static_cast<std::uint64_t>(v[i]) << (16 * (i % 4));
  return key;
}

std::size_t StabilizerChain::first_moved_base_index(const ModPMatrix& m) const {
  for (std::size_t i = 0; i < base_.size(); ++i)
    if (act(m, base_[i]) != base_[i]) return i;
  return base_.size();
}

bool StabilizerChain::extend_base(const ModPMatrix& m) {
  for (std::size_t k = 0; k < n_; ++k) {
    std::vector<std::uint32_t> e(n_, 0);
    e[k] = 1;
    if (act(m, e) != e) {
      base_.push_back(e);
      orbits_.emplace_back();
      return true;
    }
  }
  return false;  // fixes every standard basis vector: the identity
}

void StabilizerChain::insert_generator(const ModPMatrix& g,
                                       std::vector<bool>& dirty) {
  std::size_t depth = first_moved_base_index(g);
  if (depth == base_.size()) {
    if (!extend_base(g)) return;
    depth = base_.size() - 1;
  }
  sgens_.push_back({g, mod_inverse(g), depth});
  dirty.resize(base_.size(), true);
  for (std::size_t k = 0; k <= depth; ++k) dirty[k] = true;
}

void StabilizerChain::rebuild_orbit(std::size_t level) {
  orbits_[level].clear();
  const ModPMatrix id = ModPMatrix::identity(n_, p_);
  orbits_[level][pack(base_[level])] = {id, id};
  std::deque<std::vector<std::uint32_t>> queue{base_[level]};
  while (!queue.empty()) {
    const std::vector<std::uint32_t> x = queue.front();
    queue.pop_front();
    const OrbitEntry entry = orbits_[level].at(pack(x));
    for (const StrongGen& s : sgens_) {
      if (s.depth < level) continue;
      std::vector<std::uint32_t> y = act(s.fwd, x);
      const Key key = pack(y);
      if (!orbits_[level].count(key)) {
        orbits_[level][key] = {mul(s.fwd, entry.rep), mul(entry.rep_inv, s.inv)};
        queue.push_back(std::move(y));
      }
    }
  }
}

void StabilizerChain::run(std::vector<bool>& dirty) {
  if (base_.empty()) return;
  dirty.resize(base_.size(), true);
  const ModPMatrix id = ModPMatrix::identity(n_, p_);
  std::size_t i = base_.size() - 1;
  while (true) {
    if (dirty[i]) {
      rebuild_orbit(i);
      dirty[i] = false;
    }
    bool inserted = false;
    for (auto it = orbits_[i].begin(); it != orbits_[i].end() && !inserted; ++it) {
      const std::vector<std::uint32_t> x = act(it->second.rep, base_[i]);
      for (const StrongGen& s : sgens_) {
        if (s.depth < i) continue;
        const OrbitEntry& ey = orbits_[i].at(pack(act(s.fwd, x)));
        ModPMatrix u = mul(ey.rep_inv, mul(s.fwd, it->second.rep));
        for (std::size_t lvl = i + 1; lvl < base_.size(); ++lvl) {
          auto jt = orbits_[lvl].find(pack(act(u, base_[lvl])));
          if (jt == orbits_[lvl].end()) break;
          u = mul(jt->second.rep_inv, u);
        }
        if (u == id) continue;
        insert_generator(u, dirty);
        i = sgens_.back().depth;
        inserted = true;
        break;
      }
    }
    if (inserted) continue;
    if (i == 0) break;
    --i;
  }
}

StabilizerChain::SiftOutcome StabilizerChain::sift(ModPMatrix m) const {
  validate_compatible(m, ModPMatrix::identity(n_, p_));
  for (std::size_t level = 0; level < base_.size(); ++level) {
    const auto it = orbits_[level].find(pack(act(m, base_[level])));
    if (it == orbits_[level].end()) return {false, std::move(m), level};
    m = mul(it->second.rep_inv, m);
  }
  const bool member = m == ModPMatrix::identity(n_, p_);
  return {member, std::move(m), base_.size()};
}

bool StabilizerChain::contains(const ModPMatrix& m) const {
  return sift(m).member;
}

BigInt StabilizerChain::order() const {
  BigInt result(1);
  for (const auto& orbit : orbits_) result *= static_cast<std::uint64_t>(orbit.size());
  return result;
}

std::vector<std::size_t> StabilizerChain::orbit_sizes() const {
  std::vector<std::size_t> sizes;
  for (const auto& orbit : orbits_) sizes.push_back(orbit.size());
  return sizes;
}

std::vector<ModPMatrix> naive_closure(const std::vector<ModPMatrix>& gens,
                                      std::size_t limit) {
  if (gens.empty())
    throw std::invalid_argument("closure needs at least one generator");
  const std::uint32_t p = gens.front().p;
  const std::size_t n = gens.front().n;
  validate_modulus(p);
  for (const ModPMatrix& g : gens) validate_compatible(g, gens.front());
  const unsigned bits = std::bit_width(p - 1);
  if (bits * n * n > 64)
    throw std::invalid_argument("matrix entries do not pack into 64 bits");
  auto pack = [&](const ModPMatrix& m) {
    std::uint64_t key = 0;
    unsigned offset = 0;
    for (const std::uint32_t e : m.data) {
      key |= static_cast<std::uint64_t>(e) << offset;
      offset += bits;
    }
    return key;
  };

  std::vector<ModPMatrix> out;
  std::set<std::uint64_t> seen;
  out.reserve(64);
  out.push_back(ModPMatrix::identity(n, p));
  seen.insert(pack(out.front()));
  std::size_t next = 0;
  while (next < out.size()) {
    const ModPMatrix m = out[next++];
    for (const ModPMatrix& g : gens) {
      ModPMatrix prod = mul(m, g);
      if (seen.insert(pack(prod)).second) {
        if (out.size() >= limit)
          throw std::runtime_error("closure exceeded the element limit");
        out.push_back(std::move(prod));
      }
    }
  }
  return out;
}

std::vector<ModPMatrix> powell_generators(std::size_t genus, std::uint32_t p) {
  if (genus < 2)
    throw std::invalid_argument("balanced generators need genus >= 2");
  std::vector<ModPMatrix> out;
  out.push_back(reduce_mod_p(eval_sp(genus, parse_word("t")), p));
  out.push_back(reduce_mod_p(flip_matrix(genus, 1), p));
  for (std::size_t i = 1; i < genus; ++i)
    out.push_back(reduce_mod_p(exchange_matrix(genus, i, i + 1), p));
  return out;
}

std::vector<ModPMatrix> full_sp_generators(std::size_t genus, std::uint32_t p) {
  validate_modulus(p);
  if (genus < 1) throw std::invalid_argument("genus must be positive");
  std::vector<ModPMatrix> out;
  if (genus == 1) {
    HomologyClass a{1, 0}, b{0, 1};
    out.push_back(reduce_mod_p(transvection(1, a), p));
    out.push_back(reduce_mod_p(transvection(1, b), p));
    return out;
  }
  const std::size_t n = 2 * genus;
  BigInt count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= p;
  if (count > (1 << 20))
    throw std::invalid_argument("too many transvections to enumerate");
  std::vector<std::uint32_t> digits(n, 0);
  while (true) {
    // advance the odometer
    std::size_t pos = 0;
    while (pos < n && digits[pos] == p - 1) digits[pos++] = 0;
    if (pos == n) break;
    ++digits[pos];
    HomologyClass c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = digits[i];
    out.push_back(reduce_mod_p(transvection(genus, c), p));
  }
  return out;
}

BigInt sp_group_order(std::size_t genus, std::uint32_t p) {
  validate_modulus(p);
  if (genus < 1) throw std::invalid_argument("genus must be positive");
  const BigInt q(p);
  BigInt result = boost::multiprecision::pow(q, static_cast<unsigned>(genus * genus));
  for (std::size_t i = 1; i <= genus; ++i)
    result *= boost::multiprecision::pow(q, static_cast<unsigned>(2 * i)) - 1;
  return result;
}

}  // namespace powellcalc
