#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "powellcalc/symplectic.hpp"

namespace powellcalc {

// Square matrix over F_p for a prime p below 2^16, entries in [0, p).
struct ModPMatrix {
  std::uint32_t p = 0;
  std::size_t n = 0;
  std::vector<std::uint32_t> data;  // row-major

  static ModPMatrix identity(std::size_t n, std::uint32_t p);
  std::uint32_t& at(std::size_t r, std::size_t c) { return data[r * n + c]; }
  std::uint32_t at(std::size_t r, std::size_t c) const { return data[r * n + c]; }
  bool operator==(const ModPMatrix&) const = default;
};

bool is_prime(std::uint32_t p);

// Validates the modulus (prime, 2 <= p < 2^16) and reduces every entry.
ModPMatrix reduce_mod_p(const SpMatrix& m, std::uint32_t p);

ModPMatrix mul(const ModPMatrix& x, const ModPMatrix& y);
std::vector<std::uint32_t> act(const ModPMatrix& m,
                               const std::vector<std::uint32_t>& v);
ModPMatrix mod_inverse(const ModPMatrix& m);

std::string format_matrix(const ModPMatrix& m);

// Deterministic stabilizer chain (Schreier-Sims) for matrix groups over F_p.
// The base is drawn from the standard basis vectors in index order, appended
// only when some residue fixes every earlier base point.
class StabilizerChain {
 public:
  explicit StabilizerChain(const std::vector<ModPMatrix>& generators);

  BigInt order() const;
  bool contains(const ModPMatrix& m) const;
  std::vector<std::size_t> orbit_sizes() const;
  std::size_t base_length() const { return base_.size(); }

  struct SiftOutcome {
    bool member = false;
    ModPMatrix residue;    // identity exactly when member
    std::size_t level = 0; // first level the sift failed at (base length if none)
  };
  SiftOutcome sift(ModPMatrix m) const;

 private:
  struct StrongGen {
    ModPMatrix fwd, inv;
    std::size_t depth;  // first base index the generator moves
  };
  struct OrbitEntry {
    ModPMatrix rep, rep_inv;  // rep sends the base point to the orbit point
  };
  using Key = std::array<std::uint64_t, 4>;  // 16-bit fields, so n <= 16

  Key pack(const std::vector<std::uint32_t>& v) const;
  std::size_t first_moved_base_index(const ModPMatrix& m) const;
  bool extend_base(const ModPMatrix& m);  // true if a new base point was added
  void insert_generator(const ModPMatrix& g, std::vector<bool>& dirty);
  void rebuild_orbit(std::size_t level);
  void run(std::vector<bool>& dirty);

  std::uint32_t p_ = 0;
  std::size_t n_ = 0;
  std::vector<std::vector<std::uint32_t>> base_;
  std::vector<StrongGen> sgens_;
  std::vector<std::map<Key, OrbitEntry>> orbits_;
};

// Independent closure by breadth-first right multiplication.  Requires the
// whole matrix to pack into 64 bits; throws std::runtime_error if the closure
// exceeds `limit` elements.  Returns elements in discovery order, identity
// first.
std::vector<ModPMatrix> naive_closure(const std::vector<ModPMatrix>& gens,
                                      std::size_t limit);

// Mod-p images of the standard balanced generators: the eyeglass twist, the
// first-slot flip, and the adjacent block exchanges.  Needs genus >= 2.
std::vector<ModPMatrix> powell_generators(std::size_t genus, std::uint32_t p);

// Generators of the full symplectic group mod p.
std::vector<ModPMatrix> full_sp_generators(std::size_t genus, std::uint32_t p);

// |Sp(2g, p)| = p^(g^2) * prod_{i=1..g} (p^(2i) - 1).
BigInt sp_group_order(std::size_t genus, std::uint32_t p);

}  // namespace powellcalc
