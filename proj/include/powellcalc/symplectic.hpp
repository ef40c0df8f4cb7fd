#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <string>
#include <vector>

#include "powellcalc/braid_shadow.hpp"
#include "powellcalc/words.hpp"

namespace powellcalc {

using BigInt = boost::multiprecision::cpp_int;

// Integer matrix acting on column vectors in the ordered homology basis
// (a1, b1, a2, b2, ..., ag, bg); dimension n = 2g.
struct SpMatrix {
  std::size_t n = 0;
  std::vector<BigInt> data;  // row-major, n*n entries

  static SpMatrix identity(std::size_t n);
  static SpMatrix zero(std::size_t n);
  BigInt& at(std::size_t r, std::size_t c) { return data[r * n + c]; }
  const BigInt& at(std::size_t r, std::size_t c) const { return data[r * n + c]; }
  std::size_t genus() const { return n / 2; }
  bool operator==(const SpMatrix&) const = default;
};

using HomologyClass = std::vector<BigInt>;

SpMatrix multiply(const SpMatrix& x, const SpMatrix& y);
HomologyClass act(const SpMatrix& m, const HomologyClass& v);

// Inverse of a symplectic matrix via the pairing (no division).
SpMatrix sp_inverse(const SpMatrix& m);
bool is_symplectic(const SpMatrix& m);

// Coordinates of a formal sum of basis classes.
HomologyClass class_vector(std::size_t genus, const ClassExpr& expr);

// Algebraic intersection number <x, y>; <a_i, b_i> = +1.
BigInt intersection(const HomologyClass& x, const HomologyClass& y);

// x -> x + k <x, c> c, built column by column.
SpMatrix transvection_power(std::size_t genus, const HomologyClass& c, long long k);
SpMatrix transvection(std::size_t genus, const HomologyClass& c);

// Eyeglass twist with the given direction, as a product of three
// transvections along lens_b, lens_a, and their sum.
SpMatrix eyeglass_map(std::size_t genus, const HomologyClass& lens_a,
                      const HomologyClass& lens_b, int direction);

SpMatrix flip_matrix(std::size_t genus, std::size_t slot);              // 1-based slot
SpMatrix exchange_matrix(std::size_t genus, std::size_t i, std::size_t j);  // 1 <= i < j <= g
SpMatrix rotation_matrix(std::size_t genus);

SpMatrix eval_sp(std::size_t genus, const Word& w);

// Block-diagonal extension to a larger genus (identity on the new blocks).
SpMatrix stabilize(const SpMatrix& m, std::size_t new_genus);

// Random-instance law checks.  Sampling is deterministic in the seed.
CheckReport eyeglass_composition_check(std::size_t trials, std::uint64_t seed,
                                       std::size_t max_genus);
CheckReport conjugation_covariance_check(std::size_t trials, std::uint64_t seed,
                                         std::size_t max_genus);

// Pinned 2x2 local computation around a stabilizing handle.
CheckReport local_sl2_check();

// Bounded search for a product of two eyeglass twists and one block flip
// realizing the standard two-block exchange on homology.
struct RealizationResult {
  bool found = false;
  std::string convention;  // enumeration coordinates of the first exact match
  SpMatrix product;        // candidate at the match (or last candidate if none)
  SpMatrix target;
};
RealizationResult exchange_realization_search();
bool matches_exchange(const SpMatrix& m);

// Text format: header line "g=<G>", then 2g rows of 2g integers.
std::string format_matrix(const SpMatrix& m);
SpMatrix parse_matrix(const std::string& text);

}  // namespace powellcalc
