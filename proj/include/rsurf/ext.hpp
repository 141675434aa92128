#pragma once

// The exterior algebra E on five generators e_0..e_4 over F_p, its dual side
// of W-monomials, twisted free modules (+) omega_E(a), and homomorphisms
// between them given by matrices of homogeneous exterior elements.
//
// Conventions, fixed once:
//   * basis of Lambda^k is indexed by 5-bit masks in increasing numeric order;
//   * deg(e_i) = -1; an element of Lambda^j V has "weight" j and the module
//     bookkeeping applies the sign;
//   * the graded piece of omega_E(a) in internal degree d is Lambda^{d+a} W;
//   * contraction: e_i _| (x_{s1}^...^x_{sk}) = sum_t (-1)^{t-1} delta_{i,s_t}
//     (omit factor t), extended by (u^v) _| w = u _| (v _| w).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rsurf/gf.hpp"

namespace rsurf::ext {

inline constexpr int kNumVars = 5;
inline constexpr unsigned kNumMasks = 1u << kNumVars;
inline constexpr unsigned kFullMask = kNumMasks - 1;  // orientation x0^x1^x2^x3^x4

/// Masks of popcount k, increasing; and the index of a mask within its weight
/// class. Built once.
const std::vector<unsigned>& masks_of_weight(int k);
std::size_t mask_index(unsigned mask);
int weight_dim(int k);  // binom(5, k), 0 outside [0,5]

/// Sign of e_A ^ e_B -> e_{A|B}; 0 if the masks overlap.
int wedge_sign(unsigned a, unsigned b);

/// Sign of e_V _| x_W -> x_{W^V}; 0 unless V is a subset of W.
int contract_sign(unsigned v, unsigned w);

/// Homogeneous element of Lambda^j V. degree == j in [0,5]; degree 6 is the
/// explicit overflow-zero returned when a wedge leaves the algebra.
class ExtElement {
 public:
  explicit ExtElement(int degree) : degree_(degree), c_{} {}

  static ExtElement overflow_zero() { return ExtElement(kNumVars + 1); }

  int degree() const { return degree_; }
  bool is_zero() const {
    if (degree_ > kNumVars) return true;
    for (uint8_t v : c_)
      if (v) return false;
    return true;
  }

  uint8_t coeff(unsigned mask) const { return c_[mask]; }
  void set_coeff(unsigned mask, uint8_t v);

 private:
  int degree_;
  std::array<uint8_t, kNumMasks> c_;
};

/// Field-aware operations on ExtElements.
class ExteriorAlgebra {
 public:
  explicit ExteriorAlgebra(gf::PrimeField field) : f_(field) {}

  const gf::PrimeField& field() const { return f_; }

  ExtElement zero(int degree) const { return ExtElement(degree); }
  /// e_i as a 1-form.
  ExtElement generator(int i) const;
  /// Monomial c * e_mask.
  ExtElement monomial(unsigned mask, uint8_t c) const;
  ExtElement scalar(uint8_t c) const { return monomial(0, c); }

  ExtElement add(const ExtElement& u, const ExtElement& v) const;
  ExtElement sub(const ExtElement& u, const ExtElement& v) const;
  ExtElement scale(const ExtElement& u, uint8_t c) const;
  ExtElement negate(const ExtElement& u) const { return scale(u, f_.neg(1)); }

  /// Graded wedge product; overflow past Lambda^5 returns the explicit
  /// overflow zero.
  ExtElement wedge(const ExtElement& u, const ExtElement& v) const;

  /// u _| x_wmask as a coefficient vector over the Lambda^{k-j} W basis.
  std::vector<uint8_t> contract_action(const ExtElement& u,
                                       unsigned wmask) const;

  /// The unique u in Lambda^{5-k} V with u _| (x0^..^x4) = given element of
  /// Lambda^k W (coefficients over masks_of_weight(k)).
  ExtElement from_w_coefficients(int k, const std::vector<uint8_t>& w) const;

  /// "e0*e1 - 2*e3*e4"; balanced coefficients, terms by ascending mask.
  std::string render(const ExtElement& u) const;

 private:
  gf::PrimeField f_;
};

/// (+)_t omega_E(a_t), recorded by its twist sequence.
struct FreeModuleSpec {
  std::vector<int> twists;

  std::size_t summands() const { return twists.size(); }
  /// Weight of the W-piece contributed by summand s in internal degree d.
  int piece_weight(std::size_t s, int d) const { return d + twists[s]; }
  std::size_t piece_dim(int d) const;
  /// Offset of summand s inside the degree-d piece coordinate vector.
  std::size_t piece_offset(std::size_t s, int d) const;
  /// Degrees d with a nonzero piece, as [lo, hi]; empty spec gives lo > hi.
  std::pair<int, int> degree_range() const;

  bool operator==(const FreeModuleSpec& o) const { return twists == o.twists; }
};

/// Map of free modules: entry (r,c) is homogeneous of degree
/// source.twists[c] - target.twists[r] (or zero).
class EModuleMap {
 public:
  EModuleMap(FreeModuleSpec source, FreeModuleSpec target,
             std::vector<ExtElement> entries);

  static EModuleMap zero(const FreeModuleSpec& source,
                         const FreeModuleSpec& target);
  static EModuleMap identity(const ExteriorAlgebra& alg,
                             const FreeModuleSpec& spec);

  const FreeModuleSpec& source() const { return source_; }
  const FreeModuleSpec& target() const { return target_; }
  std::size_t rows() const { return target_.summands(); }
  std::size_t cols() const { return source_.summands(); }

  const ExtElement& at(std::size_t r, std::size_t c) const {
    return entries_[r * cols() + c];
  }

  bool is_zero() const;

 private:
  FreeModuleSpec source_, target_;
  std::vector<ExtElement> entries_;
};

/// Matrix of the degree-d piece: rows indexed by the target piece basis,
/// columns by the source piece basis, entries the contraction coefficients.
gf::Matrix graded_piece_matrix(const ExteriorAlgebra& alg, const EModuleMap& f,
                               int d);

/// g o f. Throws std::invalid_argument if f.target != g.source.
EModuleMap compose(const ExteriorAlgebra& alg, const EModuleMap& g,
                   const EModuleMap& f);

EModuleMap add_maps(const ExteriorAlgebra& alg, const EModuleMap& a,
                    const EModuleMap& b);

/// Left action of e_var on the free module, as a matrix
/// piece_{d+1} -> piece_d (plain contraction on each summand).
gf::Matrix module_action_matrix(const ExteriorAlgebra& alg,
                                const FreeModuleSpec& spec, int var, int d);

/// Right multiplication by e_var in the generator-coordinate picture:
/// contraction twisted by (-1)^{twist + d} per summand. Entry matrices of
/// EModuleMaps are left multiplications there, so their kernels and images
/// are closed under this action; it is the one used for syzygy generator
/// selection.
gf::Matrix module_right_action_matrix(const ExteriorAlgebra& alg,
                                      const FreeModuleSpec& spec, int var,
                                      int d);

}  // namespace rsurf::ext
