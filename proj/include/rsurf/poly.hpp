#pragma once

// Commutative polynomial algebra over F_p in five variables: degrevlex
// Buchberger, Hilbert series / polynomial from leading terms, the Jacobian
// smoothness certificate, and rational point scans over F_p and F_{p^2}.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsurf/gf.hpp"

namespace rsurf::poly {

inline constexpr int kNumVars = 5;

struct Monomial {
  std::array<uint8_t, kNumVars> e{};

  int degree() const {
    int d = 0;
    for (uint8_t v : e) d += v;
    return d;
  }
  bool divides(const Monomial& m) const {
    for (int i = 0; i < kNumVars; ++i)
      if (e[i] > m.e[i]) return false;
    return true;
  }
  Monomial operator*(const Monomial& m) const {
    Monomial r;
    for (int i = 0; i < kNumVars; ++i) r.e[i] = uint8_t(e[i] + m.e[i]);
    return r;
  }
  /// this / m; requires m.divides(*this).
  Monomial operator/(const Monomial& m) const {
    Monomial r;
    for (int i = 0; i < kNumVars; ++i) r.e[i] = uint8_t(e[i] - m.e[i]);
    return r;
  }
  static Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kNumVars; ++i) r.e[i] = std::max(a.e[i], b.e[i]);
    return r;
  }
  static Monomial variable(int i, int power = 1) {
    Monomial r;
    r.e[std::size_t(i)] = uint8_t(power);
    return r;
  }
  bool operator==(const Monomial& m) const { return e == m.e; }
  uint64_t pack() const {
    uint64_t v = 0;
    for (int i = 0; i < kNumVars; ++i) v = (v << 8) | e[i];
    return v;
  }
};

/// true if a > b in degrevlex.
bool degrevlex_greater(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  uint8_t coeff;
};

/// Terms sorted descending in degrevlex, no zero coefficients.
class Poly {
 public:
  Poly() = default;
  Poly(gf::PrimeField field, std::vector<Term> terms);

  static Poly zero(gf::PrimeField field) { return Poly(field, {}); }
  static Poly monomial(gf::PrimeField field, const Monomial& m, uint8_t c);
  static Poly constant(gf::PrimeField field, uint8_t c);

  const gf::PrimeField& field() const { return *f_; }
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }
  int degree() const { return terms_.empty() ? -1 : terms_.front().mono.degree(); }
  bool is_homogeneous() const;

  std::string to_string() const;

 private:
  std::optional<gf::PrimeField> f_;
  std::vector<Term> terms_;
  friend Poly add(const Poly&, const Poly&);
  friend Poly scale(const Poly&, uint8_t);
  friend Poly mul_term(const Poly&, const Monomial&, uint8_t);
  friend Poly mul(const Poly&, const Poly&);
};

Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly scale(const Poly& a, uint8_t c);
Poly mul_term(const Poly& a, const Monomial& m, uint8_t c);
Poly mul(const Poly& a, const Poly& b);
Poly derivative(const Poly& a, int var);

/// Full normal form of f against basis (leading terms reduced away first).
Poly normal_form(const Poly& f, const std::vector<Poly>& basis);

/// All monomials of total degree m, descending degrevlex (leading first).
const std::vector<Monomial>& monomials_of_degree(int m);
std::size_t monomial_index(const Monomial& m);  // index within its degree list
std::size_t dim_degree(int m);                  // binom(m+4, 4)

struct GroebnerBasis {
  std::vector<Poly> generators;  // reduced: monic, pairwise non-divisible LTs
  bool reduced = true;
};

struct GroebnerResult {
  enum class Status { Done, Inconclusive };
  Status status = Status::Done;
  GroebnerBasis basis;        // complete if Done, partial state otherwise
  unsigned long pair_count = 0;
};

/// Buchberger with the normal selection strategy (lowest lcm degree, then a
/// fixed lexicographic tie-break) and the coprimality + chain criteria.
/// budget_seconds <= 0 means no budget; exceeding the budget returns
/// Inconclusive with the partial state.
GroebnerResult buchberger(const std::vector<Poly>& gens, double budget_seconds);

/// Hilbert series numerator of S/I for a monomial ideal (exact, int64
/// coefficients in t).
std::vector<long long> hilbert_numerator(const std::vector<Monomial>& gens);

struct HilbertData {
  /// P(n) = sum coeffs[k] n^k / 24 with exact integer numerators.
  std::array<long long, 5> coeff24{};
  int projective_dim = -1;  // degree of P; -1 for the zero polynomial
  long long degree = 0;     // leading coefficient * dim!
  long long sectional_genus = 0;  // meaningful when projective_dim == 2
  long long chi = 0;              // P(0)
  long long eval(long long n) const;
};

/// Hilbert polynomial of S/I from the leading terms of a reduced basis.
HilbertData hilbert_polynomial(const GroebnerBasis& gb);

enum class SmoothnessVerdict { Smooth, Singular, Inconclusive };

struct SmoothnessResult {
  SmoothnessVerdict verdict = SmoothnessVerdict::Inconclusive;
  /// Generators of the singular-locus ideal actually used (witness ideal for
  /// Singular; partial state for Inconclusive).
  std::vector<Poly> witness;
  std::string detail;
};

/// Jacobian criterion for an ideal cutting a codimension-2 projective scheme:
/// Smooth iff the cone over V(I + minors_2(Jac)) has dimension 0. Minors are
/// added in degree order with an early exit as soon as the certificate holds.
SmoothnessResult jacobian_singular_locus(const std::vector<Poly>& ideal,
                                         double budget_seconds);

/// F_{p^2} = F_p[t]/(t^2 - nonresidue); for p = 5 the modulus is t^2 - 2.
class QuadraticExtension {
 public:
  explicit QuadraticExtension(gf::PrimeField base);

  const gf::PrimeField& base() const { return f_; }
  unsigned size() const { return f_.modulus() * f_.modulus(); }
  unsigned nonresidue() const { return nr_; }

  // elements are a + b t encoded as a + p*b
  unsigned add(unsigned x, unsigned y) const;
  unsigned mul(unsigned x, unsigned y) const;
  unsigned from_base(uint8_t a) const { return a; }
  unsigned frobenius(unsigned x) const;  // x -> x^p
  bool is_zero(unsigned x) const { return x == 0; }
  unsigned inv(unsigned x) const;

 private:
  gf::PrimeField f_;
  unsigned nr_;
};

struct ProjectivePoint {
  std::array<unsigned, kNumVars> coords;  // first nonzero coordinate is 1
};

struct ScanPoint {
  ProjectivePoint point;
  int jacobian_rank;
};

/// Exhaustive scan of P^4(F_{p^e}), e in {1,2}: common zeros of the
/// generators, each with the Jacobian rank evaluated at the point.
/// Deterministic output order (enumeration order by coordinates).
std::vector<ScanPoint> rational_point_scan(const std::vector<Poly>& ideal,
                                           int extension_degree,
                                           unsigned workers = 1);

/// Count of P^4(F_{p^e}).
unsigned long projective_point_count(unsigned p, int extension_degree);

/// Plain text ideal format:
///   p 5
///   vars x0 x1 x2 x3 x4
///   <one polynomial per line>
std::string format_ideal(const std::vector<Poly>& ideal);
std::vector<Poly> parse_ideal(const std::string& text);

}  // namespace rsurf::poly
