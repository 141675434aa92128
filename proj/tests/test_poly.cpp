#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "rsurf/monad.hpp"
#include "rsurf/pipeline.hpp"
#include "rsurf/poly.hpp"

using namespace rsurf;
using poly::Monomial;
using poly::Poly;

namespace {

gf::PrimeField F5() { return gf::PrimeField(5); }

Poly p_of(const std::string& s) {
  auto ideal = poly::parse_ideal("p 5\nvars x0 x1 x2 x3 x4\n" + s + "\n");
  return ideal.at(0);
}

// regression oracle: plain S-polynomial closure, no strategy, no criteria
std::vector<Poly> naive_closure(std::vector<Poly> basis) {
  const gf::PrimeField F = basis.front().field();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < basis.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < basis.size() && !changed; ++j) {
        Monomial l = Monomial::lcm(basis[i].leading().mono,
                                   basis[j].leading().mono);
        Poly s = poly::sub(
            poly::mul_term(basis[i], l / basis[i].leading().mono,
                           F.inv(basis[i].leading().coeff)),
            poly::mul_term(basis[j], l / basis[j].leading().mono,
                           F.inv(basis[j].leading().coeff)));
        Poly nf = poly::normal_form(s, basis);
        if (!nf.is_zero()) {
          basis.push_back(nf);
          changed = true;
        }
      }
  }
  return basis;
}

std::set<uint64_t> leading_ideal_upto(const std::vector<Poly>& gens, int deg) {
  std::set<uint64_t> out;
  for (int d = 0; d <= deg; ++d)
    for (const Monomial& m : poly::monomials_of_degree(d))
      for (const Poly& g : gens)
        if (!g.is_zero() && g.leading().mono.divides(m)) {
          out.insert(m.pack());
          break;
        }
  return out;
}

}  // namespace

TEST_CASE("degrevlex ordering") {
  // x0^2 > x0 x1 > x1^2 > x0 x2 in degrevlex
  Monomial a, b, c, d;
  a.e = {2, 0, 0, 0, 0};
  b.e = {1, 1, 0, 0, 0};
  c.e = {0, 2, 0, 0, 0};
  d.e = {1, 0, 1, 0, 0};
  CHECK(poly::degrevlex_greater(a, b));
  CHECK(poly::degrevlex_greater(b, c));
  CHECK(poly::degrevlex_greater(c, d));
  CHECK_FALSE(poly::degrevlex_greater(d, c));
}

TEST_CASE("monomial bases are consistent") {
  for (int m = 0; m <= 8; ++m) {
    const auto& list = poly::monomials_of_degree(m);
    CHECK(list.size() == poly::dim_degree(m));
    for (std::size_t i = 0; i < list.size(); ++i)
      CHECK(poly::monomial_index(list[i]) == i);
    for (std::size_t i = 1; i < list.size(); ++i)
      CHECK(poly::degrevlex_greater(list[i - 1], list[i]));
  }
}

TEST_CASE("arithmetic and normal form") {
  Poly f = p_of("3*x0^2*x1^3+4*x2*x3^4");
  Poly g = p_of("2*x0^2*x1^3+2*x2*x3^4");
  Poly s = poly::add(f, g);
  CHECK(s.to_string() == "x2*x3^4");  // 5 = 0 on the first term
  Poly prod = poly::mul(p_of("x0+x1"), p_of("x0+4*x1"));
  CHECK(prod.to_string() == "x0^2+4*x1^2");
  Poly d = poly::derivative(p_of("x0^5+x1^2"), 0);
  CHECK(d.to_string() == "0");  // 5 x0^4 = 0 in characteristic 5
  Poly nf = poly::normal_form(p_of("x0^2*x1"), {p_of("x0^2")});
  CHECK(nf.is_zero());
}

TEST_CASE("buchberger: monomial ideals are their own basis") {
  auto gr = poly::buchberger({p_of("x0"), p_of("x1")}, -1);
  REQUIRE(gr.status == poly::GroebnerResult::Status::Done);
  CHECK(gr.basis.generators.size() == 2);
  CHECK(gr.basis.generators[0].to_string() == "x0");
  CHECK(gr.basis.generators[1].to_string() == "x1");
}

TEST_CASE("buchberger matches the naive closure oracle") {
  std::vector<Poly> gens{p_of("x0^2+4*x1*x2"), p_of("x0*x1+4*x2^2")};
  auto gr = poly::buchberger(gens, -1);
  REQUIRE(gr.status == poly::GroebnerResult::Status::Done);
  std::vector<Poly> oracle = naive_closure(gens);
  // identical leading-term ideals in low degrees
  CHECK(leading_ideal_upto(gr.basis.generators, 8) ==
        leading_ideal_upto(oracle, 8));
  // every input reduces to zero against the basis
  for (const Poly& g : gens)
    CHECK(poly::normal_form(g, gr.basis.generators).is_zero());
}

TEST_CASE("buchberger output is independent of generator order") {
  std::vector<Poly> gens{p_of("x0^2+4*x1*x2"), p_of("x0*x1+4*x2^2"),
                         p_of("x1^3+x3^3"), p_of("x0*x3+2*x4^2")};
  auto base = poly::buchberger(gens, -1);
  REQUIRE(base.status == poly::GroebnerResult::Status::Done);
  std::vector<std::size_t> perm{2, 0, 3, 1};
  std::vector<Poly> shuffled;
  for (std::size_t i : perm) shuffled.push_back(gens[i]);
  auto other = poly::buchberger(shuffled, -1);
  REQUIRE(other.status == poly::GroebnerResult::Status::Done);
  REQUIRE(base.basis.generators.size() == other.basis.generators.size());
  for (std::size_t i = 0; i < base.basis.generators.size(); ++i)
    CHECK(base.basis.generators[i].to_string() ==
          other.basis.generators[i].to_string());
}

TEST_CASE("budget zero is Inconclusive") {
  auto gr = poly::buchberger({p_of("x0^2+4*x1*x2"), p_of("x0*x1+4*x2^2")}, 0);
  CHECK(gr.status == poly::GroebnerResult::Status::Inconclusive);
  auto sm = poly::jacobian_singular_locus({p_of("x0^2+4*x1*x2")}, 0);
  CHECK(sm.verdict == poly::SmoothnessVerdict::Inconclusive);
}

TEST_CASE("hilbert polynomial of simple ideals") {
  // zero ideal: P(n) = binom(n+4, 4), a quartic
  poly::GroebnerBasis trivial{{}, true};
  poly::HilbertData h = poly::hilbert_polynomial(trivial);
  CHECK(h.projective_dim == 4);
  CHECK(h.eval(0) == 1);
  CHECK(h.eval(3) == 35);
  CHECK(h.eval(10) == 1001);
  // (x0): P(n) = binom(n+3, 3)
  auto gr = poly::buchberger({p_of("x0")}, -1);
  h = poly::hilbert_polynomial(gr.basis);
  CHECK(h.projective_dim == 3);
  CHECK(h.eval(2) == 10);
  CHECK(h.eval(5) == 56);
}

TEST_CASE("hilbert numerator base cases") {
  // I = (x0^2, x1^3): N = (1 - t^2)(1 - t^3)
  std::vector<Monomial> gens{Monomial::variable(0, 2), Monomial::variable(1, 3)};
  auto n = poly::hilbert_numerator(gens);
  std::vector<long long> expect{1, 0, -1, -1, 0, 1};
  CHECK(n == expect);
}

TEST_CASE("two planes meeting in a point are singular there") {
  // (x0, x1) n (x2, x3) = (x0 x2, x0 x3, x1 x2, x1 x3)
  std::vector<Poly> gens{p_of("x0*x2"), p_of("x0*x3"), p_of("x1*x2"),
                         p_of("x1*x3")};
  auto sm = poly::jacobian_singular_locus(gens, 120);
  CHECK(sm.verdict == poly::SmoothnessVerdict::Singular);
  // the scan of the witness ideal finds the intersection point (0:0:0:0:1)
  auto pts = poly::rational_point_scan(sm.witness, 1);
  bool found = false;
  for (const auto& sp : pts) {
    std::array<unsigned, 5> want{0, 0, 0, 0, 1};
    if (sp.point.coords == want) found = true;
  }
  CHECK(found);
  // and the scan of the surface ideal itself flags rank < 2 there
  auto direct = poly::rational_point_scan(gens, 1);
  int min_rank = 99;
  for (const auto& sp : direct) min_rank = std::min(min_rank, sp.jacobian_rank);
  CHECK(min_rank < 2);
}

TEST_CASE("point scans") {
  // all five coordinates: empty scheme
  std::vector<Poly> all{p_of("x0"), p_of("x1"), p_of("x2"), p_of("x3"),
                        p_of("x4")};
  CHECK(poly::rational_point_scan(all, 1).empty());
  // the zero polynomial vanishes everywhere: |P^4(F_5)| = 781
  CHECK(poly::projective_point_count(5, 1) == 781);
  std::vector<Poly> none{Poly::zero(F5())};
  CHECK(poly::rational_point_scan(none, 1).size() == 781);
  CHECK(poly::projective_point_count(5, 2) == 406901);
  // a hyperplane has |P^3(F_5)| = 156 points
  CHECK(poly::rational_point_scan({p_of("x0")}, 1).size() == 156);
  // scan is deterministic across worker counts
  auto a = poly::rational_point_scan({p_of("x0*x1+4*x2^2")}, 1, 1);
  auto b = poly::rational_point_scan({p_of("x0*x1+4*x2^2")}, 1, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].point.coords == b[i].point.coords);
    CHECK(a[i].jacobian_rank == b[i].jacobian_rank);
  }
}

TEST_CASE("quadratic extension: t^2 - 2 is irreducible, Frobenius fixes F_5") {
  poly::QuadraticExtension ext(F5());
  CHECK(ext.nonresidue() == 2);
  CHECK(ext.size() == 25);
  // field axioms smoke test + Frobenius is an automorphism fixing exactly F_5
  int fixed = 0;
  for (unsigned x = 0; x < 25; ++x) {
    if (ext.frobenius(x) == x) ++fixed;
    for (unsigned y = 0; y < 25; ++y) {
      CHECK(ext.frobenius(ext.mul(x, y)) ==
            ext.mul(ext.frobenius(x), ext.frobenius(y)));
      CHECK(ext.frobenius(ext.add(x, y)) ==
            ext.add(ext.frobenius(x), ext.frobenius(y)));
    }
    if (x) CHECK(ext.mul(x, ext.inv(x)) == 1);
  }
  CHECK(fixed == 5);
}

TEST_CASE("ideal file format round-trips") {
  std::vector<Poly> gens{p_of("3*x0^2*x1^3+4*x2*x3^4"), p_of("x0+x4")};
  std::string text = poly::format_ideal(gens);
  CHECK(text.rfind("p 5\nvars x0 x1 x2 x3 x4\n", 0) == 0);
  std::vector<Poly> back = poly::parse_ideal(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].to_string() == gens[0].to_string());
  CHECK(back[1].to_string() == gens[1].to_string());
  CHECK(poly::format_ideal(back) == text);
}
