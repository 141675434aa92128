#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rsurf/ext.hpp"

using namespace rsurf;
using ext::EModuleMap;
using ext::ExtElement;
using ext::ExteriorAlgebra;
using ext::FreeModuleSpec;

namespace {

ExtElement random_element(const ExteriorAlgebra& alg, int degree,
                          gf::SplitMix64& rng) {
  ExtElement u = alg.zero(degree);
  for (unsigned m : ext::masks_of_weight(degree))
    u.set_coeff(m, uint8_t(rng.below(alg.field().modulus())));
  return u;
}

EModuleMap random_map(const ExteriorAlgebra& alg, const FreeModuleSpec& src,
                      const FreeModuleSpec& tgt, gf::SplitMix64& rng) {
  std::vector<ExtElement> es;
  for (std::size_t r = 0; r < tgt.summands(); ++r)
    for (std::size_t c = 0; c < src.summands(); ++c) {
      int d = src.twists[c] - tgt.twists[r];
      if (d < 0 || d > ext::kNumVars)
        es.push_back(ExtElement(ext::kNumVars + 1));
      else
        es.push_back(random_element(alg, d, rng));
    }
  return EModuleMap(src, tgt, std::move(es));
}

}  // namespace

TEST_CASE("wedge basics") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  ExtElement e0 = alg.generator(0), e1 = alg.generator(1);
  ExtElement a = alg.wedge(e0, e1);
  ExtElement b = alg.wedge(e1, e0);
  CHECK(alg.add(a, b).is_zero());      // e0^e1 = -(e1^e0)
  CHECK(alg.wedge(e0, e0).is_zero());  // e0^e0 = 0
  // (e0^e1)^(e3^e4) has coefficient +1 on the lex-ordered basis vector
  ExtElement c = alg.wedge(alg.wedge(e0, e1),
                           alg.wedge(alg.generator(3), alg.generator(4)));
  CHECK(c.coeff(0b11011) == 1);
}

TEST_CASE("wedge overflow returns the explicit zero") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  ExtElement top = alg.monomial(0b11111, 1);
  ExtElement over = alg.wedge(top, alg.generator(0));
  CHECK(over.is_zero());
  CHECK(over.degree() > ext::kNumVars);
}

TEST_CASE("contraction sign convention") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  // e0 _| x0 = 1
  auto v = alg.contract_action(alg.generator(0), 0b00001);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == 1);
  // e1 _| (x0 ^ x1) = -x0
  v = alg.contract_action(alg.generator(1), 0b00011);
  REQUIRE(v.size() == 5);
  CHECK(v[ext::mask_index(0b00001)] == 4);
  // (e0 ^ e1) _| (x0 ^ x1) = -1
  v = alg.contract_action(alg.wedge(alg.generator(0), alg.generator(1)),
                          0b00011);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == 4);
}

TEST_CASE("anticommutativity and associativity on random triples") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  gf::SplitMix64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    int da = int(rng.below(3)), db = int(rng.below(3)), dc = int(rng.below(3));
    ExtElement a = random_element(alg, da, rng);
    ExtElement b = random_element(alg, db, rng);
    ExtElement c = random_element(alg, dc, rng);
    // graded anticommutativity: a^b = (-1)^{|a||b|} b^a
    ExtElement ab = alg.wedge(a, b), ba = alg.wedge(b, a);
    if (!ab.is_zero() || !ba.is_zero()) {
      ExtElement signed_ba = (da * db) % 2 ? alg.negate(ba) : ba;
      CHECK(alg.sub(ab, signed_ba).is_zero());
    }
    // associativity
    ExtElement l = alg.wedge(alg.wedge(a, b), c);
    ExtElement r = alg.wedge(a, alg.wedge(b, c));
    if (l.degree() <= ext::kNumVars && r.degree() <= ext::kNumVars)
      CHECK(alg.sub(l, r).is_zero());
    else
      CHECK((l.is_zero() && r.is_zero()));
  }
}

TEST_CASE("contraction pairs with wedge: <u^v, w> = <u, v _| w>") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  gf::SplitMix64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    int du = 1 + int(rng.below(2));
    int dv = 1 + int(rng.below(2));
    if (du + dv > ext::kNumVars) continue;
    ExtElement u = random_element(alg, du, rng);
    ExtElement v = random_element(alg, dv, rng);
    // full-degree pairing: w of weight du + dv
    for (unsigned w : ext::masks_of_weight(du + dv)) {
      auto lhs = alg.contract_action(alg.wedge(u, v), w);
      // v _| w, then u against the rest
      auto vw = alg.contract_action(v, w);
      uint8_t rhs = 0;
      const auto& masks = ext::masks_of_weight(du + dv - dv);
      for (std::size_t i = 0; i < vw.size(); ++i) {
        if (!vw[i]) continue;
        auto uu = alg.contract_action(u, masks[i]);
        rhs = alg.field().add(rhs, alg.field().mul(uu[0], vw[i]));
      }
      CHECK(lhs[0] == rhs);
    }
  }
}

TEST_CASE("graded piece of the identity map is the identity matrix") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  FreeModuleSpec spec{{0, 1, -1}};
  EModuleMap id = EModuleMap::identity(alg, spec);
  for (int d = -1; d <= 6; ++d) {
    gf::Matrix m = graded_piece_matrix(alg, id, d);
    CHECK(m == gf::Matrix::identity(alg.field(), spec.piece_dim(d)));
  }
}

TEST_CASE("functoriality of graded pieces under composition") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  gf::SplitMix64 rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    FreeModuleSpec a{{int(rng.below(3)), int(rng.below(3)) - 1}};
    FreeModuleSpec b{{int(rng.below(2)), int(rng.below(2)) - 1,
                      int(rng.below(2))}};
    FreeModuleSpec c{{-int(rng.below(3)), -1}};
    EModuleMap f = random_map(alg, a, b, rng);
    EModuleMap g = random_map(alg, b, c, rng);
    EModuleMap gf_ = compose(alg, g, f);
    auto [lo, hi] = a.degree_range();
    for (int d = lo - 1; d <= hi + 1; ++d) {
      gf::Matrix lhs = graded_piece_matrix(alg, gf_, d);
      gf::Matrix rhs = gf::multiply(graded_piece_matrix(alg, g, d),
                                    graded_piece_matrix(alg, f, d));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("compose with identity leaves a map unchanged") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  gf::SplitMix64 rng(5);
  FreeModuleSpec a{{1, 2}}, b{{0, 0, 0}};
  EModuleMap f = random_map(alg, a, b, rng);
  EModuleMap l = compose(alg, EModuleMap::identity(alg, b), f);
  EModuleMap r = compose(alg, f, EModuleMap::identity(alg, a));
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j) {
      CHECK(alg.sub(f.at(i, j), l.at(i, j)).is_zero());
      CHECK(alg.sub(f.at(i, j), r.at(i, j)).is_zero());
    }
}

TEST_CASE("compose rejects twist mismatches") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  gf::SplitMix64 rng(5);
  FreeModuleSpec a{{1}}, b{{0}}, c{{-1}};
  EModuleMap f = random_map(alg, a, b, rng);
  EModuleMap g = random_map(alg, a, c, rng);  // source twists (1), not (0)
  CHECK_THROWS_AS(compose(alg, g, f), std::invalid_argument);
}

TEST_CASE("module action matrices square to zero") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  FreeModuleSpec spec{{0, 2}};
  for (int i = 0; i < ext::kNumVars; ++i)
    for (int d = -2; d <= 5; ++d) {
      gf::Matrix a1 = ext::module_action_matrix(alg, spec, i, d);
      gf::Matrix a2 = ext::module_action_matrix(alg, spec, i, d + 1);
      gf::Matrix z = gf::multiply(a1, a2);
      CHECK(gf::rank_of(z) == 0);
    }
}

TEST_CASE("orientation-contraction inverse round-trips") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  gf::SplitMix64 rng(31);
  for (int k = 0; k <= ext::kNumVars; ++k) {
    std::vector<uint8_t> coeffs;
    for (int i = 0; i < ext::weight_dim(k); ++i)
      coeffs.push_back(uint8_t(rng.below(5)));
    ExtElement u = alg.from_w_coefficients(k, coeffs);
    auto back = alg.contract_action(u, ext::kFullMask);
    CHECK(back == coeffs);
  }
}

TEST_CASE("rendering") {
  ExteriorAlgebra alg{gf::PrimeField(5)};
  ExtElement u = alg.wedge(alg.generator(0), alg.generator(1));
  ExtElement v = alg.scale(alg.wedge(alg.generator(3), alg.generator(4)), 3);
  CHECK(alg.render(alg.add(u, v)) == "e0*e1 - 2*e3*e4");
  CHECK(alg.render(alg.zero(2)) == "0");
  CHECK(alg.render(alg.scalar(3)) == "-2");
}
