#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

#include "rsurf/monad.hpp"

using namespace rsurf;
using ext::EModuleMap;
using ext::ExteriorAlgebra;
using gf::Matrix;
using gf::PrimeField;

namespace {

monad::Candidate random_candidate(const PrimeField& F, gf::SplitMix64& rng) {
  while (true) {
    Matrix c = gf::random_matrix(F, 4, 10, rng);
    if (gf::rank_of(c) == 4) return monad::Candidate{c, "test"};
  }
}

}  // namespace

TEST_CASE("B1 entries and piece ranks") {
  ExteriorAlgebra alg{PrimeField(5)};
  EModuleMap B1 = monad::build_B1(alg);
  CHECK(alg.render(B1.at(0, 0)) == "e0");
  CHECK(alg.render(B1.at(0, 1)) == "e1");
  CHECK(alg.render(B1.at(1, 0)) == "e1");
  CHECK(alg.render(B1.at(1, 1)) == "e2");
  CHECK(alg.render(B1.at(2, 0)) == "e3");
  CHECK(alg.render(B1.at(2, 1)) == "e4");
  // degree-2 piece: 30x20 of full column rank, cokernel of dimension 10
  gf::Matrix p2 = graded_piece_matrix(alg, B1, 2);
  CHECK(p2.rows() == 30);
  CHECK(p2.cols() == 20);
  // two independent rank routes: row echelon of the matrix and of its
  // transpose
  CHECK(gf::rank_of(p2) == 20);
  CHECK(gf::rank_of(p2.transpose()) == 20);
  // degree-3 piece: 30x10 of full column rank
  gf::Matrix p3 = graded_piece_matrix(alg, B1, 3);
  CHECK(p3.rows() == 30);
  CHECK(p3.cols() == 10);
  CHECK(gf::rank_of(p3) == 10);
}

TEST_CASE("derive_phi: dim T = 10 and both presentations agree up to GL10") {
  ExteriorAlgebra alg{PrimeField(5)};
  monad::PhiDerivation der = monad::derive_phi(alg);
  CHECK(der.dim_T == 10);
  EModuleMap B1 = monad::build_B1(alg);
  // the derived phi annihilates B1 and is onto T
  CHECK(compose(alg, der.phi, B1).is_zero());
  CHECK(gf::rank_of(graded_piece_matrix(alg, der.phi, 2)) == 10);
  // the fixed phi satisfies the same postconditions
  EModuleMap fixed = monad::canonical_phi(alg);
  CHECK(compose(alg, fixed, B1).is_zero());
  CHECK(gf::rank_of(graded_piece_matrix(alg, fixed, 2)) == 10);
  // related by an invertible change of basis, exactly
  auto g = monad::phi_change_of_basis(alg, der.phi, fixed);
  REQUIRE(g.has_value());
  CHECK(gf::rank_of(*g) == 10);
  // and the transformed entries agree as two-forms
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      ext::ExtElement acc = alg.zero(2);
      for (std::size_t t = 0; t < 10; ++t)
        acc = alg.add(acc, alg.scale(der.phi.at(t, c), (*g)(r, t)));
      CHECK(alg.sub(acc, fixed.at(r, c)).is_zero());
    }
}

TEST_CASE("membership: the bundled candidate has corank exactly 2") {
  monad::MonadContext ctx(5);
  monad::Candidate cand = monad::bundled_candidate(ctx.field());
  monad::Membership mem = monad::membership_test(ctx, cand);
  CHECK(mem.status == monad::MembershipStatus::Member);
  CHECK(mem.corank == 2);
}

TEST_CASE("the induced 20x20 quotient map has a 2-dimensional kernel at the "
          "bundled candidate") {
  // M_C kills im(B1 deg 3), so it factors through the 20-dimensional
  // quotient; membership is corank 2 of that square matrix
  monad::MonadContext ctx(5);
  monad::Candidate cand = monad::bundled_candidate(ctx.field());
  Matrix mc = ctx.membership_matrix(cand.c);
  // quotient coordinates: complete im(B1 deg 3) by 20 of the 30 unit vectors
  Matrix id30 = Matrix::identity(ctx.field(), 30);
  auto comp = gf::complement_columns(ctx.B1_piece3(), id30);
  REQUIRE(comp.size() == 20);
  Matrix section(ctx.field(), 30, 20);
  for (std::size_t j = 0; j < 20; ++j) section.set(comp[j], j, 1);
  Matrix mbar = gf::multiply(mc, section);  // 20 x 20
  CHECK(mbar.rows() == 20);
  CHECK(mbar.cols() == 20);
  CHECK(gf::rank_of(mbar) == 18);
  CHECK(gf::kernel_basis(mbar).cols() == 2);
}

TEST_CASE("membership matrix agrees with the graded piece of C") {
  monad::MonadContext ctx(5);
  gf::SplitMix64 rng(2024);
  for (int t = 0; t < 5; ++t) {
    monad::Candidate cand = random_candidate(ctx.field(), rng);
    EModuleMap C = ctx.build_C(cand.c);
    CHECK(graded_piece_matrix(ctx.alg(), C, 3) ==
          ctx.membership_matrix(cand.c));
    // C o B1 = 0 for every candidate
    CHECK(compose(ctx.alg(), C, ctx.B1()).is_zero());
  }
}

TEST_CASE("rank-deficient candidates are invalid") {
  monad::MonadContext ctx(5);
  Matrix c(ctx.field(), 4, 10);
  for (int j = 0; j < 10; ++j) {
    c.set(0, std::size_t(j), uint8_t(j % 5));
    c.set(1, std::size_t(j), uint8_t(j % 5));  // two equal rows
    c.set(2, std::size_t(j), uint8_t((j * j) % 5));
    c.set(3, std::size_t(j), uint8_t((j + 1) % 5));
  }
  monad::Membership mem = monad::membership_test(ctx, {c, "bad"});
  CHECK(mem.status == monad::MembershipStatus::InvalidCandidate);
}

TEST_CASE("generic candidates have corank 0; higher coranks are rare") {
  // The corank >= 1 stratum has codimension 1 inside G(10,4), so a fraction
  // of roughly const/q of the candidates lands there; corank 2 is down at
  // the q^-4 scale. Measured rates over F_5: about 72% corank 0, about 1%
  // corank 2.
  monad::MonadContext ctx(5);
  gf::SplitMix64 rng(555);
  int full = 0, member = 0, deep = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    monad::Candidate cand = random_candidate(ctx.field(), rng);
    unsigned corank = monad::membership_test(ctx, cand).corank;
    if (corank == 0) ++full;
    if (corank == 2) ++member;
    if (corank >= 3) ++deep;
  }
  CHECK(full >= trials * 60 / 100);
  CHECK(member <= trials * 5 / 100);
  CHECK(deep <= trials * 1 / 100);
}

TEST_CASE("membership is invariant under left GL4 action") {
  monad::MonadContext ctx(5);
  gf::SplitMix64 rng(31337);
  monad::Candidate base_cand = monad::bundled_candidate(ctx.field());
  unsigned base_corank = monad::membership_test(ctx, base_cand).corank;
  auto random_gl4 = [&]() {
    while (true) {
      Matrix g = gf::random_matrix(ctx.field(), 4, 4, rng);
      if (gf::rank_of(g) == 4) return g;
    }
  };
  for (int t = 0; t < 100; ++t) {
    Matrix g = random_gl4();
    monad::Candidate moved{gf::multiply(g, base_cand.c), "gl4"};
    CHECK(monad::membership_test(ctx, moved).corank == base_corank);
  }
  // and on a few random candidates
  for (int t = 0; t < 20; ++t) {
    monad::Candidate cand = random_candidate(ctx.field(), rng);
    unsigned corank = monad::membership_test(ctx, cand).corank;
    Matrix g = random_gl4();
    monad::Candidate moved{gf::multiply(g, cand.c), "gl4"};
    CHECK(monad::membership_test(ctx, moved).corank == corank);
  }
}

TEST_CASE("monad assembly on the bundled candidate") {
  monad::MonadContext ctx(5);
  monad::Candidate cand = monad::bundled_candidate(ctx.field());
  monad::MonadData data = monad::build_monad(ctx, cand);
  REQUIRE(data.status == monad::MonadStatus::Ok);
  CHECK(data.middle_homology_dim == 2);
  // B2: 3x2 of two-forms with C o B2 = 0
  CHECK(data.B2.rows() == 3);
  CHECK(data.B2.cols() == 2);
  CHECK(compose(ctx.alg(), data.C, data.B2).is_zero());
  // A: exactly 4 generators of twist 3; entries 1-forms into the w(2) rows
  // and 2-forms into the w(1) rows
  REQUIRE(data.A.cols() == 4);
  for (int c = 0; c < 4; ++c) CHECK(data.A.source().twists[c] == 3);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      const auto& e = data.A.at(r, c);
      if (e.is_zero()) continue;
      CHECK(e.degree() == (r < 2 ? 1 : 2));
    }
  CHECK(compose(ctx.alg(), data.B, data.A).is_zero());
  CHECK(compose(ctx.alg(), data.C, data.B).is_zero());
  // Euler bookkeeping in degree 2: dim ker(B deg 2) = 2*10+2*5-3*10+4 = 4
  gf::Matrix b2piece = graded_piece_matrix(ctx.alg(), data.B, 2);
  CHECK(b2piece.cols() == 30);
  CHECK(b2piece.rows() == 30);
  CHECK(b2piece.cols() - gf::rank_of(b2piece) == 4);
}

TEST_CASE("B2 gauge freedom preserves the monad") {
  monad::MonadContext ctx(5);
  monad::Candidate cand = monad::bundled_candidate(ctx.field());
  monad::MonadData data = monad::build_monad(ctx, cand);
  REQUIRE(data.status == monad::MonadStatus::Ok);
  gf::SplitMix64 rng(9);
  // B2' = B2 + B1 . Lambda for a random 2x2 matrix of linear forms
  ext::FreeModuleSpec lsrc{{2, 2}}, ltgt{{1, 1}};
  std::vector<ext::ExtElement> les;
  for (int i = 0; i < 4; ++i) {
    ext::ExtElement u = ctx.alg().zero(1);
    for (int v = 0; v < 5; ++v)
      u = ctx.alg().add(
          u, ctx.alg().scale(ctx.alg().generator(v), uint8_t(rng.below(5))));
    les.push_back(u);
  }
  EModuleMap lambda(lsrc, ltgt, std::move(les));
  EModuleMap gauge = compose(ctx.alg(), ctx.B1(), lambda);
  EModuleMap b2p = add_maps(ctx.alg(), data.B2, gauge);
  CHECK(compose(ctx.alg(), data.C, b2p).is_zero());
  // columns stay independent modulo B1 * (linear forms): the degree-3 piece
  // of (B2' | B1) still has rank 12
  std::vector<ext::ExtElement> bes;
  for (int r = 0; r < 3; ++r) {
    bes.push_back(b2p.at(std::size_t(r), 0));
    bes.push_back(b2p.at(std::size_t(r), 1));
    bes.push_back(ctx.B1().at(std::size_t(r), 0));
    bes.push_back(ctx.B1().at(std::size_t(r), 1));
  }
  EModuleMap bp(ext::FreeModuleSpec{{2, 2, 1, 1}}, ext::FreeModuleSpec{{0, 0, 0}},
                std::move(bes));
  CHECK(gf::rank_of(graded_piece_matrix(ctx.alg(), bp, 3)) == 12);
}

TEST_CASE("fingerprint of the bundled candidate is Type1") {
  monad::MonadContext ctx(5);
  monad::Candidate cand = monad::bundled_candidate(ctx.field());
  monad::Fingerprint fp = monad::betti_fingerprint(ctx, cand);
  CHECK(fp.type == monad::FingerprintType::Type1);
  CHECK(fp.table == monad::type1_reference_table());
}

TEST_CASE("tangent codimension at the bundled candidate is 4") {
  monad::MonadContext ctx(5);
  monad::Candidate cand = monad::bundled_candidate(ctx.field());
  auto codim = monad::tangent_codim(ctx, cand);
  REQUIRE(codim.has_value());
  CHECK(*codim == 4);
  auto ledger = monad::dimension_ledger(ctx, cand);
  REQUIRE(ledger.has_value());
  CHECK(ledger->grassmannian_dim == 24);
  CHECK(ledger->strata_dim == 20);
  CHECK(ledger->scroll_dim == 18);
  CHECK(ledger->hilbert_dim == 38);
  // non-members have no tangent stratum
  gf::SplitMix64 rng(4242);
  monad::Candidate random = random_candidate(ctx.field(), rng);
  if (monad::membership_test(ctx, random).corank != 2)
    CHECK(!monad::tangent_codim(ctx, random).has_value());
}

TEST_CASE("GL4 orbit directions are tangent to the stratum") {
  // first-order: moving c inside its own row space does not change the
  // induced map on ker x coker, so the 16 directions g*c contribute nothing
  monad::MonadContext ctx(5);
  monad::Candidate cand = monad::bundled_candidate(ctx.field());
  Matrix mc = ctx.membership_matrix(cand.c);
  Matrix ker = gf::kernel_basis(mc);
  auto picks = gf::complement_columns(ctx.B1_piece3(), ker);
  REQUIRE(picks.size() == 2);
  Matrix iota(ctx.field(), 30, 2);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 30; ++i)
      iota.set(std::size_t(i), std::size_t(j), ker(std::size_t(i), picks[std::size_t(j)]));
  gf::SplitMix64 rng(11);
  for (int t = 0; t < 10; ++t) {
    Matrix g = gf::random_matrix(ctx.field(), 4, 4, rng);
    Matrix cprime = gf::multiply(g, cand.c);
    Matrix mprime = ctx.membership_matrix(cprime);
    // pi o M' o iota = 0: the image of M' on ker(M) lies inside im(M)
    Matrix image = gf::multiply(mprime, iota);
    // check im(M' iota) is contained in im(M): rank does not grow
    Matrix joined = Matrix::hcat(mc, image);
    CHECK(gf::rank_of(joined) == gf::rank_of(mc));
  }
}

TEST_CASE("candidate json round-trip and fixture file") {
  monad::MonadContext ctx(5);
  monad::Candidate cand = monad::bundled_candidate(ctx.field());
  nlohmann::ordered_json j = monad::candidate_to_json(cand);
  monad::Candidate back = monad::candidate_from_json(j);
  CHECK(back.c == cand.c);
  // the bundled fixture file holds the same matrix
  std::ifstream is(std::string(RSURF_DATA_DIR) + "/bundled_candidate.json");
  REQUIRE(is.good());
  nlohmann::json fixture;
  is >> fixture;
  monad::Candidate from_file = monad::candidate_from_json(fixture);
  CHECK(from_file.c == cand.c);
}

TEST_CASE("search: zero trials gives an empty deterministic report") {
  monad::SearchReport r = monad::random_search(5, 0, 1, 1);
  CHECK(r.trials == 0);
  CHECK(r.rank_hits == 0);
  CHECK(r.hits.empty());
  auto j1 = monad::search_report_to_json(r, false);
  auto j2 = monad::search_report_to_json(monad::random_search(5, 0, 1, 4), false);
  CHECK(j1.dump() == j2.dump());
}

TEST_CASE("search determinism across worker counts") {
  const uint64_t trials = 2000, seed = 12;
  monad::SearchReport a = monad::random_search(5, trials, seed, 1);
  monad::SearchReport b = monad::random_search(5, trials, seed, 8);
  CHECK(monad::search_report_to_json(a, false).dump() ==
        monad::search_report_to_json(b, false).dump());
}

TEST_CASE("trial matrices are reproducible and full rank") {
  gf::PrimeField F(5);
  for (uint64_t t = 0; t < 50; ++t) {
    Matrix a = monad::trial_matrix(F, 7, t);
    Matrix b = monad::trial_matrix(F, 7, t);
    CHECK(a == b);
    CHECK(gf::rank_of(a) == 4);
  }
}

TEST_CASE("homology classes lift through the B1-image decomposition") {
  // every kernel vector of M_C splits as B1 . g + (combination of the two
  // homology representatives); consistency is forced by kernel membership
  monad::MonadContext ctx(5);
  monad::Candidate cand = monad::bundled_candidate(ctx.field());
  Matrix mc = ctx.membership_matrix(cand.c);
  Matrix ker = gf::kernel_basis(mc);
  auto picks = gf::complement_columns(ctx.B1_piece3(), ker);
  REQUIRE(picks.size() == 2);
  Matrix reps(ctx.field(), 30, 2);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 30; ++i)
      reps.set(std::size_t(i), std::size_t(j),
               ker(std::size_t(i), picks[std::size_t(j)]));
  Matrix system = Matrix::hcat(ctx.B1_piece3(), reps);
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    Matrix target(ctx.field(), 30, 1);
    for (int i = 0; i < 30; ++i)
      target.set(std::size_t(i), 0, ker(std::size_t(i), j));
    auto x = gf::solve_linear(system, target);
    REQUIRE(x.has_value());
    CHECK(gf::multiply(system, *x) == target);
  }
}

TEST_CASE("the prime is a runtime parameter") {
  // the pipeline runs over other small primes; rates scale like 1/q^4 so no
  // hits are expected in a short run, but everything must stay consistent
  monad::MonadContext ctx(7);
  gf::SplitMix64 rng(1);
  for (int t = 0; t < 50; ++t) {
    monad::Candidate cand = random_candidate(ctx.field(), rng);
    monad::Membership mem = monad::membership_test(ctx, cand);
    CHECK(mem.status != monad::MembershipStatus::InvalidCandidate);
    ext::EModuleMap C = ctx.build_C(cand.c);
    CHECK(compose(ctx.alg(), C, ctx.B1()).is_zero());
  }
  monad::SearchReport r = monad::random_search(7, 200, 5, 2);
  CHECK(r.trials == 200);
}

TEST_CASE("search report invariants and cancellation") {
  monad::SearchReport r = monad::random_search(5, 3000, 2024, 4);
  CHECK(r.fingerprint1_hits + r.fingerprint2_hits <= r.rank_hits);
  CHECK(r.rank_hits <= r.trials);
  CHECK(r.trials_completed == r.trials);
  CHECK_FALSE(r.truncated);
  // a pre-set cancel flag truncates immediately
  std::atomic<bool> cancel{true};
  monad::SearchReport t = monad::random_search(5, 3000, 2024, 4, &cancel);
  CHECK(t.truncated);
  CHECK(t.trials_completed == 0);
  // cancellation mid-run leaves a truncated partial report
  std::atomic<bool> later{false};
  std::thread killer([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    later.store(true);
  });
  monad::SearchReport u =
      monad::random_search(5, 200'000'000ull, 2024, 2, &later);
  killer.join();
  CHECK(u.truncated);
  CHECK(u.trials_completed < u.trials);
}
