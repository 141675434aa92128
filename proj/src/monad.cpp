#include "rsurf/monad.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

namespace rsurf::monad {

using ext::EModuleMap;
using ext::ExtElement;
using ext::ExteriorAlgebra;
using ext::FreeModuleSpec;
using gf::Matrix;

namespace {

// entry helper: sum of signed e_i^e_j monomials, given as (i, j, sign) triples
ExtElement two_form(const ExteriorAlgebra& alg,
                    std::initializer_list<std::array<int, 3>> terms) {
  ExtElement u = alg.zero(2);
  for (const auto& t : terms) {
    ExtElement m = alg.wedge(alg.generator(t[0]), alg.generator(t[1]));
    if (t[2] < 0) m = alg.negate(m);
    u = alg.add(u, m);
  }
  return u;
}

}  // namespace

Candidate bundled_candidate(gf::PrimeField field) {
  Matrix c = Matrix::from_rows(
      field, {{2, 2, -2, 0, -2, 2, -1, 1, -1, -2},
              {1, -1, 2, 2, -1, 2, 2, 0, 2, -2},
              {1, -2, 1, -2, 0, -1, -2, 2, 1, -2},
              {-2, -1, -2, -1, 0, 2, 0, -1, 2, 1}});
  return Candidate{std::move(c), "bundled"};
}

Candidate candidate_from_json(const nlohmann::json& j) {
  if (!j.contains("p") || !j.contains("c"))
    throw std::invalid_argument("candidate file needs fields \"p\" and \"c\"");
  unsigned p = j.at("p").get<unsigned>();
  gf::PrimeField field(p);
  const auto& rows = j.at("c");
  if (!rows.is_array() || rows.size() != 4)
    throw std::invalid_argument("candidate matrix must have 4 rows");
  std::vector<std::vector<long long>> data;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 10)
      throw std::invalid_argument("candidate rows must have 10 entries");
    data.push_back(row.get<std::vector<long long>>());
  }
  return Candidate{Matrix::from_rows(field, data), "external"};
}

nlohmann::ordered_json candidate_to_json(const Candidate& cand) {
  nlohmann::ordered_json j;
  j["p"] = cand.c.field().modulus();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < cand.c.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t col = 0; col < cand.c.cols(); ++col)
      row.push_back(int(cand.c(r, col)));
    rows.push_back(row);
  }
  j["c"] = rows;
  return j;
}

EModuleMap build_B1(const ExteriorAlgebra& alg) {
  FreeModuleSpec src{{1, 1}}, tgt{{0, 0, 0}};
  std::vector<ExtElement> es{alg.generator(0), alg.generator(1),
                             alg.generator(1), alg.generator(2),
                             alg.generator(3), alg.generator(4)};
  return EModuleMap(src, tgt, std::move(es));
}

EModuleMap canonical_phi(const ExteriorAlgebra& alg) {
  FreeModuleSpec src{{0, 0, 0}};
  FreeModuleSpec tgt{std::vector<int>(10, -2)};
  ExtElement z = alg.zero(2);
  std::vector<ExtElement> es{
      z, z, two_form(alg, {{{3, 4, 1}}}),
      z, two_form(alg, {{{3, 4, -1}}}), two_form(alg, {{{2, 3, 1}}, {{1, 4, -1}}}),
      two_form(alg, {{{3, 4, -1}}}), z, two_form(alg, {{{1, 3, 1}}, {{0, 4, -1}}}),
      z, two_form(alg, {{{1, 4, 1}}, {{2, 3, -1}}}), two_form(alg, {{{1, 2, 1}}}),
      two_form(alg, {{{2, 3, 1}}, {{1, 4, -1}}}),
      two_form(alg, {{{1, 3, 1}}, {{0, 4, -1}}}), two_form(alg, {{{0, 2, -1}}}),
      two_form(alg, {{{0, 4, 1}}, {{1, 3, -1}}}), z, two_form(alg, {{{0, 1, 1}}}),
      z, two_form(alg, {{{1, 2, 1}}}), z,
      two_form(alg, {{{1, 2, 1}}}), two_form(alg, {{{0, 2, 1}}}), z,
      two_form(alg, {{{0, 2, 1}}}), two_form(alg, {{{0, 1, 1}}}), z,
      two_form(alg, {{{0, 1, 1}}}), z, z};
  return EModuleMap(src, tgt, std::move(es));
}

PhiDerivation derive_phi(const ExteriorAlgebra& alg) {
  EModuleMap B1 = build_B1(alg);
  Matrix piece2 = graded_piece_matrix(alg, B1, 2);  // 30 x 20
  // Echelonize the image transposed; non-pivot coordinates give a canonical
  // basis of the quotient T, and the quotient map q: K^30 -> K^10 is
  // "reduce by the echelon rows, read off the free coordinates".
  gf::RrefResult im = gf::rref_decompose(piece2.transpose());
  std::size_t n = piece2.rows();
  if (n - im.rank != 10)
    throw std::logic_error("coker of B1 in degree 2 does not have dim 10");
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : im.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  const gf::PrimeField& F = alg.field();
  Matrix q(F, 10, n);
  for (std::size_t j = 0; j < free_cols.size(); ++j) q.set(j, free_cols[j], 1);
  for (std::size_t i = 0; i < im.rank; ++i)
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
      uint8_t v = im.R(i, free_cols[j]);
      if (v) q.set(j, im.pivots[i], F.neg(v));
    }
  // Entry (t, c) of phi is the 2-form pairing to row t of q restricted to
  // source summand c: q(t, c*10 + idx(S)) = phi_{t,c} _| x_S. The pairing
  // e_M _| x_S = -delta_{M,S} on 2-masks, so coefficients flip sign.
  FreeModuleSpec src{{0, 0, 0}};
  FreeModuleSpec tgt{std::vector<int>(10, -2)};
  const auto& masks2 = ext::masks_of_weight(2);
  std::vector<ExtElement> es;
  es.reserve(30);
  for (std::size_t t = 0; t < 10; ++t)
    for (std::size_t c = 0; c < 3; ++c) {
      ExtElement u = alg.zero(2);
      for (std::size_t k = 0; k < masks2.size(); ++k) {
        uint8_t v = q(t, c * masks2.size() + k);
        if (!v) continue;
        int sg = ext::contract_sign(masks2[k], masks2[k]);
        u.set_coeff(masks2[k], sg < 0 ? F.neg(v) : v);
      }
      es.push_back(u);
    }
  EModuleMap phi(src, tgt, std::move(es));
  return PhiDerivation{std::move(phi), n - im.rank};
}

std::optional<Matrix> phi_change_of_basis(const ExteriorAlgebra& alg,
                                          const EModuleMap& a,
                                          const EModuleMap& b) {
  // Solve g * A2 = B2 on the degree-2 pieces; both are 10x30 of rank 10 with
  // equal kernels when the presentations agree, and then g is unique.
  Matrix a2 = graded_piece_matrix(alg, a, 2);
  Matrix b2 = graded_piece_matrix(alg, b, 2);
  auto gt = gf::solve_linear(a2.transpose(), b2.transpose());
  if (!gt) return std::nullopt;
  Matrix g = gt->transpose();
  if (gf::rank_of(g) != g.rows()) return std::nullopt;
  // exact check, entry by entry: b == g . a as maps
  Matrix ga = gf::multiply(g, a2);
  if (!(ga == b2)) return std::nullopt;
  return g;
}

MonadContext::MonadContext(unsigned p)
    : alg_(gf::PrimeField(p)),
      B1_(build_B1(alg_)),
      phi_(canonical_phi(alg_)),
      phi3_(graded_piece_matrix(alg_, phi_, 3)),
      b1_3_(graded_piece_matrix(alg_, B1_, 3)) {
  if (!compose(alg_, phi_, B1_).is_zero())
    throw std::logic_error("phi does not annihilate B1");
  Matrix phi2 = graded_piece_matrix(alg_, phi_, 2);
  if (gf::rank_of(phi2) != 10)
    throw std::logic_error("phi is not surjective onto T");
  if (gf::rank_of(b1_3_) != 10)
    throw std::logic_error("B1 degree-3 piece is not injective");
}

EModuleMap MonadContext::build_C(const Matrix& c) const {
  // C = c * phi: 4x3 matrix of two-forms, 3w -> 4w(-2).
  FreeModuleSpec src{{0, 0, 0}};
  FreeModuleSpec tgt{std::vector<int>(4, -2)};
  std::vector<ExtElement> es;
  es.reserve(12);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t j = 0; j < 3; ++j) {
      ExtElement acc = alg_.zero(2);
      for (std::size_t t = 0; t < 10; ++t) {
        uint8_t v = c(k, t);
        if (!v) continue;
        acc = alg_.add(acc, alg_.scale(phi_.at(t, j), v));
      }
      es.push_back(acc);
    }
  return EModuleMap(src, tgt, std::move(es));
}

Matrix MonadContext::membership_matrix(const Matrix& c) const {
  // (c (x) I_5) * phi3: rows blocked by the 4 target summands (5 rows each).
  const gf::PrimeField& F = alg_.field();
  Matrix m(F, 20, phi3_.cols());
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t w = 0; w < 5; ++w) {
      uint8_t* out = m.row_ptr(k * 5 + w);
      std::vector<uint32_t> acc(phi3_.cols(), 0);
      for (std::size_t t = 0; t < 10; ++t) {
        uint32_t v = c(k, t);
        if (!v) continue;
        const uint8_t* src = phi3_.row_ptr(t * 5 + w);
        for (std::size_t j = 0; j < phi3_.cols(); ++j) acc[j] += v * src[j];
      }
      for (std::size_t j = 0; j < phi3_.cols(); ++j)
        out[j] = uint8_t(acc[j] % F.modulus());
    }
  }
  return m;
}

Membership membership_test(const MonadContext& ctx, const Candidate& cand) {
  if (cand.c.rows() != 4 || cand.c.cols() != 10)
    return {MembershipStatus::InvalidCandidate, 0};
  if (gf::rank_of(cand.c) != 4) return {MembershipStatus::InvalidCandidate, 0};
  Matrix mc = ctx.membership_matrix(cand.c);
  unsigned corank = unsigned(20 - gf::rank_of(mc));
  return {corank == 2 ? MembershipStatus::Member : MembershipStatus::NonMember,
          corank};
}

namespace {

// Lift a basis of ker(M_C)/im(B1 deg 3) to columns of two-forms.
std::optional<EModuleMap> lift_B2(const MonadContext& ctx, const Matrix& mc) {
  const ExteriorAlgebra& alg = ctx.alg();
  Matrix ker = gf::kernel_basis(mc);  // 30 x nullity
  std::vector<std::size_t> picks =
      gf::complement_columns(ctx.B1_piece3(), ker);
  if (picks.size() != 2) return std::nullopt;
  FreeModuleSpec src{{2, 2}};
  FreeModuleSpec tgt{{0, 0, 0}};
  std::vector<ExtElement> cols[2];
  for (int j = 0; j < 2; ++j) {
    for (int s = 0; s < 3; ++s) {
      std::vector<uint8_t> comp(10);
      for (int i = 0; i < 10; ++i)
        comp[i] = ker(std::size_t(s * 10 + i), picks[j]);
      cols[j].push_back(alg.from_w_coefficients(3, comp));
    }
  }
  std::vector<ExtElement> es;
  for (int r = 0; r < 3; ++r)
    for (int j = 0; j < 2; ++j) es.push_back(cols[j][r]);
  return EModuleMap(src, tgt, std::move(es));
}

}  // namespace

MonadData build_monad(const MonadContext& ctx, const Candidate& cand) {
  const ExteriorAlgebra& alg = ctx.alg();
  MonadData out{MonadStatus::Ok,
                0,
                0,
                ctx.B1(),
                ctx.phi(),
                EModuleMap::zero(FreeModuleSpec{}, FreeModuleSpec{}),
                EModuleMap::zero(FreeModuleSpec{}, FreeModuleSpec{}),
                EModuleMap::zero(FreeModuleSpec{}, FreeModuleSpec{}),
                EModuleMap::zero(FreeModuleSpec{}, FreeModuleSpec{})};
  Membership mem = membership_test(ctx, cand);
  out.corank = mem.corank;
  if (mem.status == MembershipStatus::InvalidCandidate) {
    out.status = MonadStatus::InvalidCandidate;
    return out;
  }
  out.C = ctx.build_C(cand.c);
  if (mem.status != MembershipStatus::Member) {
    out.status = MonadStatus::NotAMember;
    return out;
  }
  out.middle_homology_dim = int(mem.corank);
  Matrix mc = ctx.membership_matrix(cand.c);
  auto b2 = lift_B2(ctx, mc);
  if (!b2) {
    out.status = MonadStatus::NotAMember;
    return out;
  }
  out.B2 = *b2;
  if (!compose(alg, out.C, out.B2).is_zero())
    throw std::logic_error("C o B2 != 0 for a lifted homology basis");
  // B = (B2 | B1): 2w(2) (+) 2w(1) -> 3w
  FreeModuleSpec bsrc{{2, 2, 1, 1}};
  FreeModuleSpec btgt{{0, 0, 0}};
  std::vector<ExtElement> bes;
  for (int r = 0; r < 3; ++r) {
    bes.push_back(out.B2.at(r, 0));
    bes.push_back(out.B2.at(r, 1));
    bes.push_back(ctx.B1().at(r, 0));
    bes.push_back(ctx.B1().at(r, 1));
  }
  out.B = EModuleMap(bsrc, btgt, std::move(bes));
  // A: the kernel generators of B in internal degree 2 (twist 3). Kernel
  // generators of other twists belong to the rest of the Tate resolution,
  // not to the monad.
  res::KernelGenerators gens = res::minimal_kernel_generators(alg, out.B);
  res::KernelGenerators deg2;
  bool above2 = false;
  std::size_t count2 = 0;
  for (const auto& [d, m] : gens.by_degree) {
    if (d > 2 && m.cols() > 0) above2 = true;
    if (d == 2) {
      count2 = m.cols();
      deg2.by_degree.push_back({d, m});
    }
  }
  if (above2 || count2 != 4) {
    out.status = MonadStatus::MonadDegenerate;
    return out;
  }
  out.A = res::generators_to_map(alg, out.B.source(), deg2);
  if (!compose(alg, out.B, out.A).is_zero())
    throw std::logic_error("B o A != 0 for extracted syzygies");
  return out;
}

std::string to_string(FingerprintType t) {
  switch (t) {
    case FingerprintType::Type1: return "Type1";
    case FingerprintType::Type2: return "Type2";
    default: return "Other";
  }
}

namespace {

res::BettiTable make_reference(long corner) {
  res::BettiTable t;
  t.counts[{0, -2}] = 4;
  t.counts[{1, 0}] = 3;
  t.counts[{2, 1}] = 2;
  t.counts[{2, 2}] = 2;
  t.counts[{3, 3}] = 4;
  t.counts[{3, 4}] = corner;
  return t;
}

}  // namespace

const res::BettiTable& type1_reference_table() {
  static const res::BettiTable t = make_reference(5);
  return t;
}

const res::BettiTable& type2_reference_table() {
  static const res::BettiTable t = make_reference(10);
  return t;
}

Fingerprint betti_fingerprint(const MonadContext& ctx, const Candidate& cand) {
  EModuleMap C = ctx.build_C(cand.c);
  res::Resolution r =
      res::minimal_resolution(ctx.alg(), res::PresentedEModule{C}, 3);
  res::BettiTable t = res::betti_table_of(r);
  FingerprintType type = FingerprintType::Other;
  if (t == type1_reference_table()) type = FingerprintType::Type1;
  else if (t == type2_reference_table()) type = FingerprintType::Type2;
  return Fingerprint{type, std::move(t)};
}

std::optional<int> tangent_codim(const MonadContext& ctx,
                                 const Candidate& cand) {
  Membership mem = membership_test(ctx, cand);
  if (mem.status != MembershipStatus::Member) return std::nullopt;
  const gf::PrimeField& F = ctx.field();
  Matrix mc = ctx.membership_matrix(cand.c);
  // iota: a 2-dim complement of im(B1 deg 3) inside ker(M_C)
  Matrix ker = gf::kernel_basis(mc);
  std::vector<std::size_t> picks = gf::complement_columns(ctx.B1_piece3(), ker);
  Matrix iota(F, 30, 2);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 30; ++i) iota.set(i, j, ker(i, picks[std::size_t(j)]));
  // pi: quotient of K^20 by im(M_C), as the 2 free coordinates after rref
  gf::RrefResult im = gf::rref_decompose(mc.transpose());
  std::vector<bool> is_pivot(20, false);
  for (std::size_t c : im.pivots) is_pivot[c] = true;
  Matrix pi(F, 2, 20);
  std::size_t row = 0;
  for (std::size_t c = 0; c < 20; ++c) {
    if (is_pivot[c]) continue;
    pi.set(row, c, 1);
    for (std::size_t i = 0; i < im.rank; ++i) {
      uint8_t v = im.R(i, c);
      if (v) pi.set(row, im.pivots[i], F.neg(v));
    }
    ++row;
  }
  // For direction E_{kl}: M' rows live in block k and equal rows of the
  // l-block of phi3. D = pi_k . (phi3_l . iota).
  Matrix phi_iota = gf::multiply(ctx.phi_piece3(), iota);  // 50 x 2
  Matrix directions(F, 40, 4);
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 10; ++l) {
      // pi block k: columns 5k..5k+5
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          uint32_t acc = 0;
          for (int w = 0; w < 5; ++w)
            acc += uint32_t(pi(a, std::size_t(k * 5 + w))) *
                   phi_iota(std::size_t(l * 5 + w), b);
          directions.set(std::size_t(k * 10 + l), std::size_t(a * 2 + b),
                         uint8_t(acc % F.modulus()));
        }
    }
  }
  return int(gf::rank_of(directions));
}

std::optional<DimensionLedger> dimension_ledger(const MonadContext& ctx,
                                                const Candidate& cand) {
  auto codim = tangent_codim(ctx, cand);
  if (!codim) return std::nullopt;
  DimensionLedger l;
  l.grassmannian_dim = 4 * (10 - 4);
  l.codim = *codim;
  l.strata_dim = l.grassmannian_dim - l.codim;
  l.scroll_dim = 18;
  l.hilbert_dim = l.strata_dim + l.scroll_dim;
  return l;
}

Matrix trial_matrix(gf::PrimeField field, uint64_t seed, uint64_t trial) {
  gf::SplitMix64 rng(seed ^ (0x9E3779B97F4A7C15ull * (trial + 1)));
  while (true) {
    Matrix c = gf::random_matrix(field, 4, 10, rng);
    if (gf::rank_of(c) == 4) return c;
  }
}

SearchReport random_search(unsigned p, uint64_t trials, uint64_t seed,
                           unsigned workers, const std::atomic<bool>* cancel) {
  auto t0 = std::chrono::steady_clock::now();
  if (workers == 0) workers = 1;
  MonadContext ctx(p);
  SearchReport report;
  report.trials = trials;
  report.seed = seed;
  report.prime = p;
  report.workers = workers;

  std::vector<std::vector<SearchHit>> hits(workers);
  std::vector<uint64_t> rank_hits(workers, 0);
  std::vector<uint64_t> completed(workers, 0);
  auto work = [&](unsigned w) {
    MonadContext local(p);
    gf::PrimeField field(p);
    for (uint64_t t = w; t < trials; t += workers) {
      if (cancel && cancel->load(std::memory_order_relaxed)) return;
      Matrix c = trial_matrix(field, seed, t);
      Matrix mc = local.membership_matrix(c);
      unsigned corank = unsigned(20 - gf::rank_of(mc));
      ++completed[w];
      if (corank != 2) continue;
      ++rank_hits[w];
      Fingerprint fp =
          betti_fingerprint(local, Candidate{c, "search"});
      hits[w].push_back(SearchHit{t, corank, fp.type, c});
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (unsigned w = 0; w < workers; ++w) {
    report.rank_hits += rank_hits[w];
    report.trials_completed += completed[w];
    for (auto& h : hits[w]) report.hits.push_back(std::move(h));
  }
  report.truncated = report.trials_completed < trials;
  std::sort(report.hits.begin(), report.hits.end(),
            [](const SearchHit& a, const SearchHit& b) {
              return a.trial < b.trial;
            });
  for (const auto& h : report.hits) {
    if (h.fingerprint == FingerprintType::Type1) ++report.fingerprint1_hits;
    else if (h.fingerprint == FingerprintType::Type2) ++report.fingerprint2_hits;
    else ++report.other_fingerprints;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

nlohmann::ordered_json search_report_to_json(const SearchReport& r,
                                             bool include_timings) {
  nlohmann::ordered_json j;
  j["schema"] = "rsurf.search/1";
  j["prime"] = r.prime;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["rankHits"] = r.rank_hits;
  j["fingerprint1Hits"] = r.fingerprint1_hits;
  j["fingerprint2Hits"] = r.fingerprint2_hits;
  j["otherFingerprints"] = r.other_fingerprints;
  nlohmann::ordered_json hits = nlohmann::ordered_json::array();
  for (const auto& h : r.hits) {
    nlohmann::ordered_json hj;
    hj["trial"] = h.trial;
    hj["corank"] = h.corank;
    hj["fingerprint"] = to_string(h.fingerprint);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < 4; ++a) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t b = 0; b < 10; ++b) row.push_back(int(h.c(a, b)));
      rows.push_back(row);
    }
    hj["c"] = rows;
    hits.push_back(hj);
  }
  j["candidates"] = hits;
  j["truncated"] = r.truncated;
  if (r.truncated) j["trialsCompleted"] = r.trials_completed;
  if (include_timings)
    j["wallTimeSeconds"] = r.wall_seconds;
  else
    j["wallTimeSeconds"] = nullptr;
  return j;
}

}  // namespace rsurf::monad
