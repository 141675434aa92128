#pragma once

// The monad construction pipeline: the fixed B1, the presentation phi of
// T = coker(B1 in degree 2), candidate sampling on G(10,4), the corank-2
// membership test, extraction of B2 and A, the Betti fingerprint, the
// tangent-space codimension, and the seeded random search.

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsurf/res.hpp"

#include "json.hpp"

namespace rsurf::monad {

/// A point of G(10,4): a full-rank 4x10 matrix over F_p.
struct Candidate {
  gf::Matrix c;
  std::string provenance;  // "external", "seed:<s>/trial:<t>", ...
};

Candidate bundled_candidate(gf::PrimeField field);
Candidate candidate_from_json(const nlohmann::json& j);
nlohmann::ordered_json candidate_to_json(const Candidate& cand);

/// 3x2 matrix of 1-forms 2w(1) -> 3w: ((e0,e1),(e1,e2),(e3,e4)).
ext::EModuleMap build_B1(const ext::ExteriorAlgebra& alg);

/// The fixed 10x3 matrix of two-forms presenting T; the pipeline's canonical
/// choice of basis for T (candidate matrices are written in this basis).
ext::EModuleMap canonical_phi(const ext::ExteriorAlgebra& alg);

struct PhiDerivation {
  ext::EModuleMap phi;   // echelon-derived 10x3 presentation of T
  std::size_t dim_T;     // must be 10
};

/// Derive a presentation of T = coker of the degree-2 piece of B1 from
/// scratch (echelon quotient basis). Throws std::logic_error if dim T != 10.
PhiDerivation derive_phi(const ext::ExteriorAlgebra& alg);

/// Invertible g with g * a = b (rowwise change of basis between two
/// presentations of T), if one exists.
std::optional<gf::Matrix> phi_change_of_basis(const ext::ExteriorAlgebra& alg,
                                              const ext::EModuleMap& a,
                                              const ext::EModuleMap& b);

/// Precomputed state shared by every per-candidate operation.
class MonadContext {
 public:
  explicit MonadContext(unsigned p);

  const ext::ExteriorAlgebra& alg() const { return alg_; }
  const gf::PrimeField& field() const { return alg_.field(); }
  const ext::EModuleMap& B1() const { return B1_; }
  const ext::EModuleMap& phi() const { return phi_; }
  /// Degree-3 piece of phi: 10*W <- 3*Lambda^3 W, cached for the search.
  const gf::Matrix& phi_piece3() const { return phi3_; }
  /// Degree-3 piece of B1 (30x10, full column rank).
  const gf::Matrix& B1_piece3() const { return b1_3_; }

  ext::EModuleMap build_C(const gf::Matrix& c) const;
  /// Degree-3 piece of C = c*phi as (c (x) I_5) * phi_piece3, 20x30.
  gf::Matrix membership_matrix(const gf::Matrix& c) const;

 private:
  ext::ExteriorAlgebra alg_;
  ext::EModuleMap B1_, phi_;
  gf::Matrix phi3_, b1_3_;
};

enum class MembershipStatus { InvalidCandidate, NonMember, Member };

struct Membership {
  MembershipStatus status;
  unsigned corank;  // 20 - rank of the degree-3 piece of C
};

Membership membership_test(const MonadContext& ctx, const Candidate& cand);

enum class FingerprintType { Type1, Type2, Other };

std::string to_string(FingerprintType t);

struct Fingerprint {
  FingerprintType type;
  res::BettiTable table;
};

/// Resolve coker(C) and classify its Betti data (steps 0..3) against the two
/// reference tables for this family. The calibration fixing coker(C) as the
/// fingerprint module is pinned by tests against the bundled candidate.
Fingerprint betti_fingerprint(const MonadContext& ctx, const Candidate& cand);

const res::BettiTable& type1_reference_table();
const res::BettiTable& type2_reference_table();

enum class MonadStatus {
  Ok,
  InvalidCandidate,
  NotAMember,       // middle homology dimension != 2
  MonadDegenerate,  // A does not have exactly 4 generators of twist 3
};

struct MonadData {
  MonadStatus status = MonadStatus::Ok;
  unsigned corank = 0;
  int middle_homology_dim = 0;
  ext::EModuleMap B1, phi, C, B2, B, A;
};

/// membership -> B2 lift -> A extraction, with the composite checks
/// C o B1 = C o B2 = B o A = 0 asserted along the way.
MonadData build_monad(const MonadContext& ctx, const Candidate& cand);

/// Rank of the map c' |-> pi o M_{C(c')} o iota into Hom(ker, coker) over all
/// 40 matrix directions; equals the codimension of the Zariski tangent space
/// of the corank-2 stratum inside T G(10,4). Requires corank exactly 2.
std::optional<int> tangent_codim(const MonadContext& ctx,
                                 const Candidate& cand);

struct DimensionLedger {
  int grassmannian_dim = 24;
  int codim = 0;
  int strata_dim = 0;
  int scroll_dim = 18;
  int hilbert_dim = 0;
};

std::optional<DimensionLedger> dimension_ledger(const MonadContext& ctx,
                                                const Candidate& cand);

struct SearchHit {
  uint64_t trial;
  unsigned corank;
  FingerprintType fingerprint;
  gf::Matrix c;
};

struct SearchReport {
  uint64_t trials = 0;
  uint64_t seed = 0;
  unsigned prime = 5;
  unsigned workers = 1;
  uint64_t rank_hits = 0;  // corank-2 count
  uint64_t fingerprint1_hits = 0;
  uint64_t fingerprint2_hits = 0;
  uint64_t other_fingerprints = 0;
  std::vector<SearchHit> hits;
  double wall_seconds = 0.0;
  bool truncated = false;       // interrupted before all trials ran
  uint64_t trials_completed = 0;
};

/// Deterministic in (trials, seed) regardless of worker count: trial t draws
/// its entries from splitmix64 seeded with (seed, t), redrawing whole
/// matrices of rank < 4. A set cancel flag stops the workers early; the
/// partial report is marked truncated.
SearchReport random_search(unsigned p, uint64_t trials, uint64_t seed,
                           unsigned workers,
                           const std::atomic<bool>* cancel = nullptr);

/// The matrix a trial draws, exposed for determinism tests.
gf::Matrix trial_matrix(gf::PrimeField field, uint64_t seed, uint64_t trial);

nlohmann::ordered_json search_report_to_json(const SearchReport& r,
                                             bool include_timings);

}  // namespace rsurf::monad
