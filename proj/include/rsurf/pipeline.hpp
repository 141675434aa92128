#pragma once

// End-to-end orchestration of the verification pipeline, shared by the CLI
// and the acceptance suite: membership -> fingerprint -> B2/A -> twisted
// section counts -> ideal reconstruction -> Hilbert fit -> tangent space ->
// dimension ledger, and optionally the Groebner smoothness certificate with
// point-scan fallback evidence.

#include <optional>
#include <string>

#include "rsurf/adjunction.hpp"
#include "rsurf/bgg.hpp"
#include "rsurf/monad.hpp"
#include "rsurf/poly.hpp"

namespace rsurf::pipeline {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMathFail = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitBudget = 3;

struct VerifyOptions {
  bool full = false;           // also run the Groebner smoothness certificate
  double budget_seconds = 900; // Groebner budget (15 minutes)
  bool timings = false;
  unsigned workers = 1;
};

struct VerifyOutcome {
  int exit_code = kExitOk;
  nlohmann::ordered_json report;
  // surfaced for tests
  unsigned corank = 0;
  monad::FingerprintType fingerprint = monad::FingerprintType::Other;
  std::map<int, long> h0;         // twist j -> h^0 I(j), j = 4..10
  long h1_at_4 = -1;
  bgg::HilbertFit fit;
  int tangent_codim = -1;
  int hilbert_dim = -1;
  std::vector<poly::Poly> ideal;  // the exported generators (9 for members)
  poly::SmoothnessVerdict smoothness = poly::SmoothnessVerdict::Inconclusive;
  bool scans_clean = false;       // no zero with Jacobian rank < 2
};

VerifyOutcome run_verify(const monad::Candidate& cand, unsigned p,
                         const VerifyOptions& opts);

/// The 9 exported generators (5 quintics and the sextics outside W*I_5) of a
/// verified member, in the canonical order used by the ideal file.
std::vector<poly::Poly> export_ideal(bgg::SectionCache& cache,
                                     const monad::MonadContext& ctx,
                                     const monad::MonadData& data);

struct SearchOptions {
  uint64_t trials = 0;
  uint64_t seed = 0;
  unsigned workers = 1;
  bool timings = false;
  /// When set mid-run, the search stops and the report carries a truncation
  /// marker.
  const std::atomic<bool>* cancel = nullptr;
};

nlohmann::ordered_json run_search(unsigned p, const SearchOptions& opts);

nlohmann::ordered_json adjunction_report(const adj::AdjunctionLedger& ledger);

/// Human-readable rendering of any report produced by this tool.
std::string render_report(const nlohmann::json& report);

}  // namespace rsurf::pipeline
