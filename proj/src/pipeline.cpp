#include "rsurf/pipeline.hpp"

#include <chrono>
#include <sstream>

namespace rsurf::pipeline {

namespace {

nlohmann::ordered_json config_json(unsigned p) {
  nlohmann::ordered_json c;
  c["prime"] = p;
  poly::QuadraticExtension ext{gf::PrimeField(p)};
  c["quadraticExtensionModulus"] =
      "t^2-" + std::to_string(ext.nonresidue());
  c["version"] = kVersion;
  return c;
}

}  // namespace

std::vector<poly::Poly> export_ideal(bgg::SectionCache& cache,
                                     const monad::MonadContext& ctx,
                                     const monad::MonadData& data) {
  bgg::MonadAnalysis analysis(cache, ctx, data);
  const bgg::PsiResult& psi = analysis.embedding_section();
  if (!psi.ok) throw std::logic_error("no embedding section: " + psi.detail);
  auto slices = analysis.ideal_slices(psi.psi, {5, 6});
  const auto& quintics = slices[0].basis;
  const auto& sextics = slices[1].basis;
  const gf::PrimeField& F = ctx.field();
  // span of x_i * quintics inside the degree-6 slice coordinates
  const auto& s6 = poly::monomials_of_degree(6);
  gf::Matrix prods(F, s6.size(), 5 * quintics.size());
  std::size_t col = 0;
  for (int v = 0; v < poly::kNumVars; ++v)
    for (const poly::Poly& q : quintics) {
      poly::Poly xq = poly::mul_term(q, poly::Monomial::variable(v), 1);
      for (const auto& t : xq.terms())
        prods.set(poly::monomial_index(t.mono), col, t.coeff);
      ++col;
    }
  gf::Matrix sext(F, s6.size(), sextics.size());
  for (std::size_t j = 0; j < sextics.size(); ++j)
    for (const auto& t : sextics[j].terms())
      sext.set(poly::monomial_index(t.mono), j, t.coeff);
  std::vector<std::size_t> fresh = gf::complement_columns(prods, sext);
  std::vector<poly::Poly> out = quintics;
  for (std::size_t j : fresh) out.push_back(sextics[j]);
  return out;
}

VerifyOutcome run_verify(const monad::Candidate& cand, unsigned p,
                         const VerifyOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  auto secs = [&t0]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  VerifyOutcome out;
  nlohmann::ordered_json& rep = out.report;
  rep["schema"] = "rsurf.verify/1";
  rep["config"] = config_json(p);
  rep["candidate"] = monad::candidate_to_json(cand);
  nlohmann::ordered_json stages = nlohmann::ordered_json::object();
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();

  monad::MonadContext ctx(p);

  // stage: membership
  monad::Membership mem = monad::membership_test(ctx, cand);
  out.corank = mem.corank;
  {
    nlohmann::ordered_json s;
    s["corank"] = mem.corank;
    s["member"] = mem.status == monad::MembershipStatus::Member;
    if (mem.status == monad::MembershipStatus::InvalidCandidate)
      s["error"] = "InvalidCandidate";
    stages["membership"] = s;
  }
  timings["membership"] = secs();
  if (mem.status != monad::MembershipStatus::Member) {
    rep["stages"] = stages;
    if (opts.timings) rep["timings"] = timings;
    out.exit_code = mem.status == monad::MembershipStatus::InvalidCandidate
                        ? kExitInvalidInput
                        : kExitMathFail;
    return out;
  }

  // stage: fingerprint
  monad::Fingerprint fp = monad::betti_fingerprint(ctx, cand);
  out.fingerprint = fp.type;
  {
    nlohmann::ordered_json s;
    s["type"] = monad::to_string(fp.type);
    s["betti"] = fp.table.to_json();
    stages["fingerprint"] = s;
  }
  timings["fingerprint"] = secs();

  // stage: monad assembly (B2, A)
  monad::MonadData data = monad::build_monad(ctx, cand);
  {
    nlohmann::ordered_json s;
    s["middleHomologyDim"] = data.middle_homology_dim;
    s["ok"] = data.status == monad::MonadStatus::Ok;
    if (data.status == monad::MonadStatus::MonadDegenerate)
      s["error"] = "MonadDegenerate";
    stages["monad"] = s;
  }
  timings["monad"] = secs();
  if (data.status != monad::MonadStatus::Ok) {
    rep["stages"] = stages;
    if (opts.timings) rep["timings"] = timings;
    out.exit_code = kExitMathFail;
    return out;
  }

  // stage: twisted section counts and ideal reconstruction
  bgg::SectionCache cache(ctx.field());
  bgg::MonadAnalysis analysis(cache, ctx, data);
  bool coh_ok = true;
  {
    nlohmann::ordered_json s;
    bgg::H0Result h0_0 = analysis.monad_h0(0);
    out.h0[4] = h0_0.h0;
    out.h1_at_4 = h0_0.h1;
    coh_ok = coh_ok && !h0_0.defect;
    nlohmann::ordered_json h0j;
    h0j["4"] = h0_0.h0;
    for (int n = 1; n <= 2; ++n) {
      bgg::H0Result r = analysis.monad_h0(n);
      coh_ok = coh_ok && !r.defect;
      out.h0[4 + n] = r.h0;
      h0j[std::to_string(4 + n)] = r.h0;
    }
    s["h0"] = h0j;
    s["h1At4"] = h0_0.h1;
    s["ok"] = coh_ok;
    stages["cohomology"] = s;
  }
  timings["cohomology"] = secs();
  if (!coh_ok) {
    rep["stages"] = stages;
    if (opts.timings) rep["timings"] = timings;
    out.exit_code = kExitMathFail;
    return out;
  }

  {
    nlohmann::ordered_json s;
    const bgg::PsiResult& psi = analysis.embedding_section();
    s["solutionDim"] = psi.solution_dim;
    s["factoringDim"] = psi.factoring_dim;
    s["ok"] = psi.ok;
    if (!psi.detail.empty()) s["note"] = psi.detail;
    stages["embedding"] = s;
    if (!psi.ok) {
      rep["stages"] = stages;
      if (opts.timings) rep["timings"] = timings;
      out.exit_code = kExitMathFail;
      return out;
    }
    std::vector<int> degrees{5, 6, 7, 8, 9, 10};
    std::vector<bgg::IdealSlice> slices;
    try {
      slices = analysis.ideal_slices(psi.psi, degrees);
    } catch (const std::logic_error& e) {
      // slice dimensions inconsistent with the section counts: the homology
      // is not the ideal sheaf of a surface with the expected invariants
      nlohmann::ordered_json sj;
      sj["error"] = e.what();
      stages["idealSlices"] = sj;
      rep["stages"] = stages;
      if (opts.timings) rep["timings"] = timings;
      out.exit_code = kExitMathFail;
      return out;
    }
    nlohmann::ordered_json dims;
    for (const auto& sl : slices) {
      out.h0[sl.degree] = long(sl.basis.size());
      dims[std::to_string(sl.degree)] = sl.basis.size();
    }
    nlohmann::ordered_json sj;
    sj["dims"] = dims;
    stages["idealSlices"] = sj;

    std::map<int, long> ideal_dims;
    for (const auto& sl : slices) ideal_dims[sl.degree] = long(sl.basis.size());
    out.fit = bgg::hilbert_fit(ideal_dims, p);
    nlohmann::ordered_json fj;
    fj["ok"] = out.fit.ok;
    if (out.fit.ok) {
      fj["degree"] = out.fit.d;
      fj["sectionalGenus"] = out.fit.pi;
      fj["chi"] = out.fit.chi;
      std::ostringstream po;
      po << out.fit.coeffs[2] << "*n^2" << (out.fit.coeffs[1] >= 0 ? "+" : "")
         << out.fit.coeffs[1] << "*n" << (out.fit.coeffs[0] >= 0 ? "+" : "")
         << out.fit.coeffs[0];
      fj["polynomial"] = po.str();
    }
    stages["hilbertFit"] = fj;

    out.ideal = export_ideal(cache, ctx, data);
    nlohmann::ordered_json ij;
    ij["generators"] = out.ideal.size();
    int quintics = 0, sextics = 0;
    for (const auto& g : out.ideal)
      (g.degree() == 5 ? quintics : sextics)++;
    ij["quintics"] = quintics;
    ij["sextics"] = sextics;
    stages["ideal"] = ij;
  }
  timings["ideal"] = secs();

  // stage: tangent space and dimension ledger
  {
    auto codim = monad::tangent_codim(ctx, cand);
    nlohmann::ordered_json s;
    if (codim) {
      out.tangent_codim = *codim;
      s["codim"] = *codim;
      auto ledger = monad::dimension_ledger(ctx, cand);
      nlohmann::ordered_json lj;
      lj["grassmannianDim"] = ledger->grassmannian_dim;
      lj["codim"] = ledger->codim;
      lj["strataDim"] = ledger->strata_dim;
      lj["scrollDim"] = ledger->scroll_dim;
      lj["hilbertDim"] = ledger->hilbert_dim;
      out.hilbert_dim = ledger->hilbert_dim;
      s["dimensionLedger"] = lj;
    }
    stages["tangent"] = s;
  }
  timings["tangent"] = secs();

  // stage: smoothness (only with --full)
  if (opts.full) {
    nlohmann::ordered_json s;
    if (opts.budget_seconds == 0) {
      s["verdict"] = "Inconclusive";
      s["detail"] = "budget exhausted before start";
      out.smoothness = poly::SmoothnessVerdict::Inconclusive;
      stages["smoothness"] = s;
      rep["stages"] = stages;
      if (opts.timings) rep["timings"] = timings;
      out.exit_code = kExitBudget;
      return out;
    }
    poly::SmoothnessResult sm =
        poly::jacobian_singular_locus(out.ideal, opts.budget_seconds);
    out.smoothness = sm.verdict;
    switch (sm.verdict) {
      case poly::SmoothnessVerdict::Smooth: s["verdict"] = "Smooth"; break;
      case poly::SmoothnessVerdict::Singular: s["verdict"] = "Singular"; break;
      case poly::SmoothnessVerdict::Inconclusive:
        s["verdict"] = "Inconclusive";
        break;
    }
    s["detail"] = sm.detail;

    // point scans over F_p and F_{p^2}: necessary smoothness evidence,
    // reported alongside the certificate (and the only evidence if the
    // Groebner run was Inconclusive)
    out.scans_clean = true;
    for (int e : {1, 2}) {
      auto pts = poly::rational_point_scan(out.ideal, e, opts.workers);
      int min_rank = 2;
      for (const auto& sp : pts) min_rank = std::min(min_rank, sp.jacobian_rank);
      if (min_rank < 2) out.scans_clean = false;
      nlohmann::ordered_json sj;
      sj["points"] = pts.size();
      sj["minJacobianRank"] = pts.empty() ? 2 : min_rank;
      s[e == 1 ? "scanFp" : "scanFp2"] = sj;
    }
    s["scansClean"] = out.scans_clean;
    if (sm.verdict == poly::SmoothnessVerdict::Inconclusive)
      s["degraded"] =
          "Groebner certificate did not finish within budget; only the "
          "scan-based necessary condition was checked";
    stages["smoothness"] = s;
    timings["smoothness"] = secs();
  }

  rep["stages"] = stages;
  if (opts.timings)
    rep["timings"] = timings;
  else
    rep["timings"] = nullptr;

  bool math_ok = out.fit.ok && out.fit.d == 12 && out.fit.pi == 13 &&
                 out.tangent_codim == 4;
  if (opts.full) {
    if (out.smoothness == poly::SmoothnessVerdict::Inconclusive) {
      out.exit_code = kExitBudget;
      return out;
    }
    math_ok = math_ok && out.smoothness == poly::SmoothnessVerdict::Smooth &&
              out.scans_clean;
  }
  out.exit_code = math_ok ? kExitOk : kExitMathFail;
  return out;
}

nlohmann::ordered_json run_search(unsigned p, const SearchOptions& opts) {
  monad::SearchReport r = monad::random_search(p, opts.trials, opts.seed,
                                               opts.workers, opts.cancel);
  nlohmann::ordered_json j = monad::search_report_to_json(r, opts.timings);
  j["config"] = config_json(p);
  return j;
}

nlohmann::ordered_json adjunction_report(const adj::AdjunctionLedger& ledger) {
  nlohmann::ordered_json j;
  j["schema"] = "rsurf.adjunction/1";
  // pure integer lattice arithmetic; only the code version is relevant
  j["config"] = nlohmann::ordered_json{{"version", kVersion}};
  j["ledger"] = adj::ledger_to_json(ledger);
  return j;
}

namespace {

void render_value(std::ostringstream& os, const std::string& key,
                  const nlohmann::json& v, int indent) {
  std::string pad(std::size_t(indent) * 2, ' ');
  if (v.is_object()) {
    os << pad << key << ":\n";
    for (auto it = v.begin(); it != v.end(); ++it)
      render_value(os, it.key(), it.value(), indent + 1);
  } else if (v.is_array()) {
    os << pad << key << ": [" << v.size() << " entries]\n";
  } else {
    os << pad << key << ": " << v.dump() << "\n";
  }
}

}  // namespace

std::string render_report(const nlohmann::json& report) {
  std::ostringstream os;
  for (auto it = report.begin(); it != report.end(); ++it)
    render_value(os, it.key(), it.value(), 0);
  return os.str();
}

}  // namespace rsurf::pipeline
