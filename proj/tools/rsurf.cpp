// Command-line front end: reproducible searches for the degree-12 rational
// surfaces in P^4, candidate verification, ideal export, adjunction replay.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "rsurf/pipeline.hpp"

namespace {

using namespace rsurf;

std::atomic<bool> g_interrupted{false};

void handle_interrupt(int) { g_interrupted.store(true); }

int write_output(const nlohmann::ordered_json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::ofstream os(out_path);
  if (!os) {
    std::cerr << "cannot open " << out_path << " for writing\n";
    return pipeline::kExitInvalidInput;
  }
  os << j.dump(2) << "\n";
  return 0;
}

std::optional<monad::Candidate> load_candidate(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    std::cerr << "cannot read candidate file " << path << "\n";
    return std::nullopt;
  }
  try {
    nlohmann::json j;
    is >> j;
    return monad::candidate_from_json(j);
  } catch (const std::exception& e) {
    std::cerr << "malformed candidate file: " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rsurf: smooth rational surfaces of degree 12 in P^4 over "
               "small prime fields, via exterior-algebra monads"};
  app.require_subcommand(1);

  unsigned prime = 5;
  app.add_option("--prime", prime, "ground field characteristic")
      ->capture_default_str();

  // search
  auto* search = app.add_subcommand("search", "random search on G(10,4)");
  uint64_t trials = 6250, seed = 42;
  unsigned workers = 1;
  std::string out_path;
  bool timings = false;
  search->add_option("--trials", trials, "number of candidates to draw")
      ->capture_default_str();
  search->add_option("--seed", seed, "random seed")->capture_default_str();
  search->add_option("--workers", workers, "worker threads")
      ->capture_default_str();
  search->add_option("--out", out_path, "report file (stdout if omitted)");
  search->add_flag("--timings", timings, "include wall time in the report");

  // verify
  auto* verify = app.add_subcommand("verify", "run the verification pipeline "
                                              "on a candidate file");
  std::string cand_path;
  bool full = false;
  double budget = 900;
  verify->add_option("candidate", cand_path, "candidate JSON file")
      ->required();
  verify->add_flag("--full", full, "also run the Groebner smoothness "
                                   "certificate and point scans");
  verify->add_option("--budget-secs", budget, "Groebner budget in seconds")
      ->capture_default_str();
  verify->add_option("--workers", workers, "worker threads for scans");
  verify->add_option("--out", out_path, "report file (stdout if omitted)");
  verify->add_flag("--timings", timings, "include timings in the report");

  // ideal
  auto* ideal = app.add_subcommand("ideal", "export the surface ideal of a "
                                            "verified candidate");
  ideal->add_option("candidate", cand_path, "candidate JSON file")->required();
  ideal->add_option("--out", out_path, "ideal file (stdout if omitted)");

  // adjunction
  auto* adjc = app.add_subcommand("adjunction", "numerical adjunction replay "
                                                "for a hyperplane class");
  std::string class_literal;
  adjc->add_option("class", class_literal,
                   "class literal, e.g. \"12L -4E1 -4E2 -3E3..11 -2E12..14 "
                   "-1E15..21\"")
      ->required();
  adjc->add_option("--out", out_path, "report file (stdout if omitted)");

  // phi
  auto* phi = app.add_subcommand("phi", "derive the presentation of T and "
                                        "check it against the fixed one");

  // report
  auto* report = app.add_subcommand("report", "render a JSON report "
                                              "human-readably");
  std::string report_path;
  report->add_option("file", report_path, "report JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : pipeline::kExitInvalidInput;
  }

  try {
    if (search->parsed()) {
      pipeline::SearchOptions opts;
      opts.trials = trials;
      opts.seed = seed;
      opts.workers = workers;
      opts.timings = timings;
      opts.cancel = &g_interrupted;
      // interrupt-safe: the partial report is still flushed, with a
      // truncation marker
      std::signal(SIGINT, handle_interrupt);
      nlohmann::ordered_json j = pipeline::run_search(prime, opts);
      std::signal(SIGINT, SIG_DFL);
      std::cerr << "search: " << j["rankHits"] << " corank-2 points, "
                << j["fingerprint1Hits"] << " Type1, " << j["fingerprint2Hits"]
                << " Type2 in " << trials << " trials\n";
      bool truncated = j["truncated"].get<bool>();
      if (truncated) std::cerr << "search: interrupted, report truncated\n";
      int wr = write_output(j, out_path);
      if (wr) return wr;
      return truncated ? pipeline::kExitBudget : pipeline::kExitOk;
    }
    if (verify->parsed()) {
      auto cand = load_candidate(cand_path);
      if (!cand) return pipeline::kExitInvalidInput;
      pipeline::VerifyOptions opts;
      opts.full = full;
      opts.budget_seconds = budget;
      opts.timings = timings;
      opts.workers = workers;
      pipeline::VerifyOutcome outcome =
          pipeline::run_verify(*cand, prime, opts);
      int wr = write_output(outcome.report, out_path);
      if (wr) return wr;
      return outcome.exit_code;
    }
    if (ideal->parsed()) {
      auto cand = load_candidate(cand_path);
      if (!cand) return pipeline::kExitInvalidInput;
      monad::MonadContext ctx(prime);
      monad::MonadData data = monad::build_monad(ctx, *cand);
      if (data.status != monad::MonadStatus::Ok) {
        std::cerr << "candidate is not a verified member (corank "
                  << data.corank << ")\n";
        return pipeline::kExitMathFail;
      }
      bgg::SectionCache cache(ctx.field());
      std::vector<poly::Poly> gens =
          pipeline::export_ideal(cache, ctx, data);
      std::string text = poly::format_ideal(gens);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream os(out_path);
        if (!os) {
          std::cerr << "cannot open " << out_path << "\n";
          return pipeline::kExitInvalidInput;
        }
        os << text;
      }
      return pipeline::kExitOk;
    }
    if (adjc->parsed()) {
      adj::PicardClass H;
      try {
        H = adj::parse_class_literal(class_literal);
      } catch (const std::exception& e) {
        std::cerr << "cannot parse class literal: " << e.what() << "\n";
        return pipeline::kExitInvalidInput;
      }
      adj::AdjunctionLedger ledger = adj::adjunction_replay(H);
      std::cout << adj::ledger_to_text(ledger);
      if (!out_path.empty()) {
        int wr = write_output(pipeline::adjunction_report(ledger), out_path);
        if (wr) return wr;
      }
      return pipeline::kExitOk;
    }
    if (phi->parsed()) {
      ext::ExteriorAlgebra alg{gf::PrimeField(prime)};
      monad::PhiDerivation der = monad::derive_phi(alg);
      ext::EModuleMap fixed = monad::canonical_phi(alg);
      std::cout << "dim T = " << der.dim_T << "\n";
      std::cout << "derived presentation of T:\n";
      for (std::size_t r = 0; r < der.phi.rows(); ++r) {
        for (std::size_t c = 0; c < der.phi.cols(); ++c)
          std::cout << "  " << alg.render(der.phi.at(r, c))
                    << (c + 1 < der.phi.cols() ? "," : "\n");
      }
      auto g = monad::phi_change_of_basis(alg, der.phi, fixed);
      if (g) {
        std::cout << "equivalent to the fixed presentation via an invertible "
                     "change of basis\n";
        return pipeline::kExitOk;
      }
      std::cout << "NOT equivalent to the fixed presentation\n";
      return pipeline::kExitMathFail;
    }
    if (report->parsed()) {
      std::ifstream is(report_path);
      if (!is) {
        std::cerr << "cannot read " << report_path << "\n";
        return pipeline::kExitInvalidInput;
      }
      nlohmann::json j;
      try {
        is >> j;
      } catch (const std::exception& e) {
        std::cerr << "malformed report: " << e.what() << "\n";
        return pipeline::kExitInvalidInput;
      }
      std::cout << pipeline::render_report(j);
      return pipeline::kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return pipeline::kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pipeline::kExitMathFail;
  }
  return pipeline::kExitInvalidInput;
}
