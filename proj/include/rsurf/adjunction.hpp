#pragma once

// Picard-lattice arithmetic on blow-ups of the plane: intersection numbers,
// surface invariants of a hyperplane class, and the numerical adjunction
// replay H -> H + K with contraction of exhausted exceptional classes.
//
// A class (a; m_1..m_k) means a L - sum m_i E_i on the blow-up of P^2 in k
// points, with intersection form diag(1, -1, ..., -1). K = (-3; -1, ..., -1).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace rsurf::adj {

struct PicardClass {
  long long a = 0;
  std::vector<long long> m;

  std::size_t points() const { return m.size(); }
  bool operator==(const PicardClass& o) const { return a == o.a && m == o.m; }
};

PicardClass line_class(std::size_t points);
PicardClass exceptional_class(std::size_t points, std::size_t i);
PicardClass canonical_class(std::size_t points);

/// (a; m) . (a'; m') = a a' - sum m_i m_i'. Throws on length mismatch.
long long intersect(const PicardClass& u, const PicardClass& v);

struct SurfaceInvariants {
  long long degree = 0;           // H.H
  long long sectional_genus = 0;  // (H.H + H.K)/2 + 1
  long long chi_H = 0;            // 1 + H.(H - K)/2  (Riemann-Roch, chi(O)=1)
  long long sections = 0;         // chi_H + h1 (h1 supplied as input data)
};

SurfaceInvariants surface_invariants(const PicardClass& H, long long h1 = 0);

struct LedgerRow {
  long long degree = 0;
  long long sectional_genus = 0;
  int contracted = 0;  // exceptional classes dropped to reach this row
  std::size_t points = 0;
  long long K2 = 0;
};

enum class ReplayEnd { DelPezzo, NotEffective, Anomalous };

struct AdjunctionLedger {
  std::vector<LedgerRow> rows;  // rows[0] is the input class
  ReplayEnd end = ReplayEnd::NotEffective;
  long long del_pezzo_degree = 0;  // K^2 at the Del Pezzo endpoint
  std::size_t remaining_points = 0;
  PicardClass final_class;
};

/// Repeat H <- H + K, dropping every E_i with H.E_i = 0; stop at H = -K
/// (Del Pezzo, degree K^2), at a non-effective class (a <= 0 or H.H <= 0),
/// or at an anomalous H.H < 0.
AdjunctionLedger adjunction_replay(const PicardClass& H0);

/// "12L -4E1 -4E2 -3E3..11 -2E12..14 -1E15..21" with range expansion.
PicardClass parse_class_literal(const std::string& text);

nlohmann::ordered_json ledger_to_json(const AdjunctionLedger& l);
std::string ledger_to_text(const AdjunctionLedger& l);

/// The hyperplane class of the degree-12 family: 12L - 4(E1..E2)
/// - 3(E3..E11) - 2(E12..E14) - (E15..E21).
PicardClass main_surface_class();

}  // namespace rsurf::adj
