#include "rsurf/adjunction.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rsurf::adj {

PicardClass line_class(std::size_t points) {
  return PicardClass{1, std::vector<long long>(points, 0)};
}

PicardClass exceptional_class(std::size_t points, std::size_t i) {
  PicardClass e{0, std::vector<long long>(points, 0)};
  e.m[i] = -1;
  return e;
}

PicardClass canonical_class(std::size_t points) {
  return PicardClass{-3, std::vector<long long>(points, -1)};
}

long long intersect(const PicardClass& u, const PicardClass& v) {
  if (u.m.size() != v.m.size())
    throw std::invalid_argument("classes live on different blow-ups");
  long long s = u.a * v.a;
  for (std::size_t i = 0; i < u.m.size(); ++i) s -= u.m[i] * v.m[i];
  return s;
}

SurfaceInvariants surface_invariants(const PicardClass& H, long long h1) {
  PicardClass K = canonical_class(H.points());
  SurfaceInvariants inv;
  inv.degree = intersect(H, H);
  long long hk = intersect(H, K);
  inv.sectional_genus = (inv.degree + hk) / 2 + 1;
  inv.chi_H = 1 + (inv.degree - hk) / 2;
  inv.sections = inv.chi_H + h1;
  return inv;
}

namespace {

LedgerRow row_of(const PicardClass& H, int contracted) {
  SurfaceInvariants inv = surface_invariants(H);
  PicardClass K = canonical_class(H.points());
  return LedgerRow{inv.degree, inv.sectional_genus, contracted, H.points(),
                   intersect(K, K)};
}

}  // namespace

AdjunctionLedger adjunction_replay(const PicardClass& H0) {
  AdjunctionLedger out;
  PicardClass H = H0;
  out.rows.push_back(row_of(H, 0));
  for (;;) {
    PicardClass K = canonical_class(H.points());
    bool anti_canonical = H.a == 3;
    for (long long v : H.m) anti_canonical = anti_canonical && v == 1;
    if (anti_canonical) {
      out.end = ReplayEnd::DelPezzo;
      out.del_pezzo_degree = intersect(K, K);
      break;
    }
    if (intersect(H, H) < 0) {
      out.end = ReplayEnd::Anomalous;
      break;
    }
    // adjoint step
    PicardClass next{H.a + K.a, {}};
    int contracted = 0;
    for (std::size_t i = 0; i < H.m.size(); ++i) {
      long long mi = H.m[i] - 1;
      if (mi == 0)
        ++contracted;  // H.E_i = 0 after the step: a contracted (-1)-line
      else
        next.m.push_back(mi);
    }
    if (next.a <= 0 || intersect(next, next) <= 0) {
      out.end = ReplayEnd::NotEffective;
      break;
    }
    H = next;
    out.rows.push_back(row_of(H, contracted));
  }
  out.final_class = H;
  out.remaining_points = H.points();
  return out;
}

PicardClass parse_class_literal(const std::string& text) {
  // tokens: [sign][coeff]L or [sign][coeff]E<i>[..<j>]
  std::map<std::size_t, long long> mult;
  long long a = 0;
  bool saw_l = false;
  std::size_t max_e = 0;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && isspace((unsigned char)text[i])) ++i;
  };
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      if (text[i] == '-') sign = -1;
      ++i;
      skip_ws();
    }
    long long coeff = 1;
    bool saw_digit = false;
    while (i < text.size() && isdigit((unsigned char)text[i])) {
      if (!saw_digit) coeff = 0;
      coeff = coeff * 10 + (text[i++] - '0');
      saw_digit = true;
    }
    if (i >= text.size()) throw std::invalid_argument("dangling coefficient");
    if (text[i] == 'L') {
      ++i;
      a += sign * coeff;
      saw_l = true;
    } else if (text[i] == 'E') {
      ++i;
      std::size_t lo = 0;
      if (i >= text.size() || !isdigit((unsigned char)text[i]))
        throw std::invalid_argument("E needs an index");
      while (i < text.size() && isdigit((unsigned char)text[i]))
        lo = lo * 10 + std::size_t(text[i++] - '0');
      std::size_t hi = lo;
      if (i + 1 < text.size() && text[i] == '.' && text[i + 1] == '.') {
        i += 2;
        hi = 0;
        if (i >= text.size() || !isdigit((unsigned char)text[i]))
          throw std::invalid_argument("range needs an upper index");
        while (i < text.size() && isdigit((unsigned char)text[i]))
          hi = hi * 10 + std::size_t(text[i++] - '0');
      }
      if (lo < 1 || hi < lo) throw std::invalid_argument("bad E range");
      for (std::size_t k = lo; k <= hi; ++k) {
        mult[k] += sign * coeff;
        max_e = std::max(max_e, k);
      }
    } else {
      throw std::invalid_argument(std::string("unexpected character '") +
                                  text[i] + "' in class literal");
    }
  }
  if (!saw_l) throw std::invalid_argument("class literal needs an L term");
  PicardClass c{a, std::vector<long long>(max_e, 0)};
  // (a; m) means a L - sum m_i E_i, so "-4E1" contributes m_1 = +4
  for (const auto& [k, v] : mult) c.m[k - 1] = -v;
  return c;
}

nlohmann::ordered_json ledger_to_json(const AdjunctionLedger& l) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : l.rows) {
    nlohmann::ordered_json rj;
    rj["degree"] = r.degree;
    rj["sectionalGenus"] = r.sectional_genus;
    rj["contracted"] = r.contracted;
    rj["points"] = r.points;
    rj["K2"] = r.K2;
    rows.push_back(rj);
  }
  j["rows"] = rows;
  switch (l.end) {
    case ReplayEnd::DelPezzo: j["end"] = "DelPezzo"; break;
    case ReplayEnd::NotEffective: j["end"] = "NotEffective"; break;
    case ReplayEnd::Anomalous: j["end"] = "AnomalousClass"; break;
  }
  j["delPezzoDegree"] = l.del_pezzo_degree;
  j["remainingPoints"] = l.remaining_points;
  return j;
}

std::string ledger_to_text(const AdjunctionLedger& l) {
  std::ostringstream os;
  os << "step   degree   genus   contracted   points   K^2\n";
  for (std::size_t i = 0; i < l.rows.size(); ++i) {
    const auto& r = l.rows[i];
    os.width(4);
    os << i;
    os.width(9);
    os << r.degree;
    os.width(8);
    os << r.sectional_genus;
    os.width(13);
    if (i == 0)
      os << "-";
    else
      os << r.contracted;
    os.width(9);
    os << r.points;
    os.width(6);
    os << r.K2 << "\n";
  }
  switch (l.end) {
    case ReplayEnd::DelPezzo:
      os << "Del Pezzo surface of degree " << l.del_pezzo_degree << " ("
         << l.remaining_points << "-point blow-up of the plane)\n";
      break;
    case ReplayEnd::NotEffective:
      os << "adjoint class no longer effective; replay stopped\n";
      break;
    case ReplayEnd::Anomalous:
      os << "anomalous class (negative self-intersection); replay stopped\n";
      break;
  }
  return os.str();
}

PicardClass main_surface_class() {
  return parse_class_literal("12L -4E1 -4E2 -3E3..11 -2E12..14 -1E15..21");
}

}  // namespace rsurf::adj
