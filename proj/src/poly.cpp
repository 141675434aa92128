#include "rsurf/poly.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace rsurf::poly {

bool degrevlex_greater(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  for (int i = kNumVars - 1; i >= 0; --i)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
  return false;
}

Poly::Poly(gf::PrimeField field, std::vector<Term> terms)
    : f_(field), terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return degrevlex_greater(a.mono, b.mono);
  });
  // combine duplicates, drop zeros
  std::vector<Term> out;
  for (const Term& t : terms_) {
    if (!out.empty() && out.back().mono == t.mono)
      out.back().coeff = field.add(out.back().coeff, t.coeff);
    else
      out.push_back(t);
    if (!out.empty() && out.back().coeff == 0) out.pop_back();
  }
  terms_ = std::move(out);
}

Poly Poly::monomial(gf::PrimeField field, const Monomial& m, uint8_t c) {
  return Poly(field, {Term{m, field.from_int(c)}});
}

Poly Poly::constant(gf::PrimeField field, uint8_t c) {
  return Poly(field, {Term{Monomial{}, field.from_int(c)}});
}

bool Poly::is_homogeneous() const {
  if (terms_.empty()) return true;
  int d = terms_.front().mono.degree();
  for (const Term& t : terms_)
    if (t.mono.degree() != d) return false;
  return true;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term& t : terms_) {
    if (!first) os << "+";
    first = false;
    bool is_const = t.mono.degree() == 0;
    bool wrote = false;
    if (t.coeff != 1 || is_const) {
      os << int(t.coeff);
      wrote = true;
    }
    for (int i = 0; i < kNumVars; ++i) {
      if (!t.mono.e[i]) continue;
      if (wrote) os << "*";
      os << "x" << i;
      if (t.mono.e[i] > 1) os << "^" << int(t.mono.e[i]);
      wrote = true;
    }
  }
  return os.str();
}

namespace {

// merge two descending term lists with b scaled by c
std::vector<Term> merge_scaled(const gf::PrimeField& f,
                               const std::vector<Term>& a,
                               const std::vector<Term>& b, uint8_t c,
                               const Monomial* shift = nullptr) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  auto bmono = [&](std::size_t k) {
    return shift ? b[k].mono * *shift : b[k].mono;
  };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() ||
        (i < a.size() && degrevlex_greater(a[i].mono, bmono(j)))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || degrevlex_greater(bmono(j), a[i].mono)) {
      uint8_t v = f.mul(b[j].coeff, c);
      if (v) out.push_back(Term{bmono(j), v});
      ++j;
    } else {
      uint8_t v = f.add(a[i].coeff, f.mul(b[j].coeff, c));
      if (v) out.push_back(Term{a[i].mono, v});
      ++i;
      ++j;
    }
  }
  return out;
}

Poly from_sorted(gf::PrimeField f, std::vector<Term> ts) {
  Poly p = Poly::zero(f);
  // constructor re-sorts; ts is already canonical so this is cheap
  return Poly(f, std::move(ts));
}

}  // namespace

Poly add(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return from_sorted(a.field(), merge_scaled(a.field(), a.terms_, b.terms_, 1));
}

Poly sub(const Poly& a, const Poly& b) {
  if (b.is_zero()) return a;
  const gf::PrimeField& f = b.field();
  return from_sorted(f, merge_scaled(f, a.is_zero() ? std::vector<Term>{} : a.terms(),
                                     b.terms(), f.neg(1)));
}

Poly scale(const Poly& a, uint8_t c) {
  if (a.is_zero() || c == 1) return a;
  std::vector<Term> ts;
  for (const Term& t : a.terms()) {
    uint8_t v = a.field().mul(t.coeff, c);
    if (v) ts.push_back(Term{t.mono, v});
  }
  return from_sorted(a.field(), std::move(ts));
}

Poly mul_term(const Poly& a, const Monomial& m, uint8_t c) {
  if (a.is_zero() || c == 0) return a.is_zero() ? a : Poly::zero(a.field());
  std::vector<Term> ts;
  ts.reserve(a.terms().size());
  for (const Term& t : a.terms()) {
    uint8_t v = a.field().mul(t.coeff, c);
    if (v) ts.push_back(Term{t.mono * m, v});
  }
  return from_sorted(a.field(), std::move(ts));
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.is_zero()) return a;
  if (b.is_zero()) return b;
  const gf::PrimeField& f = a.field();
  std::unordered_map<uint64_t, std::pair<Monomial, unsigned>> acc;
  acc.reserve(a.terms().size() * b.terms().size());
  for (const Term& s : a.terms())
    for (const Term& t : b.terms()) {
      Monomial m = s.mono * t.mono;
      auto& slot = acc[m.pack()];
      slot.first = m;
      slot.second += unsigned(s.coeff) * t.coeff;
    }
  std::vector<Term> ts;
  ts.reserve(acc.size());
  for (auto& [k, v] : acc) {
    uint8_t c = uint8_t(v.second % f.modulus());
    if (c) ts.push_back(Term{v.first, c});
  }
  return Poly(f, std::move(ts));
}

Poly derivative(const Poly& a, int var) {
  if (a.is_zero()) return a;
  const gf::PrimeField& f = a.field();
  std::vector<Term> ts;
  for (const Term& t : a.terms()) {
    uint8_t e = t.mono.e[std::size_t(var)];
    if (!e) continue;
    uint8_t c = f.mul(t.coeff, f.from_int(e));
    if (!c) continue;
    Monomial m = t.mono;
    m.e[std::size_t(var)] = uint8_t(e - 1);
    ts.push_back(Term{m, c});
  }
  return Poly(f, std::move(ts));
}

Poly normal_form(const Poly& f, const std::vector<Poly>& basis) {
  if (f.is_zero()) return f;
  const gf::PrimeField& F = f.field();
  std::vector<Term> result;
  Poly work = f;
  while (!work.is_zero()) {
    const Term& lt = work.leading();
    bool reduced = false;
    for (const Poly& g : basis) {
      if (g.is_zero()) continue;
      const Term& gl = g.leading();
      if (!gl.mono.divides(lt.mono)) continue;
      uint8_t c = F.mul(lt.coeff, F.inv(gl.coeff));
      work = sub(work, mul_term(g, lt.mono / gl.mono, c));
      reduced = true;
      break;
    }
    if (!reduced) {
      result.push_back(lt);
      std::vector<Term> rest(work.terms().begin() + 1, work.terms().end());
      work = Poly(F, std::move(rest));
    }
  }
  return Poly(F, std::move(result));
}

const std::vector<Monomial>& monomials_of_degree(int m) {
  static std::mutex mu;
  static std::map<int, std::vector<Monomial>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<Monomial> out;
  Monomial mono;
  // enumerate all exponent vectors of total degree m, then sort descending
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == kNumVars - 1) {
      mono.e[std::size_t(var)] = uint8_t(left);
      out.push_back(mono);
      return;
    }
    for (int v = left; v >= 0; --v) {
      mono.e[std::size_t(var)] = uint8_t(v);
      rec(var + 1, left - v);
    }
  };
  if (m >= 0) rec(0, m);
  std::sort(out.begin(), out.end(), degrevlex_greater);
  return cache.emplace(m, std::move(out)).first->second;
}

std::size_t monomial_index(const Monomial& m) {
  const std::vector<Monomial>& list = monomials_of_degree(m.degree());
  auto it = std::lower_bound(list.begin(), list.end(), m,
                             [](const Monomial& a, const Monomial& b) {
                               return degrevlex_greater(a, b);
                             });
  return std::size_t(it - list.begin());
}

std::size_t dim_degree(int m) {
  if (m < 0) return 0;
  std::size_t n = 1;
  for (int i = 1; i <= 4; ++i) n = n * std::size_t(m + i) / std::size_t(i);
  return n;
}

namespace {

struct Pair {
  std::size_t i, j;
  Monomial lcm;
  int degree;
};

bool pair_less(const Pair& a, const Pair& b) {
  if (a.degree != b.degree) return a.degree < b.degree;
  // fixed lexicographic tie-break on the lcm exponents, then indices
  for (int k = 0; k < kNumVars; ++k)
    if (a.lcm.e[k] != b.lcm.e[k]) return a.lcm.e[k] < b.lcm.e[k];
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

Poly make_monic(const Poly& p) {
  if (p.is_zero()) return p;
  return scale(p, p.field().inv(p.leading().coeff));
}

// reduced basis: every generator monic, fully reduced against the others,
// leading terms pairwise non-divisible, sorted by leading term
GroebnerBasis interreduce(std::vector<Poly> gens) {
  std::vector<Poly> kept;
  for (Poly& g : gens)
    if (!g.is_zero()) kept.push_back(make_monic(g));
  // drop generators whose LT is divisible by another's
  std::vector<Poly> minimal;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < kept.size() && !dominated; ++j) {
      if (i == j) continue;
      if (kept[j].leading().mono.divides(kept[i].leading().mono)) {
        if (!(kept[i].leading().mono == kept[j].leading().mono) || j < i)
          dominated = true;
      }
    }
    if (!dominated) minimal.push_back(kept[i]);
  }
  std::vector<Poly> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Poly> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    Poly nf = normal_form(minimal[i], others);
    if (!nf.is_zero()) reduced.push_back(make_monic(nf));
  }
  std::sort(reduced.begin(), reduced.end(), [](const Poly& a, const Poly& b) {
    return degrevlex_greater(a.leading().mono, b.leading().mono);
  });
  return GroebnerBasis{std::move(reduced), true};
}

}  // namespace

GroebnerResult buchberger(const std::vector<Poly>& gens,
                          double budget_seconds) {
  auto t0 = std::chrono::steady_clock::now();
  auto out_of_budget = [&]() {
    if (budget_seconds < 0) return false;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
               .count() > budget_seconds;
  };
  if (gens.empty()) throw std::invalid_argument("buchberger: no generators");

  std::vector<Poly> basis;
  for (const Poly& g : gens)
    if (!g.is_zero()) basis.push_back(make_monic(g));
  if (basis.empty()) return {GroebnerResult::Status::Done, GroebnerBasis{}, 0};

  std::set<Pair, bool (*)(const Pair&, const Pair&)> queue(pair_less);
  auto add_pairs_for = [&](std::size_t j) {
    for (std::size_t i = 0; i < j; ++i) {
      const Monomial &a = basis[i].leading().mono, &b = basis[j].leading().mono;
      Monomial l = Monomial::lcm(a, b);
      if (l.degree() == a.degree() + b.degree()) continue;  // coprime LTs
      queue.insert(Pair{i, j, l, l.degree()});
    }
  };
  for (std::size_t j = 1; j < basis.size(); ++j) add_pairs_for(j);

  unsigned long processed = 0;
  while (!queue.empty()) {
    if (out_of_budget()) {
      GroebnerResult r;
      r.status = GroebnerResult::Status::Inconclusive;
      r.basis = GroebnerBasis{basis, false};
      r.pair_count = processed;
      return r;
    }
    Pair pr = *queue.begin();
    queue.erase(queue.begin());
    ++processed;
    // chain criterion: some other basis element divides the lcm and both
    // companion pairs were already handled (not in the queue)
    {
      bool skip = false;
      for (std::size_t k = 0; k < basis.size() && !skip; ++k) {
        if (k == pr.i || k == pr.j) continue;
        if (!basis[k].leading().mono.divides(pr.lcm)) continue;
        auto companion = [&](std::size_t a, std::size_t b) {
          if (a > b) std::swap(a, b);
          Monomial l =
              Monomial::lcm(basis[a].leading().mono, basis[b].leading().mono);
          return queue.count(Pair{a, b, l, l.degree()}) == 0;
        };
        if (companion(pr.i, k) && companion(k, pr.j)) skip = true;
      }
      if (skip) continue;
    }
    const Poly &f = basis[pr.i], &g = basis[pr.j];
    Poly s = sub(mul_term(f, pr.lcm / f.leading().mono, 1),
                 mul_term(g, pr.lcm / g.leading().mono, 1));
    Poly nf = normal_form(s, basis);
    if (nf.is_zero()) continue;
    basis.push_back(make_monic(nf));
    add_pairs_for(basis.size() - 1);
  }
  GroebnerResult r;
  r.status = GroebnerResult::Status::Done;
  r.basis = interreduce(basis);
  r.pair_count = processed;
  return r;
}

std::vector<long long> hilbert_numerator(const std::vector<Monomial>& gens) {
  // N(S/I): N(I) = t * N(I : x) + N(I + (x)), recursing until base cases.
  std::function<std::vector<long long>(std::vector<Monomial>)> go =
      [&](std::vector<Monomial> g) -> std::vector<long long> {
    // interreduce: drop multiples
    std::vector<Monomial> m;
    for (const Monomial& a : g) {
      bool dominated = false;
      for (const Monomial& b : g)
        if (!(b == a) && b.divides(a)) {
          if (a.divides(b)) {
            // equal support duplicates; keep one copy
            if (&b < &a) dominated = true;
          } else {
            dominated = true;
          }
        }
      if (!dominated) m.push_back(a);
    }
    std::sort(m.begin(), m.end(), [](const Monomial& a, const Monomial& b) {
      return a.pack() < b.pack();
    });
    m.erase(std::unique(m.begin(), m.end()), m.end());
    for (const Monomial& a : m)
      if (a.degree() == 0) return {0};
    if (m.empty()) return {1};
    // pure powers: product of (1 - t^deg)
    bool pure = true;
    for (const Monomial& a : m) {
      int support = 0;
      for (int i = 0; i < kNumVars; ++i)
        if (a.e[i]) ++support;
      if (support > 1) {
        pure = false;
        break;
      }
    }
    if (pure) {
      std::vector<long long> num{1};
      for (const Monomial& a : m) {
        std::vector<long long> factor(std::size_t(a.degree()) + 1, 0);
        factor[0] = 1;
        factor[std::size_t(a.degree())] = -1;
        std::vector<long long> next(num.size() + factor.size() - 1, 0);
        for (std::size_t i = 0; i < num.size(); ++i)
          for (std::size_t j = 0; j < factor.size(); ++j)
            next[i + j] += num[i] * factor[j];
        num = std::move(next);
      }
      return num;
    }
    // split on the most frequent variable
    std::array<int, kNumVars> freq{};
    for (const Monomial& a : m)
      for (int i = 0; i < kNumVars; ++i)
        if (a.e[i]) ++freq[std::size_t(i)];
    int v = 0;
    for (int i = 1; i < kNumVars; ++i)
      if (freq[std::size_t(i)] > freq[std::size_t(v)]) v = i;
    Monomial x = Monomial::variable(v);
    std::vector<Monomial> colon, plus;
    for (const Monomial& a : m) {
      Monomial q = a;
      if (q.e[std::size_t(v)]) q.e[std::size_t(v)]--;
      colon.push_back(q);
      if (!a.e[std::size_t(v)]) plus.push_back(a);
    }
    plus.push_back(x);
    std::vector<long long> nc = go(std::move(colon));
    std::vector<long long> np = go(std::move(plus));
    std::vector<long long> out(std::max(nc.size() + 1, np.size()), 0);
    for (std::size_t i = 0; i < nc.size(); ++i) out[i + 1] += nc[i];
    for (std::size_t i = 0; i < np.size(); ++i) out[i] += np[i];
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
  };
  return go(gens);
}

long long HilbertData::eval(long long n) const {
  long long v = 0;
  long long pw = 1;
  for (int k = 0; k <= 4; ++k) {
    v += coeff24[std::size_t(k)] * pw;
    pw *= n;
  }
  return v / 24;
}

HilbertData hilbert_polynomial(const GroebnerBasis& gb) {
  std::vector<Monomial> lts;
  for (const Poly& g : gb.generators)
    if (!g.is_zero()) lts.push_back(g.leading().mono);
  std::vector<long long> num = hilbert_numerator(lts);
  // P(n) = sum_k num[k] * binomPoly(n - k + 4, 4); expand exactly over /24.
  // binomPoly(n + a, 4) = (n+a)(n+a-1)(n+a-2)(n+a-3) / 24.
  HilbertData h;
  for (std::size_t k = 0; k < num.size(); ++k) {
    if (!num[k]) continue;
    long long a = 4 - (long long)k;
    // expand (n + a)(n + a - 1)(n + a - 2)(n + a - 3)
    std::array<long long, 5> acc{};
    acc[0] = 1;
    for (int f = 0; f < 4; ++f) {
      long long c = a - f;
      std::array<long long, 5> next{};
      for (int d = 0; d <= 3; ++d) {
        next[std::size_t(d) + 1] += acc[std::size_t(d)];
        next[std::size_t(d)] += acc[std::size_t(d)] * c;
      }
      acc = next;
    }
    for (int d = 0; d <= 4; ++d)
      h.coeff24[std::size_t(d)] += num[k] * acc[std::size_t(d)];
  }
  h.projective_dim = -1;
  for (int d = 4; d >= 0; --d)
    if (h.coeff24[std::size_t(d)] != 0) {
      h.projective_dim = d;
      break;
    }
  if (h.projective_dim >= 0) {
    long long fact = 1;
    for (int i = 2; i <= h.projective_dim; ++i) fact *= i;
    h.degree = h.coeff24[std::size_t(h.projective_dim)] * fact / 24;
  }
  h.chi = h.coeff24[0] / 24;
  if (h.projective_dim == 2) {
    // P(n) = (d/2) n^2 + (d/2 - pi + 1) n + chi
    long long linear24 = h.coeff24[1];
    // pi = d/2 + 1 - linear
    h.sectional_genus = h.degree / 2 + 1 - linear24 / 24;
  }
  return h;
}

namespace {

bool cone_dimension_zero(const GroebnerBasis& gb) {
  // Artinian iff a pure power of every variable appears among leading terms.
  std::array<bool, kNumVars> seen{};
  for (const Poly& g : gb.generators) {
    if (g.is_zero()) continue;
    const Monomial& m = g.leading().mono;
    int support = -1;
    bool pure = true;
    for (int i = 0; i < kNumVars; ++i) {
      if (!m.e[i]) continue;
      if (support >= 0) {
        pure = false;
        break;
      }
      support = i;
    }
    if (pure && support >= 0) seen[std::size_t(support)] = true;
    if (pure && support < 0) return true;  // 1 in the ideal
  }
  for (bool b : seen)
    if (!b) return false;
  return true;
}

}  // namespace

SmoothnessResult jacobian_singular_locus(const std::vector<Poly>& ideal,
                                         double budget_seconds) {
  auto t0 = std::chrono::steady_clock::now();
  auto remaining = [&]() {
    if (budget_seconds < 0) return -1.0;
    double used =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return std::max(0.0, budget_seconds - used);
  };
  SmoothnessResult out;
  if (ideal.empty()) {
    out.detail = "empty ideal";
    return out;
  }
  if (budget_seconds == 0) {
    out.detail = "budget exhausted before start";
    return out;
  }
  // Jacobian 2x2 minors, by total degree.
  std::vector<Poly> jac;
  for (const Poly& g : ideal)
    for (int v = 0; v < kNumVars; ++v) jac.push_back(derivative(g, v));
  auto J = [&](std::size_t i, int v) { return jac[i * kNumVars + std::size_t(v)]; };
  std::vector<Poly> minors;
  for (std::size_t i = 0; i < ideal.size(); ++i)
    for (std::size_t j = i + 1; j < ideal.size(); ++j)
      for (int a = 0; a < kNumVars; ++a)
        for (int b = a + 1; b < kNumVars; ++b) {
          Poly m = sub(mul(J(i, a), J(j, b)), mul(J(i, b), J(j, a)));
          if (!m.is_zero()) minors.push_back(m);
        }
  std::sort(minors.begin(), minors.end(), [](const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return degrevlex_greater(b.leading().mono, a.leading().mono);
  });

  std::vector<Poly> current = ideal;
  GroebnerResult gr = buchberger(current, remaining());
  if (gr.status == GroebnerResult::Status::Inconclusive) {
    out.verdict = SmoothnessVerdict::Inconclusive;
    out.witness = current;
    out.detail = "budget exhausted on the base ideal";
    return out;
  }
  std::vector<Poly> gb = gr.basis.generators;
  const std::size_t batch = 24;
  std::size_t added = 0;
  while (added < minors.size()) {
    std::vector<Poly> fresh;
    while (added < minors.size() && fresh.size() < batch) {
      Poly nf = normal_form(minors[added], gb);
      ++added;
      if (!nf.is_zero()) fresh.push_back(nf);
    }
    if (fresh.empty()) continue;
    std::vector<Poly> next = gb;
    next.insert(next.end(), fresh.begin(), fresh.end());
    double left = remaining();
    if (left == 0.0) {
      out.verdict = SmoothnessVerdict::Inconclusive;
      out.witness = next;
      out.detail = "budget exhausted while absorbing minors";
      return out;
    }
    GroebnerResult step = buchberger(next, left);
    if (step.status == GroebnerResult::Status::Inconclusive) {
      out.verdict = SmoothnessVerdict::Inconclusive;
      out.witness = step.basis.generators;
      out.detail = "budget exhausted while absorbing minors";
      return out;
    }
    gb = step.basis.generators;
    if (cone_dimension_zero(GroebnerBasis{gb, true})) {
      out.verdict = SmoothnessVerdict::Smooth;
      out.witness = gb;
      out.detail = "singular locus ideal is irrelevant (" +
                   std::to_string(added) + " of " +
                   std::to_string(minors.size()) + " minors used)";
      return out;
    }
  }
  out.verdict = SmoothnessVerdict::Singular;
  out.witness = gb;
  out.detail = "singular locus has positive cone dimension";
  return out;
}

QuadraticExtension::QuadraticExtension(gf::PrimeField base) : f_(base), nr_(0) {
  unsigned p = f_.modulus();
  if (p == 2) throw std::invalid_argument("p must be odd");
  // t^2 - 2 when 2 is a nonresidue (the case p = 5); otherwise the first
  // nonresidue. Verified irreducible by scanning for roots.
  auto is_residue = [&](unsigned a) {
    for (unsigned x = 0; x < p; ++x)
      if (x * x % p == a) return true;
    return false;
  };
  nr_ = 2 % p;
  if (is_residue(nr_)) {
    for (unsigned a = 2; a < p; ++a)
      if (!is_residue(a)) {
        nr_ = a;
        break;
      }
  }
  for (unsigned x = 0; x < p; ++x)
    if (x * x % p == nr_)
      throw std::logic_error("modulus t^2 - c is reducible");
}

unsigned QuadraticExtension::add(unsigned x, unsigned y) const {
  unsigned p = f_.modulus();
  unsigned a = f_.add(uint8_t(x % p), uint8_t(y % p));
  unsigned b = f_.add(uint8_t(x / p), uint8_t(y / p));
  return a + p * b;
}

unsigned QuadraticExtension::mul(unsigned x, unsigned y) const {
  unsigned p = f_.modulus();
  unsigned a = x % p, b = x / p, c = y % p, d = y / p;
  unsigned re = (a * c + nr_ * (b * d) % p) % p;
  unsigned im = (a * d + b * c) % p;
  return re + p * im;
}

unsigned QuadraticExtension::frobenius(unsigned x) const {
  unsigned e = f_.modulus();
  unsigned result = 1, base = x;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

unsigned QuadraticExtension::inv(unsigned x) const {
  if (x == 0) throw std::invalid_argument("inverse of zero");
  unsigned q = size();
  unsigned e = q - 2;
  unsigned result = 1, base = x;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

unsigned long projective_point_count(unsigned p, int extension_degree) {
  unsigned long q = p;
  if (extension_degree == 2) q = (unsigned long)p * p;
  unsigned long n = 0, pw = 1;
  for (int i = 0; i <= 4; ++i) {
    n += pw;
    pw *= q;
  }
  return n;
}

namespace {

// Evaluation of a polynomial at a point of F_q^5 via precomputed coordinate
// power tables. Base-field coefficients embed directly.
template <typename MulFn, typename AddFn>
unsigned eval_poly(const Poly& f,
                   const std::vector<std::array<unsigned, 32>>& powers,
                   MulFn&& fmul, AddFn&& fadd) {
  unsigned acc = 0;
  for (const Term& t : f.terms()) {
    unsigned prod = t.coeff;
    for (int i = 0; i < kNumVars; ++i) {
      uint8_t e = t.mono.e[std::size_t(i)];
      if (e) prod = fmul(prod, powers[std::size_t(i)][e]);
    }
    acc = fadd(acc, prod);
  }
  return acc;
}

}  // namespace

std::vector<ScanPoint> rational_point_scan(const std::vector<Poly>& ideal,
                                           int extension_degree,
                                           unsigned workers) {
  if (extension_degree != 1 && extension_degree != 2)
    throw std::invalid_argument("extension degree must be 1 or 2");
  if (ideal.empty()) throw std::invalid_argument("empty generator list");
  const gf::PrimeField& F = ideal.front().field();
  unsigned p = F.modulus();
  unsigned q = extension_degree == 2 ? p * p : p;
  QuadraticExtension ext2(F);

  auto fmul = [&](unsigned a, unsigned b) -> unsigned {
    if (extension_degree == 1) return a * b % p;
    return ext2.mul(a, b);
  };
  auto fadd = [&](unsigned a, unsigned b) -> unsigned {
    if (extension_degree == 1) return (a + b) % p;
    return ext2.add(a, b);
  };
  auto fneg = [&](unsigned a) -> unsigned {
    if (extension_degree == 1) return (p - a % p) % p;
    return ext2.mul(a, p - 1);  // -1 embeds as p - 1
  };

  // Jacobian entries for the rank check at each zero.
  std::vector<Poly> jac;
  for (const Poly& g : ideal)
    for (int v = 0; v < kNumVars; ++v) jac.push_back(derivative(g, v));

  // enumerate canonical representatives: leading coordinate 1, earlier 0
  if (workers == 0) workers = 1;
  std::vector<std::vector<ScanPoint>> found(workers);

  auto run = [&](unsigned w) {
    std::vector<std::array<unsigned, 32>> powers(kNumVars);
    unsigned long idx = 0;
    for (int lead = 0; lead < kNumVars; ++lead) {
      unsigned long freedom = 1;
      for (int i = lead + 1; i < kNumVars; ++i) freedom *= q;
      for (unsigned long u = 0; u < freedom; ++u, ++idx) {
        if (idx % workers != w) continue;
        std::array<unsigned, kNumVars> pt{};
        pt[std::size_t(lead)] = 1;
        unsigned long rest = u;
        for (int i = lead + 1; i < kNumVars; ++i) {
          pt[std::size_t(i)] = unsigned(rest % q);
          rest /= q;
        }
        for (int i = 0; i < kNumVars; ++i) {
          powers[std::size_t(i)][0] = 1;
          for (int e = 1; e < 32; ++e)
            powers[std::size_t(i)][std::size_t(e)] =
                fmul(powers[std::size_t(i)][std::size_t(e - 1)],
                     pt[std::size_t(i)]);
        }
        bool zero_everywhere = true;
        for (const Poly& g : ideal) {
          if (eval_poly(g, powers, fmul, fadd) != 0) {
            zero_everywhere = false;
            break;
          }
        }
        if (!zero_everywhere) continue;
        // rank of the Jacobian at pt
        std::size_t rows = ideal.size();
        std::vector<unsigned> m(rows * kNumVars);
        for (std::size_t r = 0; r < rows; ++r)
          for (int v = 0; v < kNumVars; ++v)
            m[r * kNumVars + std::size_t(v)] =
                eval_poly(jac[r * kNumVars + std::size_t(v)], powers, fmul,
                          fadd);
        int rank = 0;
        std::size_t rr = 0;
        for (int c = 0; c < kNumVars && rr < rows; ++c) {
          std::size_t sel = rr;
          while (sel < rows && m[sel * kNumVars + std::size_t(c)] == 0) ++sel;
          if (sel == rows) continue;
          std::swap_ranges(m.begin() + long(rr * kNumVars),
                           m.begin() + long((rr + 1) * kNumVars),
                           m.begin() + long(sel * kNumVars));
          unsigned piv = m[rr * kNumVars + std::size_t(c)];
          unsigned inv =
              extension_degree == 1 ? F.inv(uint8_t(piv)) : ext2.inv(piv);
          for (std::size_t i = rr + 1; i < rows; ++i) {
            unsigned v = m[i * kNumVars + std::size_t(c)];
            if (!v) continue;
            unsigned factor = fmul(v, inv);
            for (int cc = c; cc < kNumVars; ++cc) {
              unsigned sub_v = fmul(factor, m[rr * kNumVars + std::size_t(cc)]);
              m[i * kNumVars + std::size_t(cc)] =
                  fadd(m[i * kNumVars + std::size_t(cc)], fneg(sub_v));
            }
          }
          ++rank;
          ++rr;
        }
        found[w].push_back(ScanPoint{ProjectivePoint{pt}, rank});
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  std::vector<ScanPoint> out;
  for (auto& v : found)
    for (auto& s : v) out.push_back(std::move(s));
  std::sort(out.begin(), out.end(), [](const ScanPoint& a, const ScanPoint& b) {
    return a.point.coords < b.point.coords;
  });
  return out;
}

std::string format_ideal(const std::vector<Poly>& ideal) {
  if (ideal.empty()) throw std::invalid_argument("empty ideal");
  std::ostringstream os;
  os << "p " << ideal.front().field().modulus() << "\n";
  os << "vars x0 x1 x2 x3 x4\n";
  for (const Poly& g : ideal) os << g.to_string() << "\n";
  return os.str();
}

namespace {

Poly parse_poly(gf::PrimeField F, const std::string& line) {
  std::vector<Term> terms;
  std::size_t i = 0;
  auto peek = [&]() { return i < line.size() ? line[i] : '\0'; };
  while (i < line.size()) {
    int sign = 1;
    while (peek() == '+' || peek() == '-' || peek() == ' ') {
      if (line[i] == '-') sign = -sign;
      ++i;
    }
    if (i >= line.size()) break;
    long long coeff = 1;
    bool saw_coeff = false;
    if (isdigit(peek())) {
      coeff = 0;
      while (isdigit(peek())) coeff = coeff * 10 + (line[i++] - '0');
      saw_coeff = true;
    }
    Monomial m;
    bool saw_var = false;
    while (true) {
      while (peek() == '*' || peek() == ' ') ++i;
      if (peek() != 'x') break;
      ++i;
      int var = 0;
      while (isdigit(peek())) var = var * 10 + (line[i++] - '0');
      if (var < 0 || var >= kNumVars)
        throw std::invalid_argument("bad variable in ideal file");
      int e = 1;
      if (peek() == '^') {
        ++i;
        e = 0;
        while (isdigit(peek())) e = e * 10 + (line[i++] - '0');
      }
      m.e[std::size_t(var)] = uint8_t(m.e[std::size_t(var)] + e);
      saw_var = true;
    }
    if (!saw_coeff && !saw_var)
      throw std::invalid_argument("malformed term in ideal file");
    terms.push_back(Term{m, F.from_int(sign * coeff)});
  }
  return Poly(F, std::move(terms));
}

}  // namespace

std::vector<Poly> parse_ideal(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("p ", 0) != 0)
    throw std::invalid_argument("ideal file must begin with \"p <prime>\"");
  unsigned p = unsigned(std::stoul(line.substr(2)));
  gf::PrimeField F(p);
  if (!std::getline(is, line) || line.rfind("vars ", 0) != 0)
    throw std::invalid_argument("ideal file must declare vars");
  std::vector<Poly> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.push_back(parse_poly(F, line));
  }
  return out;
}

}  // namespace rsurf::poly
