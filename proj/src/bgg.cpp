#include "rsurf/bgg.hpp"

#include <algorithm>

namespace rsurf::bgg {

using ext::ExtElement;
using ext::ExteriorAlgebra;
using gf::Matrix;
using poly::Monomial;

namespace {

long long binom(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

long expected_section_dim(int p, int m) {
  if (m < 0) return 0;
  if (p == 0) return long(binom(m + 4, 4));
  return long(binom(p + m - 1, p) * binom(4 + m, p + m));
}

gf::Matrix koszul_matrix(gf::PrimeField field, int p, int m) {
  const auto& src_masks = ext::masks_of_weight(p);
  const auto& tgt_masks = ext::masks_of_weight(p - 1);
  const auto& src_mons = poly::monomials_of_degree(m);
  const auto& tgt_mons = poly::monomials_of_degree(m + 1);
  Matrix k(field, tgt_masks.size() * tgt_mons.size(),
           src_masks.size() * src_mons.size());
  for (std::size_t a = 0; a < src_masks.size(); ++a) {
    unsigned s = src_masks[a];
    for (int i = 0; i < ext::kNumVars; ++i) {
      if (!(s & (1u << i))) continue;
      int sg = ext::contract_sign(1u << i, s);
      std::size_t tmask = ext::mask_index(s ^ (1u << i));
      uint8_t v = sg < 0 ? field.neg(1) : 1;
      for (std::size_t j = 0; j < src_mons.size(); ++j) {
        Monomial prod = src_mons[j] * Monomial::variable(i);
        std::size_t tj = poly::monomial_index(prod);
        k.set(tmask * tgt_mons.size() + tj, a * src_mons.size() + j, v);
      }
    }
  }
  return k;
}

KoszulSpace compute_koszul_sections(gf::PrimeField field, int p, int m) {
  if (m < 0) return KoszulSpace{p, m, Matrix(field, 0, 0)};
  Matrix k = koszul_matrix(field, p, m);
  return KoszulSpace{p, m, gf::kernel_basis(k)};
}

gf::Matrix contraction_action_matrix(const ExteriorAlgebra& alg,
                                     const ExtElement& u, int p, int m) {
  const gf::PrimeField& F = alg.field();
  const auto& src_masks = ext::masks_of_weight(p);
  int tp = p - (u.degree() <= ext::kNumVars ? u.degree() : 0);
  const auto& tgt_masks = ext::masks_of_weight(tp);
  std::size_t dim_s = poly::monomials_of_degree(m).size();
  Matrix out(F, tgt_masks.size() * dim_s, src_masks.size() * dim_s);
  if (u.is_zero() || tp < 0) return out;
  for (std::size_t a = 0; a < src_masks.size(); ++a) {
    std::vector<uint8_t> img = alg.contract_action(u, src_masks[a]);
    for (std::size_t b = 0; b < img.size(); ++b) {
      if (!img[b]) continue;
      for (std::size_t j = 0; j < dim_s; ++j)
        out.set(b * dim_s + j, a * dim_s + j, img[b]);
    }
  }
  return out;
}

const KoszulSpace& SectionCache::get(int p, int m) {
  auto it = cache_.find({p, m});
  if (it != cache_.end()) return it->second;
  return cache_.emplace(std::make_pair(p, m), compute_koszul_sections(f_, p, m))
      .first->second;
}

MonadAnalysis::MonadAnalysis(SectionCache& cache,
                             const monad::MonadContext& ctx,
                             const monad::MonadData& data)
    : cache_(cache), ctx_(ctx), data_(data) {
  if (data.status != monad::MonadStatus::Ok)
    throw std::invalid_argument("monad data is not a verified monad");
}

const MonadAnalysis::TwistWork& MonadAnalysis::work(int n) {
  auto it = work_.find(n);
  if (it != work_.end()) return it->second;
  const ExteriorAlgebra& alg = ctx_.alg();
  const gf::PrimeField& F = alg.field();
  TwistWork w(F);
  const auto& mid = data_.B.source().twists;  // (2, 2, 1, 1)
  for (int t : mid) w.mid_p.push_back(t);
  std::size_t sec_total = 0;
  std::vector<const KoszulSpace*> mid_secs;
  for (int p : w.mid_p) {
    const KoszulSpace& ks = cache_.get(p, n);
    mid_secs.push_back(&ks);
    w.mid_dims.push_back(long(ks.basis.cols()));
    sec_total += ks.basis.cols();
  }
  std::size_t dim_sn = poly::dim_degree(n);
  // H0(B): one block row (3 * S_n), columns grouped by middle summand.
  Matrix h0b(F, 3 * dim_sn, sec_total);
  std::size_t coff = 0;
  for (std::size_t s = 0; s < w.mid_p.size(); ++s) {
    const KoszulSpace& ks = *mid_secs[s];
    if (ks.basis.cols() == 0) continue;
    for (std::size_t r = 0; r < 3; ++r) {
      const ExtElement& u = data_.B.at(r, s);
      if (u.is_zero()) continue;
      Matrix act = contraction_action_matrix(alg, u, w.mid_p[s], n);
      Matrix cols = gf::multiply(act, ks.basis);
      for (std::size_t i = 0; i < cols.rows(); ++i)
        for (std::size_t j = 0; j < cols.cols(); ++j)
          if (cols(i, j))
            h0b.set(r * dim_sn + i, coff + j,
                    F.add(h0b(r * dim_sn + i, coff + j), cols(i, j)));
    }
    coff += ks.basis.cols();
  }
  w.rank_b = long(gf::rank_of(h0b));
  w.ker_b = gf::kernel_basis(h0b);
  // H0(A): images of Omega^3(3+n) sections in ambient middle coordinates.
  const KoszulSpace& a_src = cache_.get(3, n);
  std::size_t acols = 4 * a_src.basis.cols();
  if (acols == 0) {
    w.rank_a = 0;
    w.a_injective = true;
  } else {
    std::size_t amb_total = 0;
    std::vector<std::size_t> amb_off;
    for (int p : w.mid_p) {
      amb_off.push_back(amb_total);
      amb_total += ext::masks_of_weight(p).size() * dim_sn;
    }
    Matrix h0a(F, amb_total, acols);
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t s = 0; s < w.mid_p.size(); ++s) {
        const ExtElement& u = data_.A.at(s, j);
        if (u.is_zero()) continue;
        Matrix act = contraction_action_matrix(alg, u, 3, n);
        Matrix cols = gf::multiply(act, a_src.basis);
        for (std::size_t i = 0; i < cols.rows(); ++i)
          for (std::size_t c = 0; c < cols.cols(); ++c)
            if (cols(i, c))
              h0a.set(amb_off[s] + i, j * a_src.basis.cols() + c,
                      F.add(h0a(amb_off[s] + i, j * a_src.basis.cols() + c),
                            cols(i, c)));
      }
    }
    w.rank_a = long(gf::rank_of(h0a));
    w.a_injective = w.rank_a == long(acols);
    // check im(H0A) inside ker(H0B): apply the B action blockwise to h0a
    Matrix ba(F, 3 * dim_sn, acols);
    for (std::size_t s = 0; s < w.mid_p.size(); ++s) {
      std::size_t rows_s = ext::masks_of_weight(w.mid_p[s]).size() * dim_sn;
      Matrix block(F, rows_s, acols);
      for (std::size_t i = 0; i < rows_s; ++i)
        for (std::size_t c = 0; c < acols; ++c)
          block.set(i, c, h0a(amb_off[s] + i, c));
      for (std::size_t r = 0; r < 3; ++r) {
        const ExtElement& u = data_.B.at(r, s);
        if (u.is_zero()) continue;
        Matrix act = contraction_action_matrix(alg, u, w.mid_p[s], n);
        Matrix contrib = gf::multiply(act, block);
        for (std::size_t i = 0; i < contrib.rows(); ++i)
          for (std::size_t c = 0; c < acols; ++c)
            if (contrib(i, c))
              ba.set(r * dim_sn + i, c,
                     F.add(ba(r * dim_sn + i, c), contrib(i, c)));
      }
    }
    w.image_in_kernel = gf::rank_of(ba) == 0;
  }
  return work_.emplace(n, std::move(w)).first->second;
}

H0Result MonadAnalysis::monad_h0(int n) {
  if (n < 0) throw std::invalid_argument("twist offset must be >= 0");
  H0Result out;
  if (n == 0) {
    // all three terms are cohomology-free except H^0(3 O) = K^3
    for (int p : {1, 2, 3}) {
      const KoszulSpace& ks = cache_.get(p, 0);
      if (ks.basis.cols() != 0) {
        out.defect = true;
        out.detail = "Omega^" + std::to_string(p) + "(" + std::to_string(p) +
                     ") unexpectedly has sections";
        return out;
      }
    }
    out.h0 = 0;
    out.h1 = 3;
    return out;
  }
  const TwistWork& w = work(n);
  out.ker_b = 0;
  for (long d : w.mid_dims) out.ker_b += d;
  out.ker_b -= w.rank_b;
  out.rank_a = w.rank_a;
  out.h0 = out.ker_b - out.rank_a;
  if (!w.a_injective) {
    out.defect = true;
    out.detail = "A-sections are not injective";
  }
  if (!w.image_in_kernel) {
    out.defect = true;
    out.detail = "B o A is nonzero on sections";
  }
  return out;
}

namespace {

// block sign: e_u _| x_u for |u| = p (constant per weight)
int full_pair_sign(unsigned mask) { return ext::contract_sign(mask, mask); }

}  // namespace

PsiResult MonadAnalysis::embedding_section_variant(std::size_t skip) {
  const ExteriorAlgebra& alg = ctx_.alg();
  const gf::PrimeField& F = alg.field();
  PsiResult out;
  const auto& mid = data_.B.source().twists;
  const auto& s4 = poly::monomials_of_degree(4);
  const auto& s5 = poly::monomials_of_degree(5);
  const auto& s1 = poly::monomials_of_degree(1);
  std::size_t dim4 = s4.size(), dim5 = s5.size();
  // unknown layout
  std::vector<std::size_t> block_off, block_masks;
  std::size_t unknowns = 0;
  for (int p : mid) {
    block_off.push_back(unknowns);
    block_masks.push_back(ext::masks_of_weight(p).size());
    unknowns += ext::masks_of_weight(p).size() * dim4;
  }
  // A-source sections and their middle-ambient images at n = 1
  const KoszulSpace& sec31 = cache_.get(3, 1);
  std::size_t nsec = sec31.basis.cols();
  Matrix constraints(F, 4 * nsec * dim5, unknowns);
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t s = 0; s < mid.size(); ++s) {
      const ExtElement& u = data_.A.at(s, j);
      if (u.is_zero()) continue;
      Matrix act = contraction_action_matrix(alg, u, 3, 1);
      Matrix amb = gf::multiply(act, sec31.basis);  // (masks_p * S_1) x nsec
      const auto& masks_p = ext::masks_of_weight(mid[s]);
      for (std::size_t a = 0; a < masks_p.size(); ++a) {
        int sg = full_pair_sign(masks_p[a]);
        for (std::size_t mu = 0; mu < s1.size(); ++mu) {
          for (std::size_t sec = 0; sec < nsec; ++sec) {
            uint8_t v = amb(a * s1.size() + mu, sec);
            if (!v) continue;
            uint8_t sv = sg < 0 ? F.neg(v) : v;
            for (std::size_t g = 0; g < dim4; ++g) {
              std::size_t rho = poly::monomial_index(s4[g] * s1[mu]);
              std::size_t row = (j * nsec + sec) * dim5 + rho;
              std::size_t col = block_off[s] + a * dim4 + g;
              constraints.set(row, col, F.add(constraints(row, col), sv));
            }
          }
        }
      }
    }
  }
  Matrix null = gf::kernel_basis(constraints);
  out.raw_solution_dim = long(null.cols());
  // the q o B factoring subspace
  Matrix fac(F, unknowns, 3 * dim4);
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t s = 0; s < mid.size(); ++s) {
      const ExtElement& u = data_.B.at(j, s);
      if (u.is_zero()) continue;
      for (unsigned mask : ext::masks_of_weight(u.degree())) {
        uint8_t c = u.coeff(mask);
        if (!c) continue;
        std::size_t a = ext::mask_index(mask);
        for (std::size_t g = 0; g < dim4; ++g)
          fac.set(block_off[s] + a * dim4 + g, j * dim4 + g, c);
      }
    }
  }
  out.factoring_dim = long(gf::rank_of(fac));
  // tensors acting as the zero bundle map: per summand, the kernel of the
  // action on sections of Omega^p(p+1) (global generation makes vanishing
  // there equivalent to vanishing as a bundle map)
  Matrix zero_action(F, unknowns, 0);
  for (std::size_t s = 0; s < mid.size(); ++s) {
    const KoszulSpace& sec = cache_.get(mid[s], 1);
    std::size_t nsec_s = sec.basis.cols();
    const auto& masks_p = ext::masks_of_weight(mid[s]);
    Matrix action(F, nsec_s * dim5, masks_p.size() * dim4);
    for (std::size_t a = 0; a < masks_p.size(); ++a) {
      int sg = full_pair_sign(masks_p[a]);
      for (std::size_t mu = 0; mu < s1.size(); ++mu) {
        for (std::size_t sv = 0; sv < nsec_s; ++sv) {
          uint8_t v = sec.basis(a * s1.size() + mu, sv);
          if (!v) continue;
          uint8_t svv = sg < 0 ? F.neg(v) : v;
          for (std::size_t g = 0; g < dim4; ++g) {
            std::size_t rho = poly::monomial_index(s4[g] * s1[mu]);
            std::size_t row = sv * dim5 + rho;
            action.set(row, a * dim4 + g, F.add(action(row, a * dim4 + g), svv));
          }
        }
      }
    }
    Matrix zk = gf::kernel_basis(action);
    Matrix lifted(F, unknowns, zk.cols());
    for (std::size_t i = 0; i < zk.rows(); ++i)
      for (std::size_t j = 0; j < zk.cols(); ++j)
        if (zk(i, j)) lifted.set(block_off[s] + i, j, zk(i, j));
    zero_action = Matrix::hcat(zero_action, lifted);
  }
  out.zero_action_dim = long(zero_action.cols());
  out.solution_dim = out.raw_solution_dim - out.zero_action_dim;
  std::vector<std::size_t> outside =
      gf::complement_columns(Matrix::hcat(fac, zero_action), null);
  if (outside.empty()) {
    out.detail = "no solution outside the factoring subspace";
    return out;
  }
  std::size_t pick = outside[std::min(skip, outside.size() - 1)];
  out.psi.blocks.resize(mid.size());
  for (std::size_t s = 0; s < mid.size(); ++s) {
    out.psi.blocks[s].assign(block_masks[s] * dim4, 0);
    for (std::size_t i = 0; i < block_masks[s] * dim4; ++i)
      out.psi.blocks[s][i] = null(block_off[s] + i, pick);
  }
  out.ok = true;
  if (out.solution_dim != long(3 * dim4 + 1))
    out.detail = "solution space has unexpected dimension " +
                 std::to_string(out.solution_dim) + " modulo zero actions";
  return out;
}

const PsiResult& MonadAnalysis::embedding_section() {
  if (!psi_) psi_ = embedding_section_variant(0);
  return *psi_;
}

std::vector<IdealSlice> MonadAnalysis::ideal_slices(
    const PsiTensor& psi, const std::vector<int>& degrees) {
  const ExteriorAlgebra& alg = ctx_.alg();
  const gf::PrimeField& F = alg.field();
  const auto& mid = data_.B.source().twists;
  const auto& s4 = poly::monomials_of_degree(4);
  std::vector<IdealSlice> out;
  for (int m : degrees) {
    int n = m - 4;
    if (n < 1) throw std::invalid_argument("slice degrees start at 5");
    const TwistWork& w = work(n);
    const auto& sm = poly::monomials_of_degree(m);
    const auto& sn = poly::monomials_of_degree(n);
    std::size_t nullity = w.ker_b.cols();
    std::vector<uint32_t> acc(sm.size() * nullity, 0);
    std::size_t sec_off = 0;
    for (std::size_t s = 0; s < mid.size(); ++s) {
      const KoszulSpace& ks = cache_.get(mid[s], n);
      std::size_t nsec = ks.basis.cols();
      if (nsec == 0) continue;
      // rows of ker_b belonging to this summand
      Matrix ksec(F, nsec, nullity);
      for (std::size_t i = 0; i < nsec; ++i)
        for (std::size_t j = 0; j < nullity; ++j)
          ksec.set(i, j, w.ker_b(sec_off + i, j));
      Matrix amb = gf::multiply(ks.basis, ksec);  // (masks * S_n) x nullity
      const auto& masks_p = ext::masks_of_weight(mid[s]);
      const std::vector<uint8_t>& block = psi.blocks.at(s);
      for (std::size_t a = 0; a < masks_p.size(); ++a) {
        int sg = full_pair_sign(masks_p[a]);
        for (std::size_t g = 0; g < s4.size(); ++g) {
          uint8_t c = block[a * s4.size() + g];
          if (!c) continue;
          uint32_t sc = sg < 0 ? F.neg(c) : c;
          for (std::size_t mu = 0; mu < sn.size(); ++mu) {
            std::size_t rho = poly::monomial_index(s4[g] * sn[mu]);
            const uint8_t* src = amb.row_ptr(a * sn.size() + mu);
            uint32_t* dst = acc.data() + rho * nullity;
            for (std::size_t j = 0; j < nullity; ++j) dst[j] += sc * src[j];
          }
        }
      }
      sec_off += nsec;
    }
    Matrix slice(F, sm.size(), nullity);
    for (std::size_t r = 0; r < sm.size(); ++r)
      for (std::size_t j = 0; j < nullity; ++j)
        slice.set(r, j, uint8_t(acc[r * nullity + j] % F.modulus()));
    gf::RrefResult rr = gf::rref_decompose(slice.transpose());
    long expected = (long(sec_off) - w.rank_b) - w.rank_a;
    // sec_off accumulated all middle section dims
    if (long(rr.rank) != expected)
      throw std::logic_error("slice dimension at degree " + std::to_string(m) +
                             " is " + std::to_string(rr.rank) +
                             ", expected " + std::to_string(expected));
    IdealSlice sl;
    sl.degree = m;
    for (std::size_t i = 0; i < rr.rank; ++i) {
      std::vector<poly::Term> terms;
      for (std::size_t c = 0; c < sm.size(); ++c)
        if (rr.R(i, c)) terms.push_back(poly::Term{sm[c], rr.R(i, c)});
      sl.basis.push_back(poly::Poly(F, std::move(terms)));
    }
    out.push_back(std::move(sl));
  }
  return out;
}

HilbertFit hilbert_fit(const std::map<int, long>& ideal_dims, unsigned p) {
  (void)p;
  HilbertFit out;
  if (ideal_dims.size() < 4) return out;
  // consecutive degrees required
  std::vector<std::pair<int, long long>> h;
  for (const auto& [m, dim] : ideal_dims)
    h.push_back({m, (long long)poly::dim_degree(m) - dim});
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i].first != h[i - 1].first + 1) return out;
  // exact quadratic through the first three, then verify the rest
  long long m0 = h[0].first;
  long long d2 = h[2].second - 2 * h[1].second + h[0].second;
  if (d2 % 2 != 0) return out;
  long long c2 = d2 / 2;
  long long d1 = h[1].second - h[0].second;  // c2(2 m0 + 1) + c1
  long long c1 = d1 - c2 * (2 * m0 + 1);
  long long c0 = h[0].second - c2 * m0 * m0 - c1 * m0;
  for (const auto& [m, hm] : h)
    if (c2 * m * m + c1 * m + c0 != hm) return out;
  out.ok = true;
  out.coeffs = {c0, c1, c2};
  out.d = 2 * c2;
  out.pi = c2 + 1 - c1;  // c1 = d/2 - pi + 1
  out.chi = c0;
  return out;
}

TateModuleSpec tate_module_of_ring(gf::PrimeField field, int hi) {
  TateModuleSpec spec;
  spec.lo = 0;
  for (int i = 0; i <= hi; ++i) {
    spec.dims.push_back(poly::dim_degree(i));
    std::array<gf::Matrix, 5> acts{
        Matrix(field, 0, 0), Matrix(field, 0, 0), Matrix(field, 0, 0),
        Matrix(field, 0, 0), Matrix(field, 0, 0)};
    if (i < hi) {
      const auto& src = poly::monomials_of_degree(i);
      const auto& tgt = poly::monomials_of_degree(i + 1);
      for (int v = 0; v < 5; ++v) {
        Matrix a(field, tgt.size(), src.size());
        for (std::size_t j = 0; j < src.size(); ++j)
          a.set(poly::monomial_index(src[j] * Monomial::variable(v)), j, 1);
        acts[std::size_t(v)] = a;
      }
    }
    spec.actions.push_back(acts);
  }
  return spec;
}

TateModuleSpec tate_module_of_field(gf::PrimeField field) {
  TateModuleSpec spec;
  spec.lo = 0;
  spec.dims = {1, 0};
  std::array<gf::Matrix, 5> a0{Matrix(field, 0, 1), Matrix(field, 0, 1),
                               Matrix(field, 0, 1), Matrix(field, 0, 1),
                               Matrix(field, 0, 1)};
  std::array<gf::Matrix, 5> a1{Matrix(field, 0, 0), Matrix(field, 0, 0),
                               Matrix(field, 0, 0), Matrix(field, 0, 0),
                               Matrix(field, 0, 0)};
  spec.actions = {a0, a1};
  return spec;
}

TateModuleSpec tate_module_of_quotient(gf::PrimeField field,
                                       const std::vector<Monomial>& gens,
                                       int hi) {
  TateModuleSpec spec;
  spec.lo = 0;
  auto in_ideal = [&](const Monomial& m) {
    for (const Monomial& g : gens)
      if (g.divides(m)) return true;
    return false;
  };
  std::vector<std::vector<Monomial>> bases;
  for (int i = 0; i <= hi; ++i) {
    std::vector<Monomial> b;
    for (const Monomial& m : poly::monomials_of_degree(i))
      if (!in_ideal(m)) b.push_back(m);
    bases.push_back(b);
    spec.dims.push_back(b.size());
  }
  for (int i = 0; i <= hi; ++i) {
    std::array<gf::Matrix, 5> acts{
        Matrix(field, 0, 0), Matrix(field, 0, 0), Matrix(field, 0, 0),
        Matrix(field, 0, 0), Matrix(field, 0, 0)};
    if (i < hi) {
      auto index_of = [&](const Monomial& m) -> std::optional<std::size_t> {
        const auto& b = bases[std::size_t(i) + 1];
        for (std::size_t k = 0; k < b.size(); ++k)
          if (b[k] == m) return k;
        return std::nullopt;
      };
      for (int v = 0; v < 5; ++v) {
        Matrix a(field, bases[std::size_t(i) + 1].size(),
                 bases[std::size_t(i)].size());
        for (std::size_t j = 0; j < bases[std::size_t(i)].size(); ++j) {
          Monomial prod = bases[std::size_t(i)][j] * Monomial::variable(v);
          if (auto k = index_of(prod)) a.set(*k, j, 1);
        }
        acts[std::size_t(v)] = a;
      }
    }
    spec.actions.push_back(acts);
  }
  return spec;
}

ext::EModuleMap tate_differential(const ExteriorAlgebra& alg,
                                  const TateModuleSpec& spec, int i) {
  std::size_t idx = std::size_t(i - spec.lo);
  std::size_t nsrc = spec.dims[idx];
  std::size_t ntgt = idx + 1 < spec.dims.size() ? spec.dims[idx + 1] : 0;
  ext::FreeModuleSpec src{std::vector<int>(nsrc, -i)};
  ext::FreeModuleSpec tgt{std::vector<int>(ntgt, -(i + 1))};
  std::vector<ExtElement> es;
  es.reserve(nsrc * ntgt);
  for (std::size_t r = 0; r < ntgt; ++r)
    for (std::size_t c = 0; c < nsrc; ++c) {
      ExtElement u = alg.zero(1);
      for (int v = 0; v < 5; ++v) {
        const Matrix& x = spec.actions[idx][std::size_t(v)];
        if (x.rows() == 0) continue;
        uint8_t coeff = x(r, c);
        if (coeff) u = alg.add(u, alg.scale(alg.generator(v), coeff));
      }
      es.push_back(u);
    }
  return ext::EModuleMap(src, tgt, std::move(es));
}

TateExactness tate_truncation_exactness(const ExteriorAlgebra& alg,
                                        const TateModuleSpec& spec) {
  TateExactness out;
  int hi = spec.hi();
  std::vector<ext::EModuleMap> diffs;
  for (int i = spec.lo; i < hi; ++i)
    diffs.push_back(tate_differential(alg, spec, i));
  for (std::size_t k = 0; k + 1 < diffs.size(); ++k)
    if (!compose(alg, diffs[k + 1], diffs[k]).is_zero())
      out.differential_squares_to_zero = false;
  for (int i = spec.lo; i < hi; ++i) {
    // exactness at F^i: rank(in) + rank(out) == dim piece, all degrees
    bool exact = true;
    const ext::EModuleMap& d_out = diffs[std::size_t(i - spec.lo)];
    const ext::EModuleMap* d_in =
        i > spec.lo ? &diffs[std::size_t(i - spec.lo) - 1] : nullptr;
    for (int d = i; d <= i + ext::kNumVars; ++d) {
      std::size_t dim = d_out.source().piece_dim(d);
      if (dim == 0) continue;
      std::size_t r_out = gf::rank_of(graded_piece_matrix(alg, d_out, d));
      std::size_t r_in =
          d_in ? gf::rank_of(graded_piece_matrix(alg, *d_in, d)) : 0;
      if (r_in + r_out != dim) {
        exact = false;
        break;
      }
    }
    out.positions.push_back({i, exact});
  }
  return out;
}

}  // namespace rsurf::bgg
