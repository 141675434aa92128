#include "rsurf/ext.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace rsurf::ext {

namespace {

struct MaskTables {
  std::array<std::vector<unsigned>, kNumVars + 1> by_weight;
  std::array<std::size_t, kNumMasks> index_in_weight;

  MaskTables() {
    for (unsigned m = 0; m < kNumMasks; ++m) {
      int w = std::popcount(m);
      index_in_weight[m] = by_weight[w].size();
      by_weight[w].push_back(m);
    }
  }
};

const MaskTables& tables() {
  static const MaskTables t;
  return t;
}

}  // namespace

const std::vector<unsigned>& masks_of_weight(int k) {
  static const std::vector<unsigned> empty;
  if (k < 0 || k > kNumVars) return empty;
  return tables().by_weight[k];
}

std::size_t mask_index(unsigned mask) { return tables().index_in_weight[mask]; }

int weight_dim(int k) {
  if (k < 0 || k > kNumVars) return 0;
  return int(tables().by_weight[k].size());
}

int wedge_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  // count pairs (i in a, j in b) with i > j
  int inversions = 0;
  for (unsigned m = b; m; m &= m - 1) {
    unsigned j = unsigned(std::countr_zero(m));
    inversions += std::popcount(a & ~((2u << j) - 1));
  }
  return (inversions & 1) ? -1 : 1;
}

int contract_sign(unsigned v, unsigned w) {
  if ((v & w) != v) return 0;
  int e = 0;
  for (unsigned m = v; m; m &= m - 1) {
    unsigned i = unsigned(std::countr_zero(m));
    e += std::popcount(w & ((1u << i) - 1));
  }
  return (e & 1) ? -1 : 1;
}

void ExtElement::set_coeff(unsigned mask, uint8_t v) {
  if (degree_ > kNumVars) throw std::logic_error("overflow zero is immutable");
  if (std::popcount(mask) != degree_)
    throw std::invalid_argument("mask weight does not match element degree");
  c_[mask] = v;
}

ExtElement ExteriorAlgebra::generator(int i) const {
  ExtElement e(1);
  e.set_coeff(1u << i, 1);
  return e;
}

ExtElement ExteriorAlgebra::monomial(unsigned mask, uint8_t c) const {
  ExtElement e(std::popcount(mask));
  e.set_coeff(mask, c);
  return e;
}

ExtElement ExteriorAlgebra::add(const ExtElement& u, const ExtElement& v) const {
  if (u.is_zero()) return v;
  if (v.is_zero()) return u;
  if (u.degree() != v.degree())
    throw std::invalid_argument("adding elements of different degrees");
  ExtElement r(u.degree());
  for (unsigned m : masks_of_weight(u.degree()))
    r.set_coeff(m, f_.add(u.coeff(m), v.coeff(m)));
  return r;
}

ExtElement ExteriorAlgebra::sub(const ExtElement& u, const ExtElement& v) const {
  return add(u, scale(v, f_.neg(1)));
}

ExtElement ExteriorAlgebra::scale(const ExtElement& u, uint8_t c) const {
  if (u.degree() > kNumVars) return u;
  ExtElement r(u.degree());
  for (unsigned m : masks_of_weight(u.degree()))
    r.set_coeff(m, f_.mul(u.coeff(m), c));
  return r;
}

ExtElement ExteriorAlgebra::wedge(const ExtElement& u, const ExtElement& v) const {
  if (u.degree() > kNumVars || v.degree() > kNumVars)
    return ExtElement::overflow_zero();
  int d = u.degree() + v.degree();
  if (d > kNumVars) return ExtElement::overflow_zero();
  ExtElement r(d);
  for (unsigned a : masks_of_weight(u.degree())) {
    uint8_t ca = u.coeff(a);
    if (!ca) continue;
    for (unsigned b : masks_of_weight(v.degree())) {
      uint8_t cb = v.coeff(b);
      if (!cb) continue;
      int s = wedge_sign(a, b);
      if (!s) continue;
      uint8_t t = f_.mul(ca, cb);
      if (s < 0) t = f_.neg(t);
      r.set_coeff(a | b, f_.add(r.coeff(a | b), t));
    }
  }
  return r;
}

std::vector<uint8_t> ExteriorAlgebra::contract_action(const ExtElement& u,
                                                      unsigned wmask) const {
  int k = std::popcount(wmask);
  int out_weight = k - (u.degree() > kNumVars ? 0 : u.degree());
  if (u.degree() > kNumVars || out_weight < 0)
    return std::vector<uint8_t>(0);
  std::vector<uint8_t> out(weight_dim(out_weight), 0);
  for (unsigned v : masks_of_weight(u.degree())) {
    uint8_t cv = u.coeff(v);
    if (!cv) continue;
    int s = contract_sign(v, wmask);
    if (!s) continue;
    unsigned rest = wmask ^ v;
    uint8_t t = s < 0 ? f_.neg(cv) : cv;
    std::size_t idx = mask_index(rest);
    out[idx] = f_.add(out[idx], t);
  }
  return out;
}

ExtElement ExteriorAlgebra::from_w_coefficients(
    int k, const std::vector<uint8_t>& w) const {
  if (int(w.size()) != weight_dim(k))
    throw std::invalid_argument("coefficient vector has wrong length");
  ExtElement u(kNumVars - k);
  const auto& masks = masks_of_weight(k);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (!w[i]) continue;
    unsigned comp = kFullMask ^ masks[i];
    int s = contract_sign(comp, kFullMask);  // e_comp _| or = s * x_masks[i]
    u.set_coeff(comp, s < 0 ? f_.neg(w[i]) : w[i]);
  }
  return u;
}

std::string ExteriorAlgebra::render(const ExtElement& u) const {
  if (u.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (unsigned m : masks_of_weight(u.degree())) {
    uint8_t c = u.coeff(m);
    if (!c) continue;
    int b = f_.balanced(c);
    if (first) {
      if (b < 0) os << "-";
    } else {
      os << (b < 0 ? " - " : " + ");
    }
    int mag = b < 0 ? -b : b;
    bool wrote_mag = false;
    if (mag != 1 || m == 0) {
      os << mag;
      wrote_mag = true;
    }
    bool first_var = true;
    for (int i = 0; i < kNumVars; ++i) {
      if (!(m & (1u << i))) continue;
      if (!first_var || wrote_mag) os << "*";
      os << "e" << i;
      first_var = false;
    }
    first = false;
  }
  return os.str();
}

std::size_t FreeModuleSpec::piece_dim(int d) const {
  std::size_t n = 0;
  for (std::size_t s = 0; s < twists.size(); ++s)
    n += std::size_t(weight_dim(piece_weight(s, d)));
  return n;
}

std::size_t FreeModuleSpec::piece_offset(std::size_t s, int d) const {
  std::size_t n = 0;
  for (std::size_t t = 0; t < s; ++t)
    n += std::size_t(weight_dim(piece_weight(t, d)));
  return n;
}

std::pair<int, int> FreeModuleSpec::degree_range() const {
  if (twists.empty()) return {0, -1};
  int lo = 1 << 20, hi = -(1 << 20);
  for (int a : twists) {
    lo = std::min(lo, -a);
    hi = std::max(hi, kNumVars - a);
  }
  return {lo, hi};
}

EModuleMap::EModuleMap(FreeModuleSpec source, FreeModuleSpec target,
                       std::vector<ExtElement> entries)
    : source_(std::move(source)), target_(std::move(target)),
      entries_(std::move(entries)) {
  if (entries_.size() != source_.summands() * target_.summands())
    throw std::invalid_argument("entry count does not match shape");
  for (std::size_t r = 0; r < target_.summands(); ++r) {
    for (std::size_t c = 0; c < source_.summands(); ++c) {
      const ExtElement& e = entries_[r * source_.summands() + c];
      if (e.is_zero()) continue;
      if (e.degree() != source_.twists[c] - target_.twists[r])
        throw std::invalid_argument("entry degree inconsistent with twists");
    }
  }
}

EModuleMap EModuleMap::zero(const FreeModuleSpec& source,
                            const FreeModuleSpec& target) {
  std::vector<ExtElement> es;
  es.reserve(source.summands() * target.summands());
  for (std::size_t r = 0; r < target.summands(); ++r)
    for (std::size_t c = 0; c < source.summands(); ++c) {
      int d = source.twists[c] - target.twists[r];
      es.push_back(ExtElement(d >= 0 && d <= kNumVars ? d : kNumVars + 1));
    }
  return EModuleMap(source, target, std::move(es));
}

EModuleMap EModuleMap::identity(const ExteriorAlgebra& alg,
                                const FreeModuleSpec& spec) {
  EModuleMap z = zero(spec, spec);
  std::vector<ExtElement> es;
  es.reserve(spec.summands() * spec.summands());
  for (std::size_t r = 0; r < spec.summands(); ++r)
    for (std::size_t c = 0; c < spec.summands(); ++c)
      es.push_back(r == c ? alg.scalar(1) : z.at(r, c));
  return EModuleMap(spec, spec, std::move(es));
}

bool EModuleMap::is_zero() const {
  for (const ExtElement& e : entries_)
    if (!e.is_zero()) return false;
  return true;
}

gf::Matrix graded_piece_matrix(const ExteriorAlgebra& alg, const EModuleMap& f,
                               int d) {
  const FreeModuleSpec& src = f.source();
  const FreeModuleSpec& tgt = f.target();
  gf::Matrix m(alg.field(), tgt.piece_dim(d), src.piece_dim(d));
  for (std::size_t r = 0; r < tgt.summands(); ++r) {
    int wt_t = tgt.piece_weight(r, d);
    if (wt_t < 0 || wt_t > kNumVars) continue;
    std::size_t roff = tgt.piece_offset(r, d);
    for (std::size_t c = 0; c < src.summands(); ++c) {
      int wt_s = src.piece_weight(c, d);
      if (wt_s < 0 || wt_s > kNumVars) continue;
      const ExtElement& u = f.at(r, c);
      if (u.is_zero()) continue;
      std::size_t coff = src.piece_offset(c, d);
      const auto& smasks = masks_of_weight(wt_s);
      for (std::size_t j = 0; j < smasks.size(); ++j) {
        std::vector<uint8_t> img = alg.contract_action(u, smasks[j]);
        for (std::size_t i = 0; i < img.size(); ++i)
          if (img[i]) m.set(roff + i, coff + j, img[i]);
      }
    }
  }
  return m;
}

EModuleMap compose(const ExteriorAlgebra& alg, const EModuleMap& g,
                   const EModuleMap& f) {
  if (!(f.target() == g.source()))
    throw std::invalid_argument("compose: twist sequences do not match");
  std::vector<ExtElement> es;
  es.reserve(g.rows() * f.cols());
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < f.cols(); ++c) {
      int d = f.source().twists[c] - g.target().twists[r];
      ExtElement acc =
          alg.zero(d >= 0 && d <= kNumVars ? d : kNumVars + 1);
      for (std::size_t k = 0; k < g.cols(); ++k) {
        const ExtElement& a = g.at(r, k);
        const ExtElement& b = f.at(k, c);
        if (a.is_zero() || b.is_zero()) continue;
        ExtElement w = alg.wedge(a, b);
        if (w.is_zero()) continue;
        acc = acc.is_zero() && acc.degree() > kNumVars ? w : alg.add(acc, w);
      }
      es.push_back(acc);
    }
  }
  return EModuleMap(f.source(), g.target(), std::move(es));
}

EModuleMap add_maps(const ExteriorAlgebra& alg, const EModuleMap& a,
                    const EModuleMap& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target()))
    throw std::invalid_argument("add_maps: shape mismatch");
  std::vector<ExtElement> es;
  es.reserve(a.rows() * a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const ExtElement &u = a.at(r, c), &v = b.at(r, c);
      if (u.is_zero())
        es.push_back(v);
      else if (v.is_zero())
        es.push_back(u);
      else
        es.push_back(alg.add(u, v));
    }
  return EModuleMap(a.source(), a.target(), std::move(es));
}

namespace {

gf::Matrix action_matrix_impl(const ExteriorAlgebra& alg,
                              const FreeModuleSpec& spec, int var, int d,
                              bool right_twist) {
  gf::Matrix m(alg.field(), spec.piece_dim(d), spec.piece_dim(d + 1));
  unsigned vm = 1u << var;
  for (std::size_t s = 0; s < spec.summands(); ++s) {
    int wt = spec.piece_weight(s, d + 1);
    if (wt <= 0 || wt > kNumVars) continue;
    int flip = right_twist ? (spec.twists[s] + d) & 1 : 0;
    std::size_t roff = spec.piece_offset(s, d);
    std::size_t coff = spec.piece_offset(s, d + 1);
    const auto& masks = masks_of_weight(wt);
    for (std::size_t j = 0; j < masks.size(); ++j) {
      int sg = contract_sign(vm, masks[j]);
      if (!sg) continue;
      if (flip) sg = -sg;
      std::size_t i = mask_index(masks[j] ^ vm);
      m.set(roff + i, coff + j,
            sg < 0 ? alg.field().neg(1) : uint8_t(1));
    }
  }
  return m;
}

}  // namespace

gf::Matrix module_action_matrix(const ExteriorAlgebra& alg,
                                const FreeModuleSpec& spec, int var, int d) {
  return action_matrix_impl(alg, spec, var, d, false);
}

gf::Matrix module_right_action_matrix(const ExteriorAlgebra& alg,
                                      const FreeModuleSpec& spec, int var,
                                      int d) {
  return action_matrix_impl(alg, spec, var, d, true);
}

}  // namespace rsurf::ext
