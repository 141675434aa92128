#include "rsurf/res.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace rsurf::res {

using ext::EModuleMap;
using ext::ExteriorAlgebra;
using ext::FreeModuleSpec;
using gf::Matrix;

long BettiTable::at(int step, int twist) const {
  auto it = counts.find({step, twist});
  return it == counts.end() ? 0 : it->second;
}

long BettiTable::total() const {
  long t = 0;
  for (const auto& [k, v] : counts) t += v;
  return t;
}

nlohmann::ordered_json BettiTable::to_json() const {
  int max_step = -1;
  for (const auto& [k, v] : counts) max_step = std::max(max_step, k.first);
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (int s = 0; s <= max_step; ++s) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (const auto& [k, v] : counts)
      if (k.first == s) row[std::to_string(k.second)] = v;
    steps.push_back(row);
  }
  nlohmann::ordered_json out;
  out["steps"] = steps;
  return out;
}

std::string BettiTable::render() const {
  if (counts.empty()) return "(empty)\n";
  int max_step = 0, row_lo = 1 << 20, row_hi = -(1 << 20);
  for (const auto& [k, v] : counts) {
    max_step = std::max(max_step, k.first);
    int row = k.first - k.second;
    row_lo = std::min(row_lo, row);
    row_hi = std::max(row_hi, row);
  }
  std::ostringstream os;
  for (int row = row_hi; row >= row_lo; --row) {
    os.width(3);
    os << row << " |";
    for (int s = 0; s <= max_step; ++s) {
      long v = at(s, s - row);
      os.width(4);
      if (v)
        os << v;
      else
        os << ".";
    }
    os << "\n";
  }
  return os.str();
}

namespace {

// Kernel bases of all graded pieces of f, highest degree first.
struct PieceKernels {
  int hi = 0, lo = 1;
  std::vector<Matrix> kernels;  // kernels[hi - d] for degree d
};

PieceKernels piece_kernels(const ExteriorAlgebra& alg, const EModuleMap& f) {
  PieceKernels out;
  auto [lo, hi] = f.source().degree_range();
  out.lo = lo;
  out.hi = hi;
  for (int d = hi; d >= lo; --d)
    out.kernels.push_back(gf::kernel_basis(graded_piece_matrix(alg, f, d)));
  return out;
}

// Images of the columns of k under right multiplication by each e_i,
// concatenated, as vectors in the degree-d piece of spec. This is the action
// preserving kernels and images of entry-matrix maps.
Matrix v_times(const ExteriorAlgebra& alg, const FreeModuleSpec& spec, int d,
               const Matrix& k_above) {
  Matrix out(alg.field(), spec.piece_dim(d), 0);
  if (k_above.cols() == 0) return out;
  for (int i = 0; i < ext::kNumVars; ++i) {
    Matrix act = ext::module_right_action_matrix(alg, spec, i, d);
    out = Matrix::hcat(out, gf::multiply(act, k_above));
  }
  return out;
}

}  // namespace

KernelGenerators minimal_kernel_generators(const ExteriorAlgebra& alg,
                                           const EModuleMap& f) {
  KernelGenerators out;
  PieceKernels pk = piece_kernels(alg, f);
  if (pk.hi < pk.lo) return out;
  for (int d = pk.hi; d >= pk.lo; --d) {
    const Matrix& kd = pk.kernels[pk.hi - d];
    if (kd.cols() == 0) continue;
    Matrix gen_span(alg.field(), kd.rows(), 0);
    if (d < pk.hi) {
      const Matrix& above = pk.kernels[pk.hi - d - 1];
      gen_span = v_times(alg, f.source(), d, above);
    }
    std::vector<std::size_t> picks = gf::complement_columns(gen_span, kd);
    if (picks.empty()) continue;
    Matrix gens(alg.field(), kd.rows(), picks.size());
    for (std::size_t j = 0; j < picks.size(); ++j)
      for (std::size_t r = 0; r < kd.rows(); ++r)
        gens.set(r, j, kd(r, picks[j]));
    out.by_degree.push_back({d, std::move(gens)});
  }
  return out;
}

EModuleMap generators_to_map(const ExteriorAlgebra& alg,
                             const FreeModuleSpec& source,
                             const KernelGenerators& gens) {
  FreeModuleSpec new_src;
  std::vector<ext::ExtElement> entries;
  std::size_t total = 0;
  for (const auto& [d, m] : gens.by_degree) total += m.cols();
  // rows = summands of `source`, columns = one per generator
  std::vector<std::vector<ext::ExtElement>> cols;
  for (const auto& [d, m] : gens.by_degree) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      new_src.twists.push_back(ext::kNumVars - d);
      std::vector<ext::ExtElement> col;
      for (std::size_t s = 0; s < source.summands(); ++s) {
        int wt = source.piece_weight(s, d);
        if (wt < 0 || wt > ext::kNumVars) {
          int deg = ext::kNumVars - d - source.twists[s];
          col.push_back(ext::ExtElement(
              deg >= 0 && deg <= ext::kNumVars ? deg : ext::kNumVars + 1));
          continue;
        }
        std::size_t off = source.piece_offset(s, d);
        std::vector<uint8_t> comp(ext::weight_dim(wt));
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = m(off + i, j);
        col.push_back(alg.from_w_coefficients(wt, comp));
      }
      cols.push_back(std::move(col));
    }
  }
  entries.reserve(source.summands() * total);
  for (std::size_t r = 0; r < source.summands(); ++r)
    for (std::size_t c = 0; c < total; ++c) entries.push_back(cols[c][r]);
  return EModuleMap(new_src, source, std::move(entries));
}

EModuleMap syzygy_step(const ExteriorAlgebra& alg, const EModuleMap& f) {
  return generators_to_map(alg, f.source(),
                           minimal_kernel_generators(alg, f));
}

EModuleMap minimize_columns(const ExteriorAlgebra& alg, const EModuleMap& f) {
  // Column j, as an element of the target, is homogeneous of internal degree
  // 5 - source.twist(j). Keep the columns that survive complement selection
  // against V * (image from degrees above), processed top degree first.
  const FreeModuleSpec& tgt = f.target();
  std::vector<std::size_t> keep;
  auto [lo, hi] = tgt.degree_range();
  // Collect column vectors per degree.
  std::map<int, std::vector<std::size_t>, std::greater<int>> cols_at;
  for (std::size_t c = 0; c < f.cols(); ++c)
    cols_at[ext::kNumVars - f.source().twists[c]].push_back(c);
  // Track the span of E * (kept columns) degreewise, from the top down.
  Matrix span_above(alg.field(), 0, 0);
  bool have_span = false;
  for (int d = hi; d >= lo; --d) {
    Matrix span_d(alg.field(), tgt.piece_dim(d), 0);
    if (have_span) span_d = v_times(alg, tgt, d, span_above);
    auto it = cols_at.find(d);
    if (it != cols_at.end()) {
      Matrix cand(alg.field(), tgt.piece_dim(d), it->second.size());
      for (std::size_t j = 0; j < it->second.size(); ++j) {
        std::size_t c = it->second[j];
        // the column as a vector in piece_d of the target
        for (std::size_t s = 0; s < tgt.summands(); ++s) {
          int wt = tgt.piece_weight(s, d);
          if (wt < 0 || wt > ext::kNumVars) continue;
          const ext::ExtElement& u = f.at(s, c);
          if (u.is_zero()) continue;
          std::vector<uint8_t> img = alg.contract_action(u, ext::kFullMask);
          std::size_t off = tgt.piece_offset(s, d);
          for (std::size_t i = 0; i < img.size(); ++i)
            cand.set(off + i, j, img[i]);
        }
      }
      std::vector<std::size_t> picks = gf::complement_columns(span_d, cand);
      std::set<std::size_t> picked(picks.begin(), picks.end());
      Matrix kept_here(alg.field(), tgt.piece_dim(d), picks.size());
      std::size_t kj = 0;
      for (std::size_t j = 0; j < it->second.size(); ++j) {
        if (!picked.count(j)) continue;
        keep.push_back(it->second[j]);
        for (std::size_t r = 0; r < cand.rows(); ++r)
          kept_here.set(r, kj, cand(r, j));
        ++kj;
      }
      span_d = Matrix::hcat(span_d, kept_here);
    }
    // Reduce to a basis so the span matrices stay small.
    gf::RrefResult rr = gf::rref_decompose(span_d.transpose());
    Matrix basis(alg.field(), span_d.rows(), rr.rank);
    for (std::size_t i = 0; i < rr.rank; ++i)
      for (std::size_t c2 = 0; c2 < span_d.rows(); ++c2)
        basis.set(c2, i, rr.R(i, c2));
    span_above = basis;
    have_span = true;
  }
  std::sort(keep.begin(), keep.end());
  FreeModuleSpec new_src;
  std::vector<ext::ExtElement> entries;
  for (std::size_t c : keep) new_src.twists.push_back(f.source().twists[c]);
  for (std::size_t r = 0; r < f.rows(); ++r)
    for (std::size_t c : keep) entries.push_back(f.at(r, c));
  return EModuleMap(new_src, f.target(), std::move(entries));
}

Resolution minimal_resolution(const ExteriorAlgebra& alg,
                              const PresentedEModule& m, int steps) {
  Resolution res;
  if (steps < 1) return res;
  res.maps.push_back(minimize_columns(alg, m.presentation));
  for (int k = 1; k < steps; ++k)
    res.maps.push_back(syzygy_step(alg, res.maps.back()));
  return res;
}

BettiTable betti_table_of(const Resolution& res) {
  BettiTable t;
  if (res.maps.empty()) return t;
  for (int a : res.maps[0].target().twists) ++t.counts[{0, a}];
  for (std::size_t k = 0; k < res.maps.size(); ++k)
    for (int a : res.maps[k].source().twists) ++t.counts[{int(k) + 1, a}];
  return t;
}

bool verify_resolution(const ExteriorAlgebra& alg, const Resolution& res,
                       std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (std::size_t k = 0; k < res.maps.size(); ++k) {
    const EModuleMap& f = res.maps[k];
    for (std::size_t r = 0; r < f.rows(); ++r)
      for (std::size_t c = 0; c < f.cols(); ++c)
        if (!f.at(r, c).is_zero() && f.at(r, c).degree() == 0)
          return fail("degree-0 entry at step " + std::to_string(k));
    if (k + 1 < res.maps.size()) {
      const EModuleMap& g = res.maps[k + 1];
      if (!compose(alg, f, g).is_zero())
        return fail("consecutive maps do not compose to zero at step " +
                    std::to_string(k));
      // exactness at the interior slot: rank g_d = nullity of f_d, all d
      auto [lo, hi] = f.source().degree_range();
      for (int d = lo; d <= hi; ++d) {
        gf::Matrix fd = graded_piece_matrix(alg, f, d);
        gf::Matrix gd = graded_piece_matrix(alg, g, d);
        std::size_t nullity = fd.cols() - gf::rank_of(fd);
        if (gf::rank_of(gd) != nullity)
          return fail("inexact at step " + std::to_string(k) + " degree " +
                      std::to_string(d));
      }
    }
  }
  return true;
}

}  // namespace rsurf::res
