#include "rsurf/gf.hpp"

#include <algorithm>
#include <sstream>

namespace rsurf::gf {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(unsigned p) : p_(p) {
  if (!is_prime(p)) throw std::invalid_argument("modulus is not prime");
  if (p >= 256) throw std::invalid_argument("modulus must be < 256");
}

uint8_t PrimeField::inv(uint8_t a) const {
  if (a == 0) throw std::invalid_argument("inverse of zero");
  // extended Euclid on (a, p)
  long long r0 = a, r1 = (long long)p_;
  long long s0 = 1, s1 = 0;
  while (r1 != 0) {
    long long q = r0 / r1;
    long long r2 = r0 - q * r1;
    long long s2 = s0 - q * s1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
  }
  return from_int(s0);
}

uint8_t PrimeField::pow(uint8_t a, unsigned long long e) const {
  uint8_t r = 1, base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

Matrix Matrix::identity(PrimeField field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

Matrix Matrix::from_rows(PrimeField field,
                         const std::vector<std::vector<long long>>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? rows[0].size() : 0;
  Matrix m(field, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c)
      throw std::invalid_argument("ragged row list");
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, field.from_int(rows[i][j]));
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(f_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.set(c, r, (*this)(r, c));
  return t;
}

Matrix Matrix::col_slice(std::size_t c0, std::size_t c1) const {
  Matrix s(f_, rows_, c1 - c0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = c0; c < c1; ++c) s.set(r, c - c0, (*this)(r, c));
  return s;
}

Matrix Matrix::hcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hcat row mismatch");
  Matrix m(a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m.set(r, c, a(r, c));
    for (std::size_t c = 0; c < b.cols(); ++c) m.set(r, a.cols() + c, b(r, c));
  }
  return m;
}

Matrix Matrix::vcat(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vcat col mismatch");
  Matrix m(a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m.set(r, c, a(r, c));
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m.set(a.rows() + r, c, b(r, c));
  return m;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c)
      os << int((*this)(r, c)) << (c + 1 < cols_ ? ' ' : '\n');
  }
  return os.str();
}

namespace {

// dst[j] = (dst[j] + c * src[j]) mod p. Small-p path stays in uint8 with
// conditional subtractions so the compiler can vectorize it.
void axpy_row(uint8_t* dst, const uint8_t* src, unsigned c, std::size_t n,
              unsigned p) {
  if (c == 0) return;
  if (p <= 13) {
    const uint8_t m3 = uint8_t(8 * p), m2 = uint8_t(4 * p), m1 = uint8_t(2 * p),
                  m0 = uint8_t(p);
    const uint8_t cc = uint8_t(c);
    for (std::size_t j = 0; j < n; ++j) {
      uint8_t v = uint8_t(dst[j] + cc * src[j]);
      v = uint8_t(v >= m3 ? v - m3 : v);
      v = uint8_t(v >= m2 ? v - m2 : v);
      v = uint8_t(v >= m1 ? v - m1 : v);
      v = uint8_t(v >= m0 ? v - m0 : v);
      dst[j] = v;
    }
  } else {
    for (std::size_t j = 0; j < n; ++j)
      dst[j] = uint8_t((unsigned(dst[j]) + c * src[j]) % p);
  }
}

void scale_row(uint8_t* row, unsigned c, std::size_t n, const PrimeField& f) {
  if (c == 1) return;
  for (std::size_t j = 0; j < n; ++j) row[j] = f.mul(row[j], uint8_t(c));
}

// In-place forward elimination to row echelon form; returns the pivot
// columns. With `reduced`, back-substitutes to RREF.
std::vector<std::size_t> echelonize(Matrix& m, bool reduced) {
  const PrimeField& f = m.field();
  const unsigned p = f.modulus();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && m(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r) {
      uint8_t* a = m.row_ptr(r);
      uint8_t* b = m.row_ptr(sel);
      std::swap_ranges(a, a + m.cols(), b);
    }
    scale_row(m.row_ptr(r), f.inv(m(r, c)), m.cols(), f);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      uint8_t v = m(i, c);
      if (v) axpy_row(m.row_ptr(i), m.row_ptr(r), p - v, m.cols(), p);
    }
    pivots.push_back(c);
    ++r;
  }
  if (reduced) {
    for (std::size_t k = pivots.size(); k-- > 0;) {
      std::size_t c = pivots[k];
      for (std::size_t i = 0; i < k; ++i) {
        uint8_t v = m(i, c);
        if (v) axpy_row(m.row_ptr(i), m.row_ptr(k), p - v, m.cols(), p);
      }
    }
  }
  return pivots;
}

}  // namespace

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply shape");
  const PrimeField& f = a.field();
  Matrix out(f, a.rows(), b.cols());
  if (a.cols() == 0 || b.cols() == 0 || a.rows() == 0) return out;
  std::vector<uint32_t> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0u);
    const uint8_t* arow = a.row_ptr(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      uint32_t v = arow[k];
      if (!v) continue;
      const uint8_t* brow = b.row_ptr(k);
      for (std::size_t j = 0; j < b.cols(); ++j) acc[j] += v * brow[j];
    }
    uint8_t* orow = out.row_ptr(i);
    for (std::size_t j = 0; j < b.cols(); ++j)
      orow[j] = uint8_t(acc[j] % f.modulus());
  }
  return out;
}

RrefResult rref_decompose(const Matrix& m) {
  Matrix R = m;
  std::vector<std::size_t> pivots = echelonize(R, true);
  return RrefResult{pivots.size(), std::move(pivots), std::move(R)};
}

std::size_t rank_of(const Matrix& m) {
  Matrix w = m;
  return echelonize(w, false).size();
}

Matrix kernel_basis(const Matrix& m) {
  RrefResult d = rref_decompose(m);
  const PrimeField& f = m.field();
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : d.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix k(f, m.cols(), free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    std::size_t fc = free_cols[j];
    k.set(fc, j, 1);
    for (std::size_t i = 0; i < d.pivots.size(); ++i)
      k.set(d.pivots[i], j, f.neg(d.R(i, fc)));
  }
  return k;
}

std::optional<Matrix> solve_linear(const Matrix& m, const Matrix& b) {
  if (m.rows() != b.rows()) throw std::invalid_argument("solve shape mismatch");
  Matrix aug = Matrix::hcat(m, b);
  RrefResult d = rref_decompose(aug);
  // inconsistent iff some pivot lands in the b block
  for (std::size_t c : d.pivots)
    if (c >= m.cols()) return std::nullopt;
  const PrimeField& f = m.field();
  Matrix x(f, m.cols(), b.cols());
  for (std::size_t i = 0; i < d.pivots.size(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      x.set(d.pivots[i], j, d.R(i, m.cols() + j));
  return x;
}

std::vector<std::size_t> complement_columns(const Matrix& span,
                                            const Matrix& extra) {
  if (span.rows() != extra.rows())
    throw std::invalid_argument("complement_columns row mismatch");
  Matrix joined = Matrix::hcat(span, extra);
  RrefResult d = rref_decompose(joined);
  std::vector<std::size_t> out;
  for (std::size_t c : d.pivots)
    if (c >= span.cols()) out.push_back(c - span.cols());
  return out;
}

Matrix random_matrix(PrimeField field, std::size_t rows, std::size_t cols,
                     SplitMix64& rng) {
  Matrix m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m.set(r, c, uint8_t(rng.below(field.modulus())));
  return m;
}

}  // namespace rsurf::gf
