#pragma once

// Dense exact linear algebra over a prime field F_p (p < 256).
// Everything downstream -- exterior algebra pieces, Koszul kernels,
// Groebner coefficient work -- reduces to the operations here.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsurf::gf {

bool is_prime(unsigned n);

/// Arithmetic context for F_p. Values are residues in [0, p).
/// Inverses use the extended Euclidean algorithm; no tables.
class PrimeField {
 public:
  explicit PrimeField(unsigned p);

  unsigned modulus() const { return p_; }

  uint8_t add(uint8_t a, uint8_t b) const {
    unsigned s = unsigned(a) + b;
    return uint8_t(s >= p_ ? s - p_ : s);
  }
  uint8_t sub(uint8_t a, uint8_t b) const {
    return uint8_t(a >= b ? a - b : a + p_ - b);
  }
  uint8_t neg(uint8_t a) const { return uint8_t(a == 0 ? 0 : p_ - a); }
  uint8_t mul(uint8_t a, uint8_t b) const {
    return uint8_t((unsigned(a) * unsigned(b)) % p_);
  }
  uint8_t inv(uint8_t a) const;
  uint8_t pow(uint8_t a, unsigned long long e) const;

  /// Reduce an arbitrary signed integer into [0, p).
  uint8_t from_int(long long v) const {
    long long r = v % (long long)p_;
    if (r < 0) r += p_;
    return uint8_t(r);
  }

  /// Lift to the balanced representative in (-p/2, p/2].
  int balanced(uint8_t v) const {
    return v > p_ / 2 ? int(v) - int(p_) : int(v);
  }

  bool operator==(const PrimeField& other) const { return p_ == other.p_; }

 private:
  unsigned p_;
};

/// Dense row-major matrix over F_p. Immutable in spirit: the algorithms
/// below return fresh matrices and never mutate their inputs.
class Matrix {
 public:
  Matrix(PrimeField field, std::size_t rows, std::size_t cols)
      : f_(field), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static Matrix identity(PrimeField field, std::size_t n);
  static Matrix from_rows(PrimeField field,
                          const std::vector<std::vector<long long>>& rows);

  const PrimeField& field() const { return f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  uint8_t operator()(std::size_t r, std::size_t c) const {
    return a_[r * cols_ + c];
  }
  void set(std::size_t r, std::size_t c, uint8_t v) { a_[r * cols_ + c] = v; }
  void add_at(std::size_t r, std::size_t c, uint8_t v) {
    uint8_t& e = a_[r * cols_ + c];
    e = f_.add(e, v);
  }

  uint8_t* row_ptr(std::size_t r) { return a_.data() + r * cols_; }
  const uint8_t* row_ptr(std::size_t r) const { return a_.data() + r * cols_; }

  Matrix transpose() const;

  /// Columns [c0, c1) as a new matrix.
  Matrix col_slice(std::size_t c0, std::size_t c1) const;

  /// [A | B] side by side.
  static Matrix hcat(const Matrix& a, const Matrix& b);
  /// A on top of B.
  static Matrix vcat(const Matrix& a, const Matrix& b);

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_;
  }

  std::string to_string() const;

 private:
  PrimeField f_;
  std::size_t rows_, cols_;
  std::vector<uint8_t> a_;
};

Matrix multiply(const Matrix& a, const Matrix& b);

struct RrefResult {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // strictly increasing column indices
  Matrix R;                         // reduced row echelon form
};

/// Reduced row echelon decomposition. Empty matrices are fine (rank 0).
RrefResult rref_decompose(const Matrix& m);

std::size_t rank_of(const Matrix& m);

/// Basis of ker(m) as columns; cols(result) == cols(m) - rank(m).
Matrix kernel_basis(const Matrix& m);

/// Solve m * x = b (b may have several columns). Returns std::nullopt if the
/// system is inconsistent; throws std::invalid_argument on a shape mismatch.
std::optional<Matrix> solve_linear(const Matrix& m, const Matrix& b);

/// rank of [span | extra] minus rank of span, realized as the list of column
/// indices of `extra` that enlarge the span of `span`'s columns. Used for
/// complement selection everywhere (new syzygy generators, slice bases, ...).
std::vector<std::size_t> complement_columns(const Matrix& span,
                                            const Matrix& extra);

/// splitmix64. All random draws flow through this so results are
/// reproducible across platforms and worker counts.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}
  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  /// Uniform value in [0, n), rejection sampled.
  uint64_t below(uint64_t n) {
    uint64_t bound = ~uint64_t(0) - ~uint64_t(0) % n;
    uint64_t x;
    do {
      x = next();
    } while (x >= bound);
    return x % n;
  }

 private:
  uint64_t state_;
};

Matrix random_matrix(PrimeField field, std::size_t rows, std::size_t cols,
                     SplitMix64& rng);

}  // namespace rsurf::gf
