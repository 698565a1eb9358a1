#ifndef FQLAB_INTMAT_HPP
#define FQLAB_INTMAT_HPP

// Exact integer matrix algebra. Every entry is a 64-bit signed integer and
// every intermediate product is formed in 128 bits and range-checked, so a
// result is either exact or an OverflowError.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace fqlab {

/// Largest admissible |entry| of a user-supplied matrix.
inline constexpr std::int64_t kMaxMatrixEntry = 1'000'000;
/// Largest admissible row or column count of a user-supplied matrix.
inline constexpr std::size_t kMaxMatrixDim = 16;

namespace detail {

using i128 = __int128;

inline std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("integer overflow in exact matrix arithmetic");
  return static_cast<std::int64_t>(v);
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) { return narrow(i128{a} + b); }
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) { return narrow(i128{a} * b); }

// Floor division; the SNF reduction relies on remainders in [0, |b|).
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw InputError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix diagonal(const std::vector<std::int64_t>& d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  std::int64_t max_abs() const {
    std::int64_t m = 0;
    for (auto v : data_) m = std::max<std::int64_t>(m, v < 0 ? -v : v);
    return m;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix product dimension mismatch");
    IntMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        detail::i128 acc = 0;
        for (std::size_t k = 0; k < a.cols_; ++k) {
          acc += detail::i128{a(i, k)} * b(k, j);
          detail::narrow(acc);
        }
        out(i, j) = detail::narrow(acc);
      }
    return out;
  }

  /// Product with an integer vector.
  std::vector<std::int64_t> apply(const std::vector<std::int64_t>& x) const {
    if (x.size() != cols_) throw DomainError("matrix-vector dimension mismatch");
    std::vector<std::int64_t> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      detail::i128 acc = 0;
      for (std::size_t k = 0; k < cols_; ++k) acc += detail::i128{(*this)(i, k)} * x[k];
      y[i] = detail::narrow(acc);
    }
    return y;
  }

  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    os << '[';
    for (std::size_t r = 0; r < m.rows_; ++r) {
      os << (r ? ",[" : "[");
      for (std::size_t c = 0; c < m.cols_; ++c) os << (c ? "," : "") << m(r, c);
      os << ']';
    }
    return os << ']';
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Throws InputError unless the matrix respects the admissible size and entry range.
inline void validate_limits(const IntMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) throw InputError("matrix must be non-empty");
  if (a.rows() > kMaxMatrixDim || a.cols() > kMaxMatrixDim)
    throw InputError("matrix dimension exceeds " + std::to_string(kMaxMatrixDim));
  if (a.max_abs() > kMaxMatrixEntry) throw InputError("matrix entry exceeds 1e6 in absolute value");
}

/// Bareiss fraction-free determinant.
inline std::int64_t determinant(const IntMatrix& a) {
  if (!a.is_square()) throw DomainError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  std::vector<std::int64_t> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j);
  auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& { return m[i * n + j]; };

  int sign = 1;
  std::int64_t prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && at(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        const detail::i128 num = detail::i128{at(i, j)} * at(k, k) - detail::i128{at(i, k)} * at(k, j);
        at(i, j) = detail::narrow(num / prev);  // exact by Sylvester's identity
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

/// Classical adjoint: A·adj(A) = det(A)·I.
inline IntMatrix adjugate(const IntMatrix& a) {
  if (!a.is_square()) throw DomainError("adjugate of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 1) return IntMatrix::identity(1);
  IntMatrix adj(n, n);
  IntMatrix minor(n - 1, n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // adj(i, j) = (-1)^{i+j} det(A with row j and column i removed)
      for (std::size_t r = 0, mr = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, mc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(mr, mc++) = a(r, c);
        }
        ++mr;
      }
      const std::int64_t d = determinant(minor);
      adj(i, j) = ((i + j) % 2 == 0) ? d : -d;
    }
  return adj;
}

/// Exact rank by fraction-free row reduction with gcd normalisation.
inline std::size_t rank(const IntMatrix& a) {
  std::vector<std::vector<detail::i128>> m(a.rows(), std::vector<detail::i128>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
  auto gcd128 = [](detail::i128 x, detail::i128 y) {
    if (x < 0) x = -x;
    if (y < 0) y = -y;
    while (y != 0) {
      const detail::i128 t = x % y;
      x = y;
      y = t;
    }
    return x;
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && m[piv][c] == 0) ++piv;
    if (piv == a.rows()) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (m[i][c] == 0) continue;
      const detail::i128 f = m[i][c];
      const detail::i128 p = m[r][c];
      detail::i128 g = 0;
      for (std::size_t j = 0; j < a.cols(); ++j) {
        m[i][j] = m[i][j] * p - m[r][j] * f;
        g = gcd128(g, m[i][j]);
      }
      if (g > 1)
        for (auto& v : m[i]) v /= g;
    }
    ++r;
  }
  return r;
}

/// A = S·D·T with S (m×m) and T (n×n) unimodular and D diagonal with d_1 | d_2 | …, d_i ≥ 0.
struct SmithDecomposition {
  IntMatrix S;
  IntMatrix D;
  IntMatrix T;
};

namespace detail {

// Working state for the Smith reduction. Invariant: A == S·M·T throughout;
// every elementary operation on M is paired with its inverse on S or T.
struct SmithState {
  IntMatrix S, M, T;

  // row_i(M) += c·row_j(M)
  void row_add(std::size_t i, std::size_t j, std::int64_t c) {
    for (std::size_t k = 0; k < M.cols(); ++k) M(i, k) = checked_add(M(i, k), checked_mul(c, M(j, k)));
    for (std::size_t k = 0; k < S.rows(); ++k) S(k, j) = checked_add(S(k, j), checked_mul(-c, S(k, i)));
  }
  // col_i(M) += c·col_j(M)
  void col_add(std::size_t i, std::size_t j, std::int64_t c) {
    for (std::size_t k = 0; k < M.rows(); ++k) M(k, i) = checked_add(M(k, i), checked_mul(c, M(k, j)));
    for (std::size_t k = 0; k < T.cols(); ++k) T(j, k) = checked_add(T(j, k), checked_mul(-c, T(i, k)));
  }
  void row_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < M.cols(); ++k) std::swap(M(i, k), M(j, k));
    for (std::size_t k = 0; k < S.rows(); ++k) std::swap(S(k, i), S(k, j));
  }
  void col_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < M.rows(); ++k) std::swap(M(k, i), M(k, j));
    for (std::size_t k = 0; k < T.cols(); ++k) std::swap(T(i, k), T(j, k));
  }
  void row_negate(std::size_t i) {
    for (std::size_t k = 0; k < M.cols(); ++k) M(i, k) = -M(i, k);
    for (std::size_t k = 0; k < S.rows(); ++k) S(k, i) = -S(k, i);
  }
};

}  // namespace detail

/// Smith normal form. Pivot: smallest nonzero |entry| of the trailing block,
/// ties broken by row-major position.
inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  detail::SmithState st{IntMatrix::identity(m), a, IntMatrix::identity(n)};
  auto& M = st.M;

  const std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    while (true) {
      std::size_t pr = m, pc = n;
      std::int64_t best = 0;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          const std::int64_t v = std::llabs(M(i, j));
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            pr = i;
            pc = j;
          }
        }
      if (best == 0) break;  // trailing block is zero
      st.row_swap(t, pr);
      st.col_swap(t, pc);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (M(i, t) == 0) continue;
        st.row_add(i, t, -detail::floor_div(M(i, t), M(t, t)));
        if (M(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (M(t, j) == 0) continue;
        st.col_add(j, t, -detail::floor_div(M(t, j), M(t, t)));
        if (M(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold an offending row into row t and reduce again.
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (M(i, j) % M(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      st.row_add(t, bad, 1);
    }
    if (M(t, t) < 0) st.row_negate(t);
  }
  return {std::move(st.S), std::move(st.M), std::move(st.T)};
}

/// Inverse of a matrix with determinant ±1.
inline IntMatrix inverse_unimodular(const IntMatrix& a) {
  const std::int64_t d = determinant(a);
  if (d != 1 && d != -1) throw DomainError("matrix is not unimodular");
  IntMatrix inv = adjugate(a);
  if (d == -1)
    for (std::size_t i = 0; i < inv.rows(); ++i)
      for (std::size_t j = 0; j < inv.cols(); ++j) inv(i, j) = -inv(i, j);
  return inv;
}

/// A·B = (d·I_m | 0) with B (n×n) nonsingular.
struct PullbackCertificate {
  IntMatrix B;
  std::int64_t d = 0;
};

/// Builds an integral B turning the monomial map z^A (A of full row rank m ≤ n)
/// into the coordinate power map z ↦ (z_1^d, …, z_m^d).
inline PullbackCertificate pullback_certificate(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m > n) throw DomainError("pullback certificate needs rows <= cols");
  if (rank(a) != m) throw DomainError("pullback certificate needs a matrix of full row rank");

  if (m == n) return {adjugate(a), determinant(a)};

  // A = S·D·T, so A·T^{-1} = (S·D_m | 0) with S·D_m square and nonsingular.
  const SmithDecomposition snf = smith_normal_form(a);
  IntMatrix square(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) square(i, j) = detail::checked_mul(snf.S(i, j), snf.D(j, j));
  const IntMatrix adj = adjugate(square);
  IntMatrix block = IntMatrix::identity(n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) block(i, j) = adj(i, j);
  return {inverse_unimodular(snf.T) * block, determinant(square)};
}

}  // namespace fqlab

#endif  // FQLAB_INTMAT_HPP
