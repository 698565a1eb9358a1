#ifndef FQLAB_TESTS_ORACLES_HPP
#define FQLAB_TESTS_ORACLES_HPP

// Independent reference computations used by the test suites. None of these
// call into the library routines they are compared against.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "fqlab/fqlab.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Mat = std::vector<std::vector<std::int64_t>>;

inline Mat to_rows(const fqlab::IntMatrix& a) {
  Mat m(a.rows(), std::vector<std::int64_t>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m[r][c] = a(r, c);
  return m;
}

/// Rank over Z/p by Gaussian elimination; a lower bound for the rational rank.
inline std::size_t rank_mod_p(const fqlab::IntMatrix& a, std::int64_t p = 1000000007) {
  std::vector<std::vector<std::int64_t>> m(a.rows(), std::vector<std::int64_t>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m[r][c] = ((a(r, c) % p) + p) % p;
  auto power = [p](std::int64_t b, std::int64_t e) {
    std::int64_t acc = 1;
    for (; e > 0; e >>= 1, b = b * b % p)
      if (e & 1) acc = acc * b % p;
    return acc;
  };
  std::size_t rank = 0;
  for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < a.rows() && m[piv][c] == 0) ++piv;
    if (piv == a.rows()) continue;
    std::swap(m[piv], m[rank]);
    const std::int64_t inv = power(m[rank][c], p - 2);
    for (std::size_t r = rank + 1; r < a.rows(); ++r) {
      const std::int64_t f = m[r][c] * inv % p;
      for (std::size_t j = c; j < a.cols(); ++j) m[r][j] = ((m[r][j] - f * m[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

/// Laplace expansion along the first row.
inline std::int64_t cofactor_det(const Mat& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  std::int64_t det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Mat minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<std::int64_t> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(row);
    }
    det += ((j % 2) ? -1 : 1) * m[0][j] * cofactor_det(minor);
  }
  return det;
}

inline void combinations(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// k-th determinantal divisor: gcd of all k×k minors (0 when all vanish).
inline std::int64_t determinantal_divisor(const Mat& m, std::size_t k) {
  const std::size_t rows = m.size(), cols = m.empty() ? 0 : m[0].size();
  std::vector<std::vector<std::size_t>> rs, cs;
  std::vector<std::size_t> cur;
  combinations(rows, k, 0, cur, rs);
  combinations(cols, k, 0, cur, cs);
  std::int64_t g = 0;
  for (const auto& r : rs)
    for (const auto& c : cs) {
      Mat sub(k, std::vector<std::int64_t>(k));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub[i][j] = m[r[i]][c[j]];
      g = std::gcd(g, cofactor_det(sub));
    }
  return std::abs(g);
}

inline fqlab::IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  fqlab::IntMatrix a(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a(r, c) = d(rng);
  return a;
}

/// Σ a_α Π z_i^{α_i} with std::pow.
inline Complex naive_eval(const fqlab::LaurentPoly& p, const std::vector<Complex>& z) {
  Complex s = 0;
  for (const auto& [e, c] : p.terms()) {
    Complex m = c;
    for (std::size_t i = 0; i < e.size(); ++i) m *= std::pow(z[i], static_cast<double>(e[i]));
    s += m;
  }
  return s;
}

/// Central differences in each complex coordinate (real direction).
inline std::vector<Complex> fd_gradient(const fqlab::LaurentPoly& p, const std::vector<Complex>& z, double h = 1e-6) {
  std::vector<Complex> g(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    auto zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    g[i] = (naive_eval(p, zp) - naive_eval(p, zm)) / (2 * h);
  }
  return g;
}

/// Lattice points in the box ‖k‖∞ ≤ bound inside C ∪ −C with |⟨ℓ,k⟩| ≤ R,
/// membership tested through the generator coordinates baseᵀk.
inline std::vector<std::vector<std::int64_t>> box_scan(const fqlab::IntMatrix& base, const std::vector<double>& ell, double R,
                                                       std::int64_t bound) {
  const std::size_t n = base.rows();
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> k(n, -bound);
  while (true) {
    double dot = 0;
    for (std::size_t i = 0; i < n; ++i) dot += ell[i] * static_cast<double>(k[i]);
    if (std::abs(dot) <= R + 1e-12 * std::max(1.0, R)) {
      bool pos = true, neg = true;
      for (std::size_t c = 0; c < n; ++c) {
        std::int64_t u = 0;
        for (std::size_t r = 0; r < n; ++r) u += base(r, c) * k[r];
        pos = pos && u >= 0;
        neg = neg && u <= 0;
      }
      if (pos || neg) out.push_back(k);
    }
    std::size_t i = 0;
    while (i < n && k[i] == bound) k[i++] = -bound;
    if (i == n) break;
    ++k[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// m̂_ℓ(k) for z1·z2 − 1: ℓ1 + ℓ2 on the diagonal, zero elsewhere.
inline Complex diagonal_spectrum(const std::vector<double>& ell, std::int64_t k1, std::int64_t k2) {
  return k1 == k2 ? Complex(ell[0] + ell[1], 0) : Complex(0, 0);
}

/// Σ_{m∈Z} ĝ(m·h) for the Gaussian g with width s centred at c, i.e. the
/// root-side sum for the arithmetic progression hZ, summed directly.
inline Complex progression_sum(double h, double c, double s, int terms = 200) {
  Complex total = 0;
  for (int m = -terms; m <= terms; ++m) {
    const double t = m * h;
    total += s * std::sqrt(2 * M_PI) * std::exp(-2 * M_PI * M_PI * s * s * t * t) * std::exp(Complex(0, -2 * M_PI * c * t));
  }
  return total;
}

}  // namespace oracle

#endif  // FQLAB_TESTS_ORACLES_HPP
