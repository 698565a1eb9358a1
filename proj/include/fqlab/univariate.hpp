#ifndef FQLAB_UNIVARIATE_HPP
#define FQLAB_UNIVARIATE_HPP

// Univariate root finding by companion-matrix eigenvalues, plus the helper
// that freezes all but one variable of a Laurent polynomial.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "errors.hpp"
#include "laurent.hpp"

namespace fqlab {

struct PolyRoot {
  Complex value;
  int multiplicity = 1;
};

/// Coefficients of a univariate Laurent polynomial c_k·w^{low + k}.
struct UnivariateLaurent {
  std::int64_t low = 0;
  std::vector<Complex> coeffs;
};

/// Relative radius inside which companion eigenvalues are merged into one
/// root of higher multiplicity.
inline constexpr double kRootClusterRadius = 1e-5;

namespace detail {

inline Complex horner(std::span<const Complex> c, Complex z) {
  Complex v = 0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * z + c[k];
  return v;
}

inline Complex horner_derivative(std::span<const Complex> c, Complex z) {
  Complex v = 0;
  for (std::size_t k = c.size(); k-- > 1;) v = v * z + static_cast<double>(k) * c[k];
  return v;
}

}  // namespace detail

/// Roots of Σ_k c_k z^k (ascending coefficients). Coefficients at or below
/// 1e-14 of the largest are treated as zero. Leading zero coefficients drop the
/// degree; trailing zero coefficients yield a root at the origin.
inline std::vector<PolyRoot> polynomial_roots(std::span<const Complex> coeffs) {
  double mx = 0;
  for (const auto& c : coeffs) mx = std::max(mx, std::abs(c));
  if (mx == 0) throw DomainError("polynomial is identically zero");
  const double eps = 1e-14 * mx;

  std::size_t lo = 0, hi = coeffs.size();
  while (hi > 0 && std::abs(coeffs[hi - 1]) <= eps) --hi;
  while (lo < hi && std::abs(coeffs[lo]) <= eps) ++lo;

  std::vector<PolyRoot> roots;
  if (lo > 0) roots.push_back({Complex{}, static_cast<int>(lo)});
  const std::span<const Complex> c = coeffs.subspan(lo, hi - lo);
  const std::size_t deg = c.size() - 1;
  if (deg == 0) return roots;

  std::vector<Complex> raw;
  if (deg == 1) {
    raw.push_back(-c[0] / c[1]);
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (std::size_t i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericalError("companion eigenvalue solver failed");
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) raw.push_back(solver.eigenvalues()(i));
  }

  // Single-link clustering; a multiple root is replaced by the cluster mean,
  // which is far more accurate than the individual perturbed eigenvalues.
  std::vector<int> cluster(raw.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (cluster[i] >= 0) continue;
    cluster[i] = next;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < raw.size(); ++b) {
        if (cluster[b] >= 0) continue;
        const double r = kRootClusterRadius * std::max(1.0, std::abs(raw[a]));
        if (std::abs(raw[a] - raw[b]) <= r) {
          cluster[b] = next;
          stack.push_back(b);
        }
      }
    }
    ++next;
  }
  for (int k = 0; k < next; ++k) {
    Complex mean = 0;
    int count = 0;
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (cluster[i] == k) {
        mean += raw[i];
        ++count;
      }
    mean /= static_cast<double>(count);
    if (count == 1) {
      // Newton polish, kept only while it lowers the residual.
      for (int it = 0; it < 3; ++it) {
        const Complex f = detail::horner(c, mean);
        const Complex df = detail::horner_derivative(c, mean);
        if (df == Complex{}) break;
        const Complex cand = mean - f / df;
        if (std::abs(detail::horner(c, cand)) >= std::abs(f)) break;
        mean = cand;
      }
    }
    roots.push_back({mean, count});
  }
  return roots;
}

/// Freezes every variable except `free_var` at the given values and returns
/// the univariate Laurent polynomial in the free variable. The entry of
/// `fixed` at position `free_var` is ignored.
inline UnivariateLaurent freeze_variables(const LaurentPoly& p, std::size_t free_var, std::span<const Complex> fixed) {
  if (free_var >= p.arity()) throw DomainError("free variable index out of range");
  if (fixed.size() != p.arity()) throw DomainError("fixed point has wrong length");
  UnivariateLaurent u;
  u.low = p.min_degree(free_var);
  u.coeffs.assign(static_cast<std::size_t>(p.max_degree(free_var) - u.low + 1), Complex{});
  std::vector<detail::CompensatedSum> sums(u.coeffs.size());
  for (const auto& [e, c] : p.terms()) {
    Complex m = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != free_var) m *= detail::ipow(fixed[i], e[i]);
    sums[static_cast<std::size_t>(e[free_var] - u.low)].add(m);
  }
  for (std::size_t k = 0; k < sums.size(); ++k) u.coeffs[k] = sums[k].value();
  return u;
}

/// Same as freeze_variables with every frozen variable on the unit torus,
/// z_i = e^{2πi x_i}; phases are combined before exponentiation.
inline UnivariateLaurent freeze_on_torus(const LaurentPoly& p, std::size_t free_var, std::span<const double> x) {
  if (free_var >= p.arity()) throw DomainError("free variable index out of range");
  if (x.size() != p.arity()) throw DomainError("fixed point has wrong length");
  UnivariateLaurent u;
  u.low = p.min_degree(free_var);
  u.coeffs.assign(static_cast<std::size_t>(p.max_degree(free_var) - u.low + 1), Complex{});
  std::vector<detail::CompensatedSum> sums(u.coeffs.size());
  for (const auto& [e, c] : p.terms()) {
    double phase = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != free_var) {
        phase += static_cast<double>(e[i]) * (x[i] - std::floor(x[i]));
        phase -= std::round(phase);
      }
    sums[static_cast<std::size_t>(e[free_var] - u.low)].add(c * detail::unit_phase(phase));
  }
  for (std::size_t k = 0; k < sums.size(); ++k) u.coeffs[k] = sums[k].value();
  return u;
}

}  // namespace fqlab

#endif  // FQLAB_UNIVARIATE_HPP
