#ifndef FQLAB_CONE_HPP
#define FQLAB_CONE_HPP

// Simplicial proper cones C = (Aᵀ)^{-1}·R^n_{≥0} given by an invertible
// integer matrix A, together with the dual-cone interior A·R^n_{>0}.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "intmat.hpp"

namespace fqlab {

/// A direction ℓ ∈ R^n. Q-linear independence of the entries cannot be decided
/// numerically; it is recorded as an assertion and can be linted.
struct Direction {
  std::vector<double> entries;
  bool independence_asserted = true;

  std::size_t size() const noexcept { return entries.size(); }
  double operator[](std::size_t i) const { return entries[i]; }

  double dot(const std::vector<std::int64_t>& k) const {
    if (k.size() != entries.size()) throw DomainError("direction and lattice vector lengths differ");
    double s = 0;
    for (std::size_t i = 0; i < k.size(); ++i) s += entries[i] * static_cast<double>(k[i]);
    return s;
  }
};

class ProperCone {
 public:
  explicit ProperCone(IntMatrix base) : base_(std::move(base)) {
    if (!base_.is_square()) throw DomainError("cone base must be square");
    if (determinant(base_) == 0) throw DomainError("cone base must be nonsingular");
  }

  static ProperCone orthant(std::size_t n) { return ProperCone(IntMatrix::identity(n)); }

  const IntMatrix& base() const noexcept { return base_; }
  std::size_t dim() const noexcept { return base_.rows(); }

  /// x ∈ C ⟺ baseᵀ·x ≥ 0 (exact).
  bool contains(const std::vector<std::int64_t>& x) const {
    if (x.size() != dim()) throw DomainError("vector length does not match cone dimension");
    for (std::size_t j = 0; j < dim(); ++j) {
      detail::i128 acc = 0;
      for (std::size_t i = 0; i < dim(); ++i) acc += detail::i128{base_(i, j)} * x[i];
      if (acc < 0) return false;
    }
    return true;
  }

  bool contains_symmetric(const std::vector<std::int64_t>& x) const {
    if (contains(x)) return true;
    std::vector<std::int64_t> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    return contains(neg);
  }

  /// baseᵀ·v for a real vector; v ∈ C iff every entry is ≥ 0.
  std::vector<double> dual_coordinates(const std::vector<double>& v) const {
    std::vector<double> out(dim(), 0.0);
    for (std::size_t j = 0; j < dim(); ++j)
      for (std::size_t i = 0; i < dim(); ++i) out[j] += static_cast<double>(base_(i, j)) * v[i];
    return out;
  }

  /// base^{-1}·ℓ; ℓ ∈ int(C*) iff every entry is > 0.
  std::vector<double> generator_coordinates(const Direction& ell) const {
    if (ell.size() != dim()) throw DomainError("direction length does not match cone dimension");
    const auto n = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd b(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      rhs(i) = ell[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < n; ++j) b(i, j) = static_cast<double>(base_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    }
    const Eigen::VectorXd u = b.fullPivLu().solve(rhs);
    return {u.data(), u.data() + n};
  }

 private:
  IntMatrix base_;
};

/// ℓ ∈ int(C*) ⟺ base^{-1}·ℓ > 0, with a 1e-12 relative margin on the solve.
inline bool dual_interior_contains(const ProperCone& cone, const Direction& ell) {
  const auto u = cone.generator_coordinates(ell);
  double scale = 0;
  for (double v : u) scale = std::max(scale, std::abs(v));
  if (scale == 0) return false;
  return std::all_of(u.begin(), u.end(), [&](double v) { return v > 1e-12 * scale; });
}

/// Lattice points of C ∪ −C in the slab |⟨ℓ,k⟩| ≤ R, sorted by ⟨ℓ,k⟩ and then
/// lexicographically. The search box follows from k = (baseᵀ)^{-1}u with
/// u ≥ 0 and ⟨base^{-1}ℓ, u⟩ ≤ R.
inline std::vector<std::vector<std::int64_t>> enumerate_truncated(const ProperCone& cone, const Direction& ell, double radius) {
  if (!dual_interior_contains(cone, ell))
    throw DomainError("direction is not in the interior of the dual cone; the truncated set is infinite");
  if (radius < 0) throw DomainError("truncation radius must be nonnegative");
  const std::size_t n = cone.dim();
  const auto w = cone.generator_coordinates(ell);
  const double wmin = *std::min_element(w.begin(), w.end());

  // ‖(baseᵀ)^{-1}‖_∞ = max row sum of |adj(base)ᵀ| / |det|.
  const IntMatrix adj = adjugate(cone.base());
  const double det = std::abs(static_cast<double>(determinant(cone.base())));
  double norm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(static_cast<double>(adj(j, i)));
    norm = std::max(norm, row / det);
  }
  const double bound_real = norm * radius / wmin + 1.0;
  if (std::pow(2.0 * bound_real + 1.0, static_cast<double>(n)) > 1e9)
    throw DomainError("truncated cone enumeration box is too large");
  const auto bound = static_cast<std::int64_t>(std::floor(bound_real));

  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> k(n, -bound);
  const double slack = 1e-12 * std::max(1.0, radius);
  while (true) {
    if (std::abs(ell.dot(k)) <= radius + slack && cone.contains_symmetric(k)) out.push_back(k);
    std::size_t i = 0;
    while (i < n && k[i] == bound) k[i++] = -bound;
    if (i == n) break;
    ++k[i];
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    const double da = ell.dot(a), db = ell.dot(b);
    if (da != db) return da < db;
    return a < b;
  });
  return out;
}

/// Searches for a nonzero integer relation ⟨m, ℓ⟩ ≈ 0 with ‖m‖_∞ ≤ max_coeff,
/// smallest ‖m‖_∞ first. A hit means ℓ is (numerically) not Q-linearly independent.
inline std::optional<std::vector<std::int64_t>> find_integer_relation(const Direction& ell, std::int64_t max_coeff = 50,
                                                                      double tol = 1e-9) {
  const std::size_t n = ell.size();
  double norm = 0;
  for (double v : ell.entries) norm = std::max(norm, std::abs(v));
  for (std::int64_t h = 1; h <= max_coeff; ++h) {
    std::vector<std::int64_t> m(n, -h);
    while (true) {
      // Canonical sign: first nonzero entry positive; only the shell ‖m‖_∞ = h.
      auto first = std::find_if(m.begin(), m.end(), [](std::int64_t v) { return v != 0; });
      const bool shell = std::any_of(m.begin(), m.end(), [h](std::int64_t v) { return v == h || v == -h; });
      if (shell && first != m.end() && *first > 0 && std::abs(ell.dot(m)) <= tol * norm) return m;
      std::size_t i = 0;
      while (i < n && m[i] == h) m[i++] = -h;
      if (i == n) break;
      ++m[i];
    }
  }
  return std::nullopt;
}

}  // namespace fqlab

#endif  // FQLAB_CONE_HPP
