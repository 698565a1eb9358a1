#ifndef FQLAB_HARNESS_HPP
#define FQLAB_HARNESS_HPP

// End-to-end validators: the lighthouse predicate, the quasicrystal summation
// formula, the monomial change of variables, Gaussian tail bounds, and the
// density of the orbit {tℓ : t ∈ Λ_ℓ} in Σ(p).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "cone.hpp"
#include "crystal.hpp"
#include "errors.hpp"
#include "intmat.hpp"
#include "laurent.hpp"
#include "surface.hpp"

namespace fqlab {

// ---------------------------------------------------------------------------
// Lighthouse

struct LighthouseReport {
  ConeScanReport scan;
  bool dual_interior = false;  // ℓ ∈ int(C*)
  bool pass = false;
};

/// (m_ℓ, C) is a lighthouse when every Fourier coefficient outside C ∪ −C
/// vanishes (up to tol·m̂(0)). The measure-zero support condition holds for
/// every algebraic curve.
inline LighthouseReport lighthouse_report(const LaurentPoly& p, const Direction& ell, const ProperCone& cone, std::int64_t k_radius,
                                          double tol = kConeSupportTol, std::size_t resolution = 256) {
  LighthouseReport rep;
  rep.dual_interior = dual_interior_contains(cone, ell);
  rep.scan = cone_support_scan(p, ell, cone, k_radius, resolution, tol);
  rep.pass = rep.scan.pass;
  return rep;
}

inline bool lighthouse_check(const LaurentPoly& p, const Direction& ell, const ProperCone& cone, std::int64_t k_radius,
                             double tol = kConeSupportTol) {
  return lighthouse_report(p, ell, cone, k_radius, tol).pass;
}

// ---------------------------------------------------------------------------
// Summation formula

/// f(ξ) = A·e^{−(ξ−c)²/(2s²)} with transform f̂(t) = A·s√(2π)·e^{−2π²s²t²}·e^{−2πict}.
struct GaussianTest {
  double center = 0;
  double width = 1;
  double amplitude = 1;

  GaussianTest(double c, double s, double a = 1.0) : center(c), width(s), amplitude(a) {
    if (!(s > 0)) throw DomainError("Gaussian width must be positive");
  }

  double value(double xi) const {
    const double d = (xi - center) / width;
    return amplitude * std::exp(-0.5 * d * d);
  }
  Complex transform(double t) const {
    const double mag = amplitude * width * std::sqrt(kTwoPi) * std::exp(-2.0 * std::numbers::pi * std::numbers::pi * width * width * t * t);
    return mag * std::conj(detail::unit_phase(center * t));
  }
  /// sup of |f| over |ξ| ≥ r.
  double value_tail_sup(double r) const {
    const double d = r - std::abs(center);
    return d > 0 ? amplitude * std::exp(-0.5 * (d / width) * (d / width)) : amplitude;
  }
  /// |f̂(t)| (even, decreasing in |t|).
  double transform_magnitude(double t) const { return std::abs(transform(t)); }
};

struct SummationReport {
  Complex lhs;  // Σ_{t ∈ Λ_ℓ ∩ [−T,T]} f̂(t)
  Complex rhs;  // Σ_{k ∈ Z^n ∩ (C ∪ −C), |⟨ℓ,k⟩| ≤ R} m̂(−k)·f(⟨ℓ,k⟩)
  double residual = 0;
  double lhs_tail = 0;  // bound on the omitted root-side terms
  double rhs_tail = 0;  // bound on the omitted spectrum-side terms
  std::size_t root_count = 0;
  std::size_t lattice_count = 0;
  double mass = 0;
  bool pass = false;
};

inline constexpr double kTruncationTol = 1e-8;
inline constexpr double kSummationTol = 1e-6;

namespace detail {

// Bound on the spectrum-side tail: |m̂(k)| ≤ m̂(0) and the lattice points of
// C ∪ −C with |⟨ℓ,k⟩| ≤ r lie in a box of half-width norm·r/w_min + 1.
inline double spectrum_tail_bound(const ProperCone& cone, const Direction& ell, const GaussianTest& test, double radius, double mass) {
  const auto w = cone.generator_coordinates(ell);
  const double wmin = *std::min_element(w.begin(), w.end());
  const IntMatrix adj = adjugate(cone.base());
  const double det = std::abs(static_cast<double>(determinant(cone.base())));
  const std::size_t n = cone.dim();
  double norm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(static_cast<double>(adj(j, i)));
    norm = std::max(norm, row / det);
  }
  double total = 0;
  for (int j = 0; j < 100000; ++j) {
    const double r = radius + j;
    const double count = std::pow(2.0 * (norm * (r + 1.0) / wmin + 1.0) + 1.0, static_cast<double>(n));
    const double term = mass * count * test.value_tail_sup(r);
    total += term;
    if (term <= 1e-30 * total || term == 0) break;
  }
  return total;
}

// Bound on the root-side tail: at most `per_unit` zeros per unit interval.
inline double root_tail_bound(const GaussianTest& test, double T, double per_unit) {
  double total = 0;
  for (int j = 0; j < 100000; ++j) {
    const double term = 2.0 * per_unit * test.transform_magnitude(T + j);
    total += term;
    if (term <= 1e-30 * total || term == 0) break;
  }
  return total;
}

}  // namespace detail

/// Checks Σ_{t∈Λ_ℓ} f̂(t) = Σ_k m̂_ℓ(−k) f(⟨ℓ,k⟩) on truncations [−T,T] and
/// |⟨ℓ,k⟩| ≤ R. Throws DomainError when either truncation estimate exceeds
/// 1e-8, naming larger admissible values.
inline SummationReport verify_summation(const LaurentPoly& p, const Direction& ell, const GaussianTest& test, double T, double R,
                                        const std::optional<ProperCone>& cone_opt = std::nullopt, std::size_t resolution = 256) {
  const ProperCone cone = cone_opt ? *cone_opt : ProperCone::orthant(p.arity());
  const ExponentialPolynomial f = restrict_to_line(p, ell);
  const RootList roots = find_real_roots(f, -T, T);
  const auto ks = enumerate_truncated(cone, ell, R);

  std::vector<std::vector<std::int64_t>> table_ks = ks;
  if (std::find(table_ks.begin(), table_ks.end(), std::vector<std::int64_t>(p.arity(), 0)) == table_ks.end())
    table_ks.emplace_back(p.arity(), 0);
  const SpectrumTable table = compute_spectrum(p, ell, table_ks, resolution);

  SummationReport rep;
  rep.mass = table.mass();
  rep.root_count = roots.count_with_multiplicity();
  rep.lattice_count = ks.size();

  // Zero count per unit interval of a real-rooted exponential polynomial.
  const double per_unit = std::ceil(f.bandwidth()) + static_cast<double>(f.size());
  rep.lhs_tail = detail::root_tail_bound(test, T, per_unit);
  rep.rhs_tail = detail::spectrum_tail_bound(cone, ell, test, R, rep.mass);
  if (rep.lhs_tail > kTruncationTol || rep.rhs_tail > kTruncationTol) {
    double t2 = T, r2 = R;
    while (detail::root_tail_bound(test, t2, per_unit) > kTruncationTol && t2 < 1e6) t2 *= 1.25;
    while (detail::spectrum_tail_bound(cone, ell, test, r2, rep.mass) > kTruncationTol && r2 < 1e6) r2 *= 1.25;
    throw DomainError("truncation too small for a 1e-8 tail: try T >= " + std::to_string(t2) + " and R >= " + std::to_string(r2));
  }

  detail::CompensatedSum lhs, rhs;
  for (std::size_t i = 0; i < roots.roots.size(); ++i)
    lhs.add(static_cast<double>(roots.multiplicities[i]) * test.transform(roots.roots[i]));
  for (const auto& k : ks) {
    std::vector<std::int64_t> neg(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) neg[i] = -k[i];
    rhs.add(table.at(neg).coefficient * test.value(ell.dot(k)));
  }
  rep.lhs = lhs.value();
  rep.rhs = rhs.value();
  rep.residual = std::abs(rep.lhs - rep.rhs);
  rep.pass = rep.residual <= kSummationTol * std::max(std::abs(rep.lhs), 1.0);
  return rep;
}

// ---------------------------------------------------------------------------
// Change of variables

struct CovReport {
  Complex kappa;                 // fitted m̂^p(0) / m̂^q(0)
  std::int64_t det = 0;          // det(A), reported for comparison with κ
  double max_deviation = 0;      // max_k |m̂^p(k) − κ·m̂^q(Aᵀk)|
  double max_ratio_spread = 0;   // max relative deviation of the ratio over supported k
  std::size_t supported = 0;     // k with |m̂^p(k)| ≥ 1e-6·m̂^p(0)
  Direction ell;                 // ℓ = A·ℓ̃ used for p
  bool pass = false;
};

/// With q(z) = p(z^A) and ℓ = A·ℓ̃, checks m̂^p_ℓ(k) = κ·m̂^q_ℓ̃(Aᵀk) for one
/// constant κ over ‖k‖_∞ ≤ k_radius. p is derived from q when A is unimodular.
inline CovReport change_of_variables_check(const LaurentPoly& q, const IntMatrix& a, const Direction& ell_tilde, std::int64_t k_radius,
                                           const std::optional<LaurentPoly>& p_given = std::nullopt, std::size_t resolution = 256) {
  if (q.arity() != 2 || a.rows() != 2 || a.cols() != 2 || ell_tilde.size() != 2) throw DomainError("change of variables check is bivariate");
  CovReport rep;
  rep.det = determinant(a);
  if (rep.det == 0) throw DomainError("change of variables matrix is singular");
  LaurentPoly p(2);
  if (p_given) {
    p = *p_given;
  } else if (rep.det == 1 || rep.det == -1) {
    p = monomial_substitute(q, inverse_unimodular(a));
  } else {
    throw DomainError("non-unimodular change of variables needs an explicit p");
  }

  rep.ell.entries = {a(0, 0) * ell_tilde[0] + a(0, 1) * ell_tilde[1], a(1, 0) * ell_tilde[0] + a(1, 1) * ell_tilde[1]};
  const auto ks = box_vectors(k_radius);
  const IntMatrix at = a.transpose();
  std::vector<std::vector<std::int64_t>> qks;
  for (const auto& k : ks) qks.push_back(at.apply(k));

  const SpectrumTable tp = compute_spectrum(p, rep.ell, ks, resolution);
  const SpectrumTable tq = compute_spectrum(q, ell_tilde, qks, resolution);
  const double mass_p = tp.mass();
  rep.kappa = tp.at({0, 0}).coefficient / tq.at({0, 0}).coefficient;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const Complex mp = tp.at(ks[i]).coefficient;
    const Complex mq = tq.at(qks[i]).coefficient;
    rep.max_deviation = std::max(rep.max_deviation, std::abs(mp - rep.kappa * mq));
    if (std::abs(mp) >= kConeSupportTol * mass_p) {
      ++rep.supported;
      rep.max_ratio_spread = std::max(rep.max_ratio_spread, std::abs(mp / mq - rep.kappa) / std::abs(rep.kappa));
    }
  }
  rep.pass = rep.max_deviation <= kConeSupportTol * mass_p;
  return rep;
}

// ---------------------------------------------------------------------------
// Gaussian bounds

/// Σ_{k∈Z} e^{−πk²}.
inline double jacobi_theta_unit() {
  double s = 1.0;
  for (int k = 1; k < 20; ++k) s += 2.0 * std::exp(-std::numbers::pi * k * k);
  return s;
}

/// c₂ = 2·(2πe/n)^{n/2}·Σ_{k∈Z^n} e^{−π‖k‖²}.
inline double lattice_tail_constant(int n) {
  return 2.0 * std::pow(kTwoPi * std::numbers::e / n, 0.5 * n) * std::pow(jacobi_theta_unit(), n);
}

struct GaussianTailReport {
  int n = 0;
  double N = 0, R = 0, eps = 0;
  std::vector<double> shift;
  double radius = 0;  // R·N^{1+ε}
  double lhs_sum = 0;
  double rhs_bound = 0;
  bool pass = false;
};

/// lhs = Σ_{k∈Z^n, ‖k−v‖ > R·N^{1+ε}} e^{−‖k−v‖²/(2N²)} by direct summation
/// (terms below 1e-300 dropped, plus an explicit shell-count tail bound);
/// rhs = c₂·(R·N^{1+ε})^n·e^{−R²N^{2ε}/2}.
inline GaussianTailReport gaussian_tail_bound(int n, double N, double R, double eps, const std::vector<double>& v) {
  if (n < 1 || n > 3) throw DomainError("Gaussian tail bound supports n in {1,2,3}");
  if (static_cast<int>(v.size()) != n) throw DomainError("shift vector has wrong length");
  if (!(N > 0) || !(R > 0)) throw DomainError("N and R must be positive");
  GaussianTailReport rep;
  rep.n = n;
  rep.N = N;
  rep.R = R;
  rep.eps = eps;
  rep.shift = v;
  rep.radius = R * std::pow(N, 1.0 + eps);
  rep.rhs_bound = lattice_tail_constant(n) * std::pow(rep.radius, n) * std::exp(-0.5 * R * R * std::pow(N, 2.0 * eps));

  // e^{−d²/(2N²)} < 1e-300 once d > N·√(2·300·ln 10).
  const double cutoff = std::max(rep.radius, N * std::sqrt(2.0 * 300.0 * std::log(10.0))) + 1.0;
  const double inv = 1.0 / (2.0 * N * N);
  const double r2 = rep.radius * rep.radius, c2 = cutoff * cutoff;

  std::vector<std::vector<double>> offs(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    const auto lo = static_cast<std::int64_t>(std::floor(v[d] - cutoff));
    const auto hi = static_cast<std::int64_t>(std::ceil(v[d] + cutoff));
    for (std::int64_t k = lo; k <= hi; ++k) offs[d].push_back(static_cast<double>(k) - v[d]);
  }
  detail::CompensatedSum sum;
  auto visit = [&](double d2) {
    if (d2 > r2 && d2 <= c2) sum.add(std::exp(-d2 * inv));
  };
  if (n == 1) {
    for (double a : offs[0]) visit(a * a);
  } else if (n == 2) {
    for (double a : offs[0])
      for (double b : offs[1]) visit(a * a + b * b);
  } else {
    for (double a : offs[0])
      for (double b : offs[1])
        for (double c : offs[2]) visit(a * a + b * b + c * c);
  }
  // Points beyond the cutoff: shells [r, r+1) hold at most (2(r+1)+1)^n points.
  double tail = 0;
  for (double r = cutoff;; r += 1.0) {
    const double term = std::pow(2.0 * (r + 1.0) + 1.0, n) * std::exp(-r * r * inv);
    tail += term;
    if (term == 0 || term <= 1e-30 * tail) break;
  }
  rep.lhs_sum = sum.value().real() + tail;
  rep.pass = rep.lhs_sum <= rep.rhs_bound;
  return rep;
}

struct GaussianIntegralReport {
  int n = 0;
  double N = 0, R = 0;
  double lhs = 0;       // ∫_{‖x‖>R} e^{−N²‖x‖²/2} dx
  double rhs = 0;       // c_n/(R·N^{n+1})·e^{−N²R²/(2n)}
  double constant = 0;  // c_n
  bool pass = false;
};

/// Union-bound constant: P(‖Z‖ > t) ≤ n·P(|Z_1| > t/√n) ≤ 2n^{3/2}/(√(2π)t)·e^{−t²/(2n)},
/// rescaled by the Gaussian mass (2π)^{n/2}/N^n.
inline double gaussian_tail_constant(int n) {
  return 2.0 * std::pow(static_cast<double>(n), 1.5) * std::pow(kTwoPi, 0.5 * (n - 1));
}

/// Surface area of the unit sphere S^{n−1}.
inline double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// ∫_{‖x‖>R} e^{−N²‖x‖²/2} dx by radial Gauss–Legendre quadrature.
inline double gaussian_outer_integral(int n, double N, double R) {
  // 16-point Gauss–Legendre on [−1, 1], composite over [R, R + 40/N].
  static constexpr std::array<double, 8> x = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
                                              0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
  static constexpr std::array<double, 8> w = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
                                              0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
  const double lo = R, hi = R + 40.0 / N;
  const int pieces = 400;
  const double hstep = (hi - lo) / pieces;
  detail::CompensatedSum sum;
  auto g = [&](double r) { return std::pow(r, n - 1) * std::exp(-0.5 * N * N * r * r); };
  for (int i = 0; i < pieces; ++i) {
    const double mid = lo + (i + 0.5) * hstep, half = 0.5 * hstep;
    double acc = 0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += w[j] * (g(mid + half * x[j]) + g(mid - half * x[j]));
    sum.add(acc * half);
  }
  return sphere_area(n) * sum.value().real();
}

inline GaussianIntegralReport gaussian_tail_integral_check(int n, double N, double R) {
  if (n < 1 || n > 3) throw DomainError("Gaussian tail integral supports n in {1,2,3}");
  if (!(N > 0) || !(R > 0)) throw DomainError("N and R must be positive");
  GaussianIntegralReport rep;
  rep.n = n;
  rep.N = N;
  rep.R = R;
  rep.constant = gaussian_tail_constant(n);
  rep.lhs = gaussian_outer_integral(n, N, R);
  rep.rhs = rep.constant / (R * std::pow(N, n + 1)) * std::exp(-N * N * R * R / (2.0 * n));
  rep.pass = rep.lhs <= rep.rhs;
  return rep;
}

// ---------------------------------------------------------------------------
// Orbit closure

struct OrbitReport {
  double max_min_distance = 0;
  std::size_t orbit_points = 0;
  std::size_t curve_points = 0;
  bool pass = false;
};

inline double torus_distance(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(detail::circle_distance(a[0], b[0]), detail::circle_distance(a[1], b[1]));
}

/// Every traced point of Σ(p) must lie within δ (torus metric) of some
/// tℓ mod 1 with t ∈ Λ_ℓ ∩ [0, T].
inline OrbitReport orbit_closure_check(const LaurentPoly& p, const Direction& ell, double delta, double T, std::size_t resolution = 256) {
  const CurveBranches curve = trace_curve(p, resolution);
  const RootList roots = find_real_roots(restrict_to_line(p, ell), 0.0, T);
  std::vector<std::array<double, 2>> orbit;
  for (double t : roots.roots) {
    std::array<double, 2> x = {t * ell[0], t * ell[1]};
    for (auto& c : x) c -= std::floor(c);
    orbit.push_back(x);
  }
  OrbitReport rep;
  rep.orbit_points = orbit.size();
  rep.curve_points = curve.point_count();
  for (const auto& br : curve.branches)
    for (const auto& pt : br.points) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& o : orbit) best = std::min(best, torus_distance(pt.point(), o));
      rep.max_min_distance = std::max(rep.max_min_distance, best);
    }
  rep.pass = rep.curve_points > 0 && rep.max_min_distance <= delta;
  return rep;
}

}  // namespace fqlab

#endif  // FQLAB_HARNESS_HPP
