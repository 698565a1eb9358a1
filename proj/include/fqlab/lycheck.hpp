#ifndef FQLAB_LYCHECK_HPP
#define FQLAB_LYCHECK_HPP

// Randomised falsification of the Lee–Yang property, regularity of Σ(p), and
// verification of essentially-Lee–Yang witnesses.
//
// A fiber freezes all coordinates but one at a random point of the open unit
// polydisc (or of its exterior) and solves exactly in the free coordinate. A
// root in the same regime is a counterexample; it is re-verified by direct
// evaluation before being reported.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "errors.hpp"
#include "intmat.hpp"
#include "laurent.hpp"
#include "parallel.hpp"
#include "surface.hpp"
#include "univariate.hpp"

namespace fqlab {

enum class Regime { Inside, Outside };

inline const char* to_string(Regime r) { return r == Regime::Inside ? "inside" : "outside"; }

struct LYViolation {
  std::vector<Complex> point;  // witness z* with p(z*) ≈ 0
  std::size_t free_var = 0;
  Regime regime = Regime::Inside;
  std::size_t fiber = 0;
  double residual = 0;  // |p(z*)|
  double scale = 0;     // Σ|a_α z*^α|
};

struct LYReport {
  std::size_t fibers_tested = 0;
  std::size_t degenerate_fibers = 0;
  std::optional<LYViolation> violation;
  double min_margin = std::numeric_limits<double>::infinity();

  bool pass() const noexcept { return !violation.has_value(); }
};

/// Fiber sampling law and classification margins.
inline constexpr double kInsideMin = 0.05, kInsideMax = 0.95;
inline constexpr double kOutsideMin = 1.05, kOutsideMax = 2.0;
inline constexpr double kBoundaryBand = 1e-9;
inline constexpr double kWitnessTol = 1e-8;

struct FiberOutcome {
  std::optional<LYViolation> violation;
  double min_margin = std::numeric_limits<double>::infinity();
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Σ|a_α z^α|, the magnitude against which a residual is judged.
inline double term_scale(const LaurentPoly& p, std::span<const Complex> z) {
  double s = 0;
  for (const auto& [e, c] : p.terms()) {
    double m = std::abs(c);
    for (std::size_t i = 0; i < e.size(); ++i) m *= std::pow(std::abs(z[i]), static_cast<double>(e[i]));
    s += m;
  }
  return s;
}

}  // namespace detail

/// Solves one fiber. `fixed` holds the frozen coordinates (the entry at
/// free_var is ignored); all of them are assumed to lie in `regime`.
/// Throws DomainError when the fiber polynomial vanishes identically.
inline FiberOutcome check_fiber(const LaurentPoly& p, std::size_t free_var, std::span<const Complex> fixed, Regime regime) {
  const UnivariateLaurent u = freeze_variables(p, free_var, fixed);
  double mx = 0;
  for (const auto& c : u.coeffs) mx = std::max(mx, std::abs(c));
  if (mx <= 1e-14 * detail::term_scale(p, fixed)) throw DomainError("degenerate fiber: slice polynomial vanishes");

  FiberOutcome out;
  for (const auto& root : polynomial_roots(u.coeffs)) {
    Complex r = root.value;
    const double mod = std::abs(r);
    if (mod == 0) continue;  // the origin is excluded from both regimes
    const double margin = regime == Regime::Inside ? mod - 1.0 : 1.0 - mod;
    out.min_margin = std::min(out.min_margin, std::max(0.0, margin));
    if (margin >= -kBoundaryBand || out.violation) continue;

    std::vector<Complex> z(fixed.begin(), fixed.end());
    z[free_var] = r;
    const double residual = std::abs(eval(p, std::span<const Complex>(z)));
    const double scale = detail::term_scale(p, z);
    if (residual > kWitnessTol * scale) continue;  // not certifiable
    out.violation = LYViolation{z, free_var, regime, 0, residual, scale};
  }
  return out;
}

/// Randomised Lee–Yang falsification. Fiber i frees variable i mod n and tests
/// one sample in each regime; moduli are uniform in [0.05, 0.95] (inside) or
/// [1.05, 2] (outside), phases uniform. Deterministic in (p, fibers, seed).
inline LYReport ly_falsify(const LaurentPoly& p, std::size_t fibers, std::uint64_t seed) {
  if (p.is_zero()) throw DomainError("Lee-Yang test of the zero polynomial");
  const std::size_t n = p.arity();

  struct Result {
    FiberOutcome inside, outside;
    std::size_t degenerate = 0;
  };
  const auto results = parallel_map<Result>(fibers, [&](std::size_t i) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(i)));
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53); };
    const std::size_t free_var = i % n;
    Result res;
    for (Regime regime : {Regime::Inside, Regime::Outside}) {
      const double lo = regime == Regime::Inside ? kInsideMin : kOutsideMin;
      const double hi = regime == Regime::Inside ? kInsideMax : kOutsideMax;
      for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<Complex> z(n, Complex(1.0, 0.0));
        for (std::size_t v = 0; v < n; ++v) {
          const double mod = uniform(lo, hi);
          const double phase = uniform(0.0, 1.0);
          if (v != free_var) z[v] = mod * detail::unit_phase(phase);
        }
        try {
          FiberOutcome o = check_fiber(p, free_var, z, regime);
          if (o.violation) o.violation->fiber = i;
          (regime == Regime::Inside ? res.inside : res.outside) = std::move(o);
          break;
        } catch (const DomainError&) {
          ++res.degenerate;
        }
      }
    }
    return res;
  });

  LYReport rep;
  rep.fibers_tested = fibers;
  for (const auto& r : results) {
    rep.degenerate_fibers += r.degenerate;
    rep.min_margin = std::min({rep.min_margin, r.inside.min_margin, r.outside.min_margin});
    if (!rep.violation) {
      if (r.inside.violation)
        rep.violation = r.inside.violation;
      else if (r.outside.violation)
        rep.violation = r.outside.violation;
    }
  }
  return rep;
}

/// ly_falsify on p(z^A); a pass means the witness A is consistent with p being
/// essentially Lee–Yang.
inline LYReport essentially_ly_verify(const LaurentPoly& p, const IntMatrix& witness, std::size_t fibers, std::uint64_t seed) {
  if (!witness.is_square() || witness.rows() != p.arity()) throw DomainError("witness must be square with the polynomial arity");
  if (determinant(witness) == 0) throw DomainError("witness matrix is singular");
  return ly_falsify(monomial_substitute(p, witness), fibers, seed);
}

struct RegularityReport {
  double min_gradient_norm = std::numeric_limits<double>::infinity();
  std::size_t points = 0;
  bool empty = false;
  bool pass = false;
};

/// Relative threshold on ‖(z_1∂_1p, z_2∂_2p)‖ over Σ(p).
inline constexpr double kRegularityTol = 1e-6;

/// Samples Σ(p) on `resolution` slices and reports the smallest torus
/// gradient norm. Multiple slice roots are sampled at the cluster mean, where
/// the gradient of a singular curve vanishes.
inline RegularityReport regularity_check(const LaurentPoly& p, std::size_t resolution) {
  if (p.arity() != 2) throw DomainError("regularity check is bivariate");
  const SliceAxes axes = default_axes(p);
  RegularityReport rep;
  const double scale = p.coefficient_scale();
  for (std::size_t j = 0; j < resolution; ++j) {
    const double fixed = static_cast<double>(j) / static_cast<double>(resolution);
    for (double v : slice_solve(p, axes.fixed, fixed).values) {
      std::array<double, 2> x{};
      x[axes.fixed] = fixed;
      x[axes.free] = v;
      const auto lg = log_gradient(p, x);
      rep.min_gradient_norm = std::min(rep.min_gradient_norm, std::hypot(std::abs(lg[0]), std::abs(lg[1])));
      ++rep.points;
    }
  }
  rep.empty = rep.points == 0;
  rep.pass = rep.empty || rep.min_gradient_norm > kRegularityTol * scale;
  return rep;
}

}  // namespace fqlab

#endif  // FQLAB_LYCHECK_HPP
