#ifndef FQLAB_SURFACE_HPP
#define FQLAB_SURFACE_HPP

// The torus curve Σ(p) = {x : p(e^{2πi x_1}, e^{2πi x_2}) = 0} of a bivariate
// Laurent polynomial, parametrised slice by slice: one coordinate (the fixed
// axis) runs over a uniform grid and the other is read off the unit-circle
// roots of the frozen univariate polynomial.
//
// The ℓ-directional measure has density |ℓ_free − ℓ_fixed·x_free'| d x_fixed
// in this parametrisation, so its Fourier coefficients
//     m̂(k) = ∫_{Σ/Z²} e^{2πi⟨k,x⟩} |⟨n(x),ℓ⟩| dσ
// become periodic integrals over the fixed coordinate, which the trapezoid
// rule resolves spectrally for analytic branches.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "cone.hpp"
#include "crystal.hpp"
#include "errors.hpp"
#include "laurent.hpp"
#include "parallel.hpp"
#include "univariate.hpp"

namespace fqlab {

/// Slice axis selection: fix x2 and solve for x1 unless p has degree 0 in z1.
struct SliceAxes {
  std::size_t fixed = 1;
  std::size_t free = 0;
};

inline SliceAxes default_axes(const LaurentPoly& p) {
  if (p.arity() != 2) throw DomainError("torus curve routines need a bivariate polynomial");
  if (p.max_degree(0) == p.min_degree(0)) return {0, 1};
  return {1, 0};
}

struct SliceSolution {
  std::vector<double> values;        // free-coordinate values in [0,1), ascending
  std::vector<int> multiplicities;   // per value
  std::size_t off_circle = 0;        // roots discarded for |modulus − 1| > 1e-8
  double max_circle_deviation = 0;   // over the discarded roots
};

/// Unit-circle roots of p with coordinate `fixed_axis` frozen at `fixed_value`.
inline SliceSolution slice_solve(const LaurentPoly& p, std::size_t fixed_axis, double fixed_value) {
  if (p.arity() != 2) throw DomainError("slice_solve needs a bivariate polynomial");
  if (fixed_axis > 1) throw DomainError("slice axis must be 0 or 1");
  const std::size_t free_axis = 1 - fixed_axis;
  std::array<double, 2> x{};
  x[fixed_axis] = fixed_value;
  const UnivariateLaurent u = freeze_on_torus(p, free_axis, x);

  double mx = 0;
  for (const auto& c : u.coeffs) mx = std::max(mx, std::abs(c));
  if (mx <= 1e-14 * p.coefficient_scale()) throw DomainError("slice polynomial is identically zero");

  SliceSolution out;
  std::vector<std::pair<double, int>> vals;
  for (const auto& r : polynomial_roots(u.coeffs)) {
    const double dev = std::abs(std::abs(r.value) - 1.0);
    if (dev > 1e-8) {
      ++out.off_circle;
      out.max_circle_deviation = std::max(out.max_circle_deviation, dev);
      continue;
    }
    double v = std::arg(r.value) / kTwoPi;
    if (v < 0) v += 1.0;
    if (v >= 1.0) v -= 1.0;
    vals.emplace_back(v, r.multiplicity);
  }
  std::sort(vals.begin(), vals.end());
  for (const auto& [v, m] : vals) {
    out.values.push_back(v);
    out.multiplicities.push_back(m);
  }
  return out;
}

/// Complex log-derivatives (z_i ∂p/∂z_i) at a torus point.
inline std::array<Complex, 2> log_gradient(const LaurentPoly& p, const std::array<double, 2>& x) {
  const std::array<Complex, 2> z = {detail::unit_phase(x[0]), detail::unit_phase(x[1])};
  const auto g = gradient(p, std::span<const Complex>(z));
  return {z[0] * g[0], z[1] * g[1]};
}

/// d x_free / d x_fixed along Σ(p) at x: −Re[(z_fixed ∂_fixed p)/(z_free ∂_free p)].
/// The quotient is real on the curve; an imaginary part above 1e-6 is an error.
inline double implicit_slope(const LaurentPoly& p, const std::array<double, 2>& x, SliceAxes axes) {
  const auto lg = log_gradient(p, x);
  const double scale = p.coefficient_scale();
  if (std::abs(lg[axes.free]) < 1e-9 * scale) throw NumericalError("near-singular curve point (vertical tangent)");
  const Complex q = lg[axes.fixed] / lg[axes.free];
  if (std::abs(q.imag()) > 1e-6 * std::max(1.0, std::abs(q.real()))) throw NumericalError("slope is not real; point is not on a real curve branch");
  return -q.real();
}

/// Unit normal at a point of Σ(p). With a cone, the sign is chosen so that the
/// normal lands in C when possible (the representative with the larger minimal
/// dual coordinate); otherwise the first nonzero component is made positive.
inline std::array<double, 2> normal_at(const LaurentPoly& p, const std::array<double, 2>& x,
                                       const std::optional<ProperCone>& cone = std::nullopt) {
  const auto lg = log_gradient(p, x);
  const double scale = p.coefficient_scale();
  std::array<double, 2> n{};
  if (std::abs(lg[0]) >= std::abs(lg[1])) {
    if (std::abs(lg[0]) < 1e-9 * scale) throw NumericalError("near-singular curve point");
    const Complex q = lg[1] / lg[0];
    if (std::abs(q.imag()) > 1e-6 * std::max(1.0, std::abs(q.real()))) throw NumericalError("normal is not real at this point");
    n = {1.0, q.real()};
  } else {
    const Complex q = lg[0] / lg[1];
    if (std::abs(q.imag()) > 1e-6 * std::max(1.0, std::abs(q.real()))) throw NumericalError("normal is not real at this point");
    n = {q.real(), 1.0};
  }
  const double len = std::hypot(n[0], n[1]);
  n[0] /= len;
  n[1] /= len;
  if (cone) {
    const auto plus = cone->dual_coordinates({n[0], n[1]});
    const auto minus = cone->dual_coordinates({-n[0], -n[1]});
    if (*std::min_element(minus.begin(), minus.end()) > *std::min_element(plus.begin(), plus.end())) n = {-n[0], -n[1]};
  } else if (n[0] < 0 || (n[0] == 0 && n[1] < 0)) {
    n = {-n[0], -n[1]};
  }
  return n;
}

struct SlicePoint {
  std::size_t axis = 1;     // fixed coordinate index
  double fixed_value = 0;   // in [0,1)
  double free_value = 0;    // in [0,1)
  int branch_id = 0;
  double slope = 0;         // d free / d fixed

  std::array<double, 2> point() const {
    std::array<double, 2> x{};
    x[axis] = fixed_value;
    x[1 - axis] = free_value;
    return x;
  }
};

struct CurveBranch {
  std::vector<SlicePoint> points;  // consecutive slices, continuing through wraps
  int wraps = 1;                   // traversals of the fixed coordinate before closing
};

struct CurveBranches {
  std::size_t resolution = 0;
  SliceAxes axes;
  std::vector<CurveBranch> branches;

  std::size_t point_count() const {
    std::size_t n = 0;
    for (const auto& b : branches) n += b.points.size();
    return n;
  }
};

namespace detail {

inline double circle_distance(double a, double b) {
  double d = std::abs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

inline double min_circle_gap(const std::vector<double>& v) {
  if (v.size() < 2) return 1.0;
  double g = 1.0 - (v.back() - v.front());
  for (std::size_t i = 1; i < v.size(); ++i) g = std::min(g, v[i] - v[i - 1]);
  return g;
}

// Nearest-neighbour matching on the circle; empty optional on failure.
inline std::optional<std::vector<std::size_t>> match_roots(const std::vector<double>& from, const std::vector<double>& to) {
  if (from.size() != to.size()) return std::nullopt;
  const double threshold = 0.5 * min_circle_gap(from);
  std::vector<std::size_t> map(from.size());
  std::vector<bool> used(to.size(), false);
  for (std::size_t i = 0; i < from.size(); ++i) {
    std::size_t best = to.size();
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < to.size(); ++j) {
      const double d = circle_distance(from[i], to[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    if (best == to.size() || bd > threshold || used[best]) return std::nullopt;
    used[best] = true;
    map[i] = best;
  }
  return map;
}

inline std::vector<double> regular_slice(const LaurentPoly& p, SliceAxes axes, double fixed) {
  SliceSolution s = slice_solve(p, axes.fixed, fixed);
  for (int m : s.multiplicities)
    if (m > 1) throw NumericalError("near-singular curve: multiple root on a slice");
  if (s.values.size() > 1 && min_circle_gap(s.values) < 1e-6) throw NumericalError("near-singular curve: branch collision");
  return s.values;
}

}  // namespace detail

/// Slices at fixed = j/resolution, roots matched across neighbouring slices by
/// circular nearest distance (threshold: half the smallest gap on the earlier
/// slice). A failed match is retried through 3 intermediate slices.
inline CurveBranches trace_curve(const LaurentPoly& p, std::size_t resolution) {
  if (resolution < 4) throw DomainError("trace resolution must be at least 4");
  const SliceAxes axes = default_axes(p);
  const double step = 1.0 / static_cast<double>(resolution);

  const auto slices = parallel_map<std::vector<double>>(resolution, [&](std::size_t j) {
    return detail::regular_slice(p, axes, static_cast<double>(j) * step);
  });

  // links[j][i]: index on slice j+1 (mod resolution) of root i of slice j.
  std::vector<std::vector<std::size_t>> links(resolution);
  for (std::size_t j = 0; j < resolution; ++j) {
    const auto& from = slices[j];
    const auto& to = slices[(j + 1) % resolution];
    if (auto m = detail::match_roots(from, to)) {
      links[j] = *m;
      continue;
    }
    // Refine ×4 between the two slices.
    std::vector<double> cur = from;
    std::vector<std::size_t> composite(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) composite[i] = i;
    bool ok = true;
    for (int s = 1; s <= 4 && ok; ++s) {
      const std::vector<double> next =
          s < 4 ? detail::regular_slice(p, axes, (static_cast<double>(j) + s / 4.0) * step) : to;
      auto m = detail::match_roots(cur, next);
      if (!m) {
        ok = false;
        break;
      }
      for (auto& c : composite) c = (*m)[c];
      cur = next;
    }
    if (!ok) throw NumericalError("branch tracing failed between slices " + std::to_string(j) + " and " + std::to_string(j + 1));
    links[j] = composite;
  }

  CurveBranches out;
  out.resolution = resolution;
  out.axes = axes;
  const std::size_t roots0 = slices[0].size();
  std::vector<bool> seen(roots0, false);
  int branch_id = 0;
  for (std::size_t start = 0; start < roots0; ++start) {
    if (seen[start]) continue;
    CurveBranch br;
    br.wraps = 0;
    std::size_t idx = start;
    do {
      seen[idx] = true;
      ++br.wraps;
      for (std::size_t j = 0; j < resolution; ++j) {
        SlicePoint pt;
        pt.axis = axes.fixed;
        pt.fixed_value = static_cast<double>(j) * step;
        pt.free_value = slices[j][idx];
        pt.branch_id = branch_id;
        pt.slope = implicit_slope(p, pt.point(), axes);
        br.points.push_back(pt);
        idx = links[j][idx];
      }
    } while (idx != start);
    out.branches.push_back(std::move(br));
    ++branch_id;
  }
  return out;
}

/// Quadrature nodes of the directional measure: every slice root with weight
/// |ℓ_free − ℓ_fixed·slope| / resolution.
struct MeasureNodes {
  std::size_t resolution = 0;
  SliceAxes axes;
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  Complex coefficient(const std::vector<std::int64_t>& k) const {
    detail::CompensatedSum sum;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double phase = 0;
      for (std::size_t a = 0; a < 2; ++a) {
        phase += static_cast<double>(k[a]) * points[i][a];
        phase -= std::round(phase);
      }
      sum.add(weights[i] * detail::unit_phase(phase));
    }
    return sum.value();
  }
};

inline MeasureNodes measure_nodes(const LaurentPoly& p, const Direction& ell, std::size_t resolution) {
  if (ell.size() != 2) throw DomainError("direction must have two entries");
  const SliceAxes axes = default_axes(p);
  const double step = 1.0 / static_cast<double>(resolution);
  struct SliceNodes {
    std::vector<std::array<double, 2>> pts;
    std::vector<double> w;
  };
  const auto per_slice = parallel_map<SliceNodes>(resolution, [&](std::size_t j) {
    SliceNodes sn;
    const double fixed = static_cast<double>(j) * step;
    for (double v : slice_solve(p, axes.fixed, fixed).values) {
      std::array<double, 2> x{};
      x[axes.fixed] = fixed;
      x[axes.free] = v;
      const double slope = implicit_slope(p, x, axes);
      sn.pts.push_back(x);
      sn.w.push_back(std::abs(ell[axes.free] - ell[axes.fixed] * slope) * step);
    }
    return sn;
  });
  MeasureNodes nodes;
  nodes.resolution = resolution;
  nodes.axes = axes;
  for (const auto& sn : per_slice) {
    nodes.points.insert(nodes.points.end(), sn.pts.begin(), sn.pts.end());
    nodes.weights.insert(nodes.weights.end(), sn.w.begin(), sn.w.end());
  }
  return nodes;
}

struct SpectrumEntry {
  Complex coefficient;
  double frequency = 0;  // ⟨ℓ,k⟩
};

/// Fourier coefficients m̂_ℓ(k) keyed by k.
struct SpectrumTable {
  std::map<std::vector<std::int64_t>, SpectrumEntry> entries;
  std::size_t resolution = 0;  // resolution at which the doubling check passed

  const SpectrumEntry& at(const std::vector<std::int64_t>& k) const {
    auto it = entries.find(k);
    if (it == entries.end()) throw DomainError("lattice vector not in spectrum table");
    return it->second;
  }
  double mass() const { return at({0, 0}).coefficient.real(); }
};

/// Absolute tolerance of the resolution-doubling convergence check.
inline constexpr double kFourierConvergenceTol = 1e-8;
inline constexpr std::size_t kMaxFourierResolution = std::size_t{1} << 16;

/// m̂_ℓ(k) for every k in the list; the resolution is doubled until no
/// coefficient moves by more than 1e-8.
inline SpectrumTable compute_spectrum(const LaurentPoly& p, const Direction& ell, const std::vector<std::vector<std::int64_t>>& ks,
                                      std::size_t resolution = 256) {
  if (resolution < 4) throw DomainError("Fourier resolution must be at least 4");
  auto evaluate = [&](const MeasureNodes& nodes) {
    return parallel_map<Complex>(ks.size(), [&](std::size_t i) { return nodes.coefficient(ks[i]); });
  };
  std::size_t res = resolution;
  std::vector<Complex> coarse = evaluate(measure_nodes(p, ell, res));
  while (true) {
    std::vector<Complex> fine = evaluate(measure_nodes(p, ell, 2 * res));
    double diff = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) diff = std::max(diff, std::abs(fine[i] - coarse[i]));
    res *= 2;
    if (diff <= kFourierConvergenceTol) {
      SpectrumTable table;
      table.resolution = res;
      for (std::size_t i = 0; i < ks.size(); ++i) table.entries[ks[i]] = {fine[i], ell.dot(ks[i])};
      return table;
    }
    if (res >= kMaxFourierResolution) throw NumericalError("Fourier coefficients did not converge under resolution doubling");
    coarse = std::move(fine);
  }
}

inline Complex fourier_coefficient(const LaurentPoly& p, const Direction& ell, const std::vector<std::int64_t>& k,
                                   std::size_t resolution = 256) {
  return compute_spectrum(p, ell, {k}, resolution).at(k).coefficient;
}

/// All k with ‖k‖_∞ ≤ radius in lexicographic order.
inline std::vector<std::vector<std::int64_t>> box_vectors(std::int64_t radius) {
  std::vector<std::vector<std::int64_t>> ks;
  for (std::int64_t a = -radius; a <= radius; ++a)
    for (std::int64_t b = -radius; b <= radius; ++b) ks.push_back({a, b});
  return ks;
}

struct ConeScanReport {
  double max_outside = 0;  // max |m̂(k)| over k ∉ C ∪ −C
  double max_inside = 0;   // max |m̂(k)| over k ∈ C ∪ −C, k ≠ 0
  double mass = 0;         // m̂(0)
  std::vector<std::int64_t> worst_outside;
  SpectrumTable table;
  bool pass = false;
};

/// Relative threshold for "vanishing" Fourier coefficients outside a cone.
inline constexpr double kConeSupportTol = 1e-6;

inline ConeScanReport cone_support_scan(const LaurentPoly& p, const Direction& ell, const ProperCone& cone, std::int64_t k_radius,
                                        std::size_t resolution = 256, double tol = kConeSupportTol) {
  ConeScanReport rep;
  rep.table = compute_spectrum(p, ell, box_vectors(k_radius), resolution);
  rep.mass = rep.table.mass();
  for (const auto& [k, entry] : rep.table.entries) {
    const double mag = std::abs(entry.coefficient);
    if (cone.contains_symmetric(k)) {
      if (k != std::vector<std::int64_t>{0, 0}) rep.max_inside = std::max(rep.max_inside, mag);
    } else if (mag > rep.max_outside) {
      rep.max_outside = mag;
      rep.worst_outside = k;
    }
  }
  rep.pass = rep.max_outside <= tol * rep.mass;
  return rep;
}

struct NormalConeReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // min over samples of the best-sign min dual coordinate
  std::array<double, 2> worst_point{};
  bool pass = false;
};

/// Every traced normal must satisfy baseᵀ·n ≥ −1e-9 for one of its two signs.
inline NormalConeReport normal_cone_check(const LaurentPoly& p, const ProperCone& cone, std::size_t samples) {
  const CurveBranches curve = trace_curve(p, samples);
  NormalConeReport rep;
  for (const auto& br : curve.branches)
    for (const auto& pt : br.points) {
      const auto x = pt.point();
      const auto n = normal_at(p, x, cone);
      const auto u = cone.dual_coordinates({n[0], n[1]});
      const double margin = *std::min_element(u.begin(), u.end());
      ++rep.checked;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_point = x;
      }
      if (margin < -1e-9) ++rep.violations;
    }
  rep.pass = rep.violations == 0;
  return rep;
}

/// Smallest spacing of Λ_ℓ over [0, span]; +inf when fewer than two zeros.
inline double estimate_return_gap(const LaurentPoly& p, const Direction& ell, double span = 100.0) {
  const ExponentialPolynomial f = restrict_to_line(p, ell);
  return find_real_roots(f, 0.0, span).min_gap;
}

struct SlabEstimate {
  double estimate = 0;
  double standard_error = 0;
  std::size_t hits = 0;
  std::size_t samples = 0;
};

/// Monte Carlo estimate of Vol({x + tℓ : x ∈ Σ, |t| ≤ ε} mod Z²)/(2ε). A
/// uniform sample y is in the slab iff t ↦ p(exp(2πi(y − tℓ))) has a real zero
/// in [−ε, ε].
inline SlabEstimate slab_volume_oracle(const LaurentPoly& p, const Direction& ell, double eps, std::size_t samples, std::uint64_t seed) {
  if (p.arity() != 2 || ell.size() != 2) throw DomainError("slab oracle is bivariate");
  if (!(eps > 0) || samples == 0) throw DomainError("slab oracle needs eps > 0 and at least one sample");
  const double gap = estimate_return_gap(p, ell);
  if (std::isfinite(gap) && eps > 0.5 * gap) throw DomainError("slab half-width exceeds half the minimal return time");

  // Term data shared by all samples: t ↦ Σ a_α e^{2πi⟨α,y⟩} e^{−2πi⟨α,ℓ⟩t}.
  std::vector<std::pair<double, std::pair<Complex, Exponent>>> terms;
  for (const auto& [e, c] : p.terms()) terms.push_back({-ell.dot(e), {c, e}});
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  const auto hits = parallel_map<std::size_t>(chunks, [&](std::size_t ci) {
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (ci + 1)));
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::size_t h = 0;
    const std::size_t end = std::min(samples, (ci + 1) * kChunk);
    for (std::size_t s = ci * kChunk; s < end; ++s) {
      const double y0 = uniform(), y1 = uniform();
      std::vector<double> freqs;
      std::vector<Complex> coeffs;
      for (const auto& [lam, ce] : terms) {
        const Complex a = ce.first * detail::unit_phase(static_cast<double>(ce.second[0]) * y0 + static_cast<double>(ce.second[1]) * y1);
        if (!freqs.empty() && lam - freqs.back() <= 1e-12) {
          coeffs.back() += a;
        } else {
          freqs.push_back(lam);
          coeffs.push_back(a);
        }
      }
      const ExponentialPolynomial f(std::move(freqs), std::move(coeffs));
      if (!find_real_roots(f, -eps, eps).roots.empty()) ++h;
    }
    return h;
  });

  SlabEstimate est;
  est.samples = samples;
  for (auto h : hits) est.hits += h;
  const double frac = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.estimate = frac / (2 * eps);
  est.standard_error = std::sqrt(frac * (1 - frac) / static_cast<double>(samples)) / (2 * eps);
  return est;
}

}  // namespace fqlab

#endif  // FQLAB_SURFACE_HPP
