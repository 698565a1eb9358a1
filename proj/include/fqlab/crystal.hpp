#ifndef FQLAB_CRYSTAL_HPP
#define FQLAB_CRYSTAL_HPP

// One-dimensional Fourier quasicrystals: the zero set of
// f(t) = p(e^{2πi t ℓ_1}, …, e^{2πi t ℓ_n}) = Σ_j a_j e^{2πi λ_j t}.
//
// Real zeros are found by a grid scan of |f| followed by complex Newton
// refinement. The argument principle on a rectangle around the window gives
// an independent count of all zeros, real or not.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "cone.hpp"
#include "errors.hpp"
#include "laurent.hpp"

namespace fqlab {

inline void warn(const std::string& msg) { std::cerr << "fqlab: warning: " << msg << '\n'; }

/// Σ_j a_j e^{2πi λ_j t} with strictly ascending real frequencies λ_j.
class ExponentialPolynomial {
 public:
  ExponentialPolynomial(std::vector<double> freqs, std::vector<Complex> coeffs)
      : freqs_(std::move(freqs)), coeffs_(std::move(coeffs)) {
    if (freqs_.size() != coeffs_.size()) throw DomainError("frequency and coefficient counts differ");
    if (freqs_.empty()) throw DomainError("exponential polynomial needs at least one term");
    for (std::size_t j = 0; j < freqs_.size(); ++j) {
      if (coeffs_[j] == Complex{}) throw DomainError("exponential polynomial coefficients must be nonzero");
      if (j > 0 && !(freqs_[j] - freqs_[j - 1] > 1e-12)) throw DomainError("frequencies must be strictly ascending");
    }
  }

  const std::vector<double>& freqs() const noexcept { return freqs_; }
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return freqs_.size(); }

  /// λ_N − λ_0; the asymptotic zero density of a real-rooted f.
  double bandwidth() const { return freqs_.back() - freqs_.front(); }

  double scale() const {
    double s = 0;
    for (const auto& c : coeffs_) s += std::abs(c);
    return s;
  }

  /// Σ|a_j|·|2πλ_j|^order, the natural magnitude of f^{(order)} on the real line.
  double derivative_scale(int order) const {
    double s = 0;
    for (std::size_t j = 0; j < size(); ++j) s += std::abs(coeffs_[j]) * std::pow(kTwoPi * std::abs(freqs_[j]), order);
    return s;
  }

  /// Σ|a_j e^{2πiλ_j t}| at complex t.
  double local_scale(Complex t) const {
    double s = 0;
    for (std::size_t j = 0; j < size(); ++j) s += std::abs(coeffs_[j]) * std::exp(-kTwoPi * freqs_[j] * t.imag());
    return s;
  }

  Complex operator()(Complex t) const { return derivative(t, 0); }

  /// f^{(order)}(t) for complex t.
  Complex derivative(Complex t, int order) const {
    detail::CompensatedSum sum;
    for (std::size_t j = 0; j < size(); ++j) {
      const double lam = freqs_[j];
      Complex term = coeffs_[j] * detail::unit_phase(lam * t.real()) * std::exp(-kTwoPi * lam * t.imag());
      if (order > 0) term *= std::pow(Complex(0, kTwoPi * lam), order);
      sum.add(term);
    }
    return sum.value();
  }

  /// f and f' together (Newton, argument principle).
  std::pair<Complex, Complex> value_and_slope(Complex t) const {
    detail::CompensatedSum f, df;
    for (std::size_t j = 0; j < size(); ++j) {
      const double lam = freqs_[j];
      const Complex term = coeffs_[j] * detail::unit_phase(lam * t.real()) * std::exp(-kTwoPi * lam * t.imag());
      f.add(term);
      df.add(term * Complex(0, kTwoPi * lam));
    }
    return {f.value(), df.value()};
  }

 private:
  std::vector<double> freqs_;
  std::vector<Complex> coeffs_;
};

/// f(t) = p(exp(2πi t ℓ)): one frequency ⟨α,ℓ⟩ per exponent α. Frequencies
/// closer than 1e-12 are merged (such collisions contradict Q-independence of ℓ).
inline ExponentialPolynomial restrict_to_line(const LaurentPoly& p, const Direction& ell, std::size_t* collisions = nullptr) {
  if (p.is_zero()) throw DomainError("cannot restrict the zero polynomial");
  if (ell.size() != p.arity()) throw DomainError("direction length does not match polynomial arity");
  std::vector<std::pair<double, Complex>> terms;
  for (const auto& [e, c] : p.terms()) terms.emplace_back(ell.dot(e), c);
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<double> freqs;
  std::vector<Complex> coeffs;
  std::size_t merged = 0;
  for (const auto& [lam, c] : terms) {
    if (!freqs.empty() && lam - freqs.back() <= 1e-12) {
      coeffs.back() += c;
      ++merged;
    } else {
      freqs.push_back(lam);
      coeffs.push_back(c);
    }
  }
  if (merged > 0) warn(std::to_string(merged) + " frequency collision(s) while restricting to a line; entries of ℓ are not Q-independent");
  if (collisions) *collisions = merged;

  const double scale = p.coefficient_scale();
  std::vector<double> f2;
  std::vector<Complex> c2;
  for (std::size_t j = 0; j < freqs.size(); ++j)
    if (std::abs(coeffs[j]) > 1e-14 * scale) {
      f2.push_back(freqs[j]);
      c2.push_back(coeffs[j]);
    }
  if (f2.empty()) throw DomainError("all coefficients cancel on the line");
  return {std::move(f2), std::move(c2)};
}

/// Real zeros of f in a closed window, ascending, with multiplicities.
struct RootList {
  double t_min = 0;
  double t_max = 0;
  std::vector<double> roots;
  std::vector<int> multiplicities;
  double min_gap = std::numeric_limits<double>::infinity();
  std::size_t newton_failures = 0;

  std::size_t count_with_multiplicity() const {
    std::size_t n = 0;
    for (int m : multiplicities) n += static_cast<std::size_t>(m);
    return n;
  }
  bool has_multiple_roots() const {
    return std::any_of(multiplicities.begin(), multiplicities.end(), [](int m) { return m > 1; });
  }
};

/// Spacing of the |f| scan: well below the typical zero spacing 1/bandwidth.
inline double scan_step(const ExponentialPolynomial& f) {
  const double w = f.bandwidth();
  return w > 0 ? 1.0 / (32.0 * w) : 1.0;
}

/// Grid scan of |f| with step ≤ 1/(32·bandwidth), complex Newton from every
/// local minimum, acceptance of limits with |Im t| ≤ 1e-9 and |f| ≤ tol·scale,
/// deduplication at spacing 1e-9.
inline RootList find_real_roots(const ExponentialPolynomial& f, double t_min, double t_max, double tol = 1e-10) {
  if (!(t_max > t_min)) throw DomainError("root window must have positive length");
  RootList out;
  out.t_min = t_min;
  out.t_max = t_max;
  if (f.size() < 2) return out;  // a single exponential never vanishes

  const double scale = f.scale();
  const double h0 = std::min(scan_step(f), (t_max - t_min) / 8.0);
  const auto cells = static_cast<std::size_t>(std::ceil((t_max - t_min) / h0));
  const double h = (t_max - t_min) / static_cast<double>(cells);
  std::vector<double> mag(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) mag[i] = std::abs(f(t_min + static_cast<double>(i) * h));

  const double edge_slack = 1e-9;
  std::vector<std::pair<double, double>> found;  // (root, |f|)
  for (std::size_t i = 0; i <= cells; ++i) {
    const bool left_ok = i == 0 || mag[i] <= mag[i - 1];
    const bool right_ok = i == cells || mag[i] <= mag[i + 1];
    if (!(left_ok && right_ok)) continue;

    Complex t = t_min + static_cast<double>(i) * h;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const auto [fv, dv] = f.value_and_slope(t);
      if (fv == Complex{}) {
        converged = true;
        break;
      }
      if (dv == Complex{}) break;
      const Complex step = fv / dv;
      t -= step;
      if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) break;
      if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      ++out.newton_failures;
      continue;
    }
    if (std::abs(t.imag()) > 1e-9) continue;
    const double r = t.real();
    if (r < t_min - edge_slack || r > t_max + edge_slack) continue;
    const double res = std::abs(f(r));
    if (res > tol * scale) continue;
    found.emplace_back(r, res);
  }

  std::sort(found.begin(), found.end());
  for (const auto& [r, res] : found) {
    if (!out.roots.empty() && r - out.roots.back() <= 1e-9) continue;
    out.roots.push_back(r);
  }

  for (double r : out.roots) {
    int m = 1;
    while (m < 8 && std::abs(f.derivative(r, m)) <= 1e-6 * f.derivative_scale(m)) ++m;
    out.multiplicities.push_back(m);
  }
  if (out.has_multiple_roots()) warn("multiple real zero detected; the polynomial is not regular along this line");
  for (std::size_t i = 1; i < out.roots.size(); ++i) out.min_gap = std::min(out.min_gap, out.roots[i] - out.roots[i - 1]);
  return out;
}

/// Raised when |f| is too small somewhere on the contour.
class ZeroNearContour : public NumericalError {
 public:
  enum class Edge { Bottom, Right, Top, Left };
  ZeroNearContour(Edge edge, double where)
      : NumericalError("zero near contour"), edge_(edge), where_(where) {}
  Edge edge() const noexcept { return edge_; }
  double where() const noexcept { return where_; }

 private:
  Edge edge_;
  double where_;
};

struct WindingResult {
  long count = 0;
  Complex raw;  // (1/2πi)∮ f'/f dz before rounding
  double residue = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodX = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                                    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                                    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                                    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodW = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                                    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                                    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                                    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussW = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// ∫ over the segment z0→z1 of f'(z)/f(z) dz, adaptive G7-K15.
inline Complex log_derivative_segment(const ExponentialPolynomial& f, Complex z0, Complex z1, double tol, int depth) {
  const Complex mid = 0.5 * (z0 + z1);
  const Complex half = 0.5 * (z1 - z0);
  auto g = [&](double s) {
    const auto [fv, dv] = f.value_and_slope(mid + s * half);
    return dv / fv;
  };
  Complex kron = kKronrodW[7] * g(0.0);
  Complex gauss = kGaussW[3] * g(0.0);
  for (std::size_t i = 0; i < 7; ++i) {
    const Complex pair = g(kKronrodX[i]) + g(-kKronrodX[i]);
    kron += kKronrodW[i] * pair;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * pair;
  }
  kron *= half;
  gauss *= half;
  if (std::abs(kron - gauss) <= tol || depth >= 40) return kron;
  return log_derivative_segment(f, z0, mid, 0.5 * tol, depth + 1) + log_derivative_segment(f, mid, z1, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Number of zeros of f (with multiplicity) inside [t0,t1]×[−H,H] by the
/// argument principle. Throws ZeroNearContour when |f| < 1e-8·(local scale)
/// anywhere on the sampled boundary, NumericalError when the rounding residue
/// exceeds 0.01 after refinement.
inline WindingResult argument_principle_count(const ExponentialPolynomial& f, double t0, double t1, double height) {
  if (!(t1 > t0) || !(height > 0)) throw DomainError("contour rectangle must have positive size");
  using Edge = ZeroNearContour::Edge;
  const double h = std::min(scan_step(f), (t1 - t0) / 8.0);

  const std::array<Complex, 4> corners = {Complex(t0, -height), Complex(t1, -height), Complex(t1, height), Complex(t0, height)};
  const std::array<Edge, 4> edges = {Edge::Bottom, Edge::Right, Edge::Top, Edge::Left};

  // Boundary check and segmentation share the same sampling density.
  std::vector<std::pair<Complex, Complex>> segments;
  for (std::size_t e = 0; e < 4; ++e) {
    const Complex a = corners[e], b = corners[(e + 1) % 4];
    const double len = std::abs(b - a);
    const auto pieces = static_cast<std::size_t>(std::max(8.0, std::ceil(len / h)));
    for (std::size_t i = 0; i <= 4 * pieces; ++i) {
      const Complex z = a + (b - a) * (static_cast<double>(i) / static_cast<double>(4 * pieces));
      if (std::abs(f(z)) < 1e-8 * f.local_scale(z)) throw ZeroNearContour(edges[e], e % 2 == 0 ? z.real() : z.imag());
    }
    for (std::size_t i = 0; i < pieces; ++i)
      segments.emplace_back(a + (b - a) * (static_cast<double>(i) / static_cast<double>(pieces)),
                            a + (b - a) * (static_cast<double>(i + 1) / static_cast<double>(pieces)));
  }

  for (double tol : {1e-10, 1e-13}) {
    Complex total = 0;
    for (const auto& [a, b] : segments) total += detail::log_derivative_segment(f, a, b, tol, 0);
    WindingResult r;
    r.raw = total / Complex(0, kTwoPi);
    r.count = std::lround(r.raw.real());
    r.residue = std::abs(r.raw.real() - static_cast<double>(r.count)) + std::abs(r.raw.imag());
    if (r.residue <= 0.01) return r;
  }
  throw NumericalError("argument principle integral did not settle to an integer");
}

struct AuditReport {
  std::size_t real_count = 0;
  long complex_count = 0;
  long total_count = 0;
  double t_min = 0;  // window actually used (edges may be nudged off zeros)
  double t_max = 0;
  double height = 0;
  bool pass = false;
};

namespace detail {

// Moves a vertical contour edge outward until |f| stays well away from zero on it.
inline double clear_vertical_edge(const ExponentialPolynomial& f, double t, double height, double direction) {
  const double h = scan_step(f);
  for (int attempt = 0; attempt < 64; ++attempt) {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 64; ++i) {
      const Complex z(t, -height + 2.0 * height * i / 64.0);
      worst = std::min(worst, std::abs(f(z)) / f.local_scale(z));
    }
    if (worst >= 1e-3) return t;
    t += direction * h / 3.0;
  }
  throw NumericalError("could not find a zero-free vertical contour edge");
}

}  // namespace detail

/// Compares the number of real zeros in the window with the argument-principle
/// count over the window × [−H, H]. A real-rooted f passes.
inline AuditReport real_rootedness_audit(const ExponentialPolynomial& f, double t_min, double t_max, double height = 1.0) {
  AuditReport rep;
  double hgt = height;
  const double a = detail::clear_vertical_edge(f, t_min, 2 * hgt, -1.0);
  const double b = detail::clear_vertical_edge(f, t_max, 2 * hgt, +1.0);
  WindingResult w;
  try {
    w = argument_principle_count(f, a, b, hgt);
  } catch (const ZeroNearContour& e) {
    if (e.edge() != ZeroNearContour::Edge::Top && e.edge() != ZeroNearContour::Edge::Bottom) throw;
    hgt *= 2;
    w = argument_principle_count(f, a, b, hgt);
  }
  const RootList roots = find_real_roots(f, a, b);
  rep.real_count = roots.count_with_multiplicity();
  rep.total_count = w.count;
  rep.complex_count = w.count - static_cast<long>(rep.real_count);
  rep.t_min = a;
  rep.t_max = b;
  rep.height = hgt;
  rep.pass = rep.complex_count == 0;
  return rep;
}

/// (1/2T)·Σ_{t ∈ roots} mult·e^{−2πiξt} over a symmetric window [−T, T]. For a
/// Fourier quasicrystal this tends to the coefficient of the spectral point ξ.
inline Complex recover_coefficient(const RootList& roots, double xi) {
  const double T = 0.5 * (roots.t_max - roots.t_min);
  if (std::abs(roots.t_max + roots.t_min) > 1e-9 * std::max(1.0, T)) throw DomainError("coefficient recovery needs a symmetric window");
  if (roots.roots.empty()) {
    warn("coefficient recovery on an empty root list");
    return 0;
  }
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < roots.roots.size(); ++i)
    sum.add(static_cast<double>(roots.multiplicities[i]) * std::conj(detail::unit_phase(xi * roots.roots[i])));
  return sum.value() / (2.0 * T);
}

}  // namespace fqlab

#endif  // FQLAB_CRYSTAL_HPP
