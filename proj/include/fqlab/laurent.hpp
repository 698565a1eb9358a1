#ifndef FQLAB_LAURENT_HPP
#define FQLAB_LAURENT_HPP

// Laurent polynomials in n variables with complex coefficients.
//
// A LaurentPoly stores a finite map from exponent vectors to nonzero
// coefficients, ordered lexicographically so that iteration (and therefore
// serialization) is deterministic. Exponent arithmetic is exact and checked.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "intmat.hpp"

namespace fqlab {

using Complex = std::complex<double>;
using Exponent = std::vector<std::int64_t>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace detail {

// Neumaier-compensated accumulator for complex sums.
class CompensatedSum {
 public:
  void add(Complex v) {
    add_part(re_, re_c_, v.real());
    add_part(im_, im_c_, v.imag());
  }
  Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0, im_ = 0, re_c_ = 0, im_c_ = 0;
};

inline Complex ipow(Complex z, std::int64_t k) {
  if (k < 0) return ipow(1.0 / z, -k);
  Complex result = 1.0;
  while (k > 0) {
    if (k & 1) result *= z;
    z *= z;
    k >>= 1;
  }
  return result;
}

// e^{2πi·phase} with the phase reduced to [-1/2, 1/2) first.
inline Complex unit_phase(double phase) {
  const double r = phase - std::round(phase);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

}  // namespace detail

class LaurentPoly {
 public:
  using TermMap = std::map<Exponent, Complex>;

  explicit LaurentPoly(std::size_t arity) : arity_(arity) {
    if (arity == 0) throw DomainError("Laurent polynomial arity must be positive");
  }

  LaurentPoly(std::size_t arity, std::initializer_list<std::pair<Exponent, Complex>> terms) : LaurentPoly(arity) {
    for (const auto& [e, c] : terms) add_term(e, c);
  }

  /// Accumulates c·z^e; a coefficient that becomes exactly zero is erased.
  void add_term(const Exponent& e, Complex c) {
    if (e.size() != arity_) throw DomainError("exponent length does not match arity");
    if (c == Complex{}) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex{}) terms_.erase(it);
    }
  }

  /// Drops coefficients with modulus at most rel·(largest modulus).
  void prune(double rel) {
    double mx = 0;
    for (const auto& [e, c] : terms_) mx = std::max(mx, std::abs(c));
    std::erase_if(terms_, [&](const auto& kv) { return std::abs(kv.second) <= rel * mx; });
  }

  std::size_t arity() const noexcept { return arity_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  Complex coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Complex{} : it->second;
  }

  /// Σ|a_α|; the reference magnitude for relative tolerances.
  double coefficient_scale() const {
    double s = 0;
    for (const auto& [e, c] : terms_) s += std::abs(c);
    return s;
  }

  std::int64_t min_degree(std::size_t var) const {
    std::int64_t d = INT64_MAX;
    for (const auto& [e, c] : terms_) d = std::min(d, e[var]);
    return terms_.empty() ? 0 : d;
  }
  std::int64_t max_degree(std::size_t var) const {
    std::int64_t d = INT64_MIN;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return terms_.empty() ? 0 : d;
  }

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.arity_ != b.arity_) throw DomainError("product of polynomials with different arity");
    LaurentPoly out(a.arity_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(a.arity_);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = detail::checked_add(ea[i], eb[i]);
        out.add_term(e, ca * cb);
      }
    out.prune(1e-14);
    return out;
  }

  LaurentPoly scaled(Complex s) const {
    LaurentPoly out(arity_);
    if (s == Complex{}) return out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * s);
    return out;
  }

 private:
  std::size_t arity_;
  TermMap terms_;
};

/// Σ_α a_α z^α with compensated summation. Every z_i must be nonzero.
inline Complex eval(const LaurentPoly& p, std::span<const Complex> z) {
  if (z.size() != p.arity()) throw DomainError("evaluation point has wrong length");
  for (const auto& zi : z)
    if (zi == Complex{}) throw DomainError("Laurent polynomial evaluated at a zero coordinate");
  detail::CompensatedSum sum;
  for (const auto& [e, c] : p.terms()) {
    Complex m = c;
    for (std::size_t i = 0; i < e.size(); ++i) m *= detail::ipow(z[i], e[i]);
    sum.add(m);
  }
  return sum.value();
}

inline Complex eval(const LaurentPoly& p, std::initializer_list<Complex> z) {
  return eval(p, std::span<const Complex>(z.begin(), z.size()));
}

/// p(e^{2πi x_1}, …, e^{2πi x_n}); Z^n-periodic in x.
inline Complex eval_exp(const LaurentPoly& p, std::span<const double> x) {
  if (x.size() != p.arity()) throw DomainError("evaluation point has wrong length");
  std::vector<double> frac(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) frac[i] = x[i] - std::floor(x[i]);
  detail::CompensatedSum sum;
  for (const auto& [e, c] : p.terms()) {
    double phase = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      phase += static_cast<double>(e[i]) * frac[i];
      phase -= std::round(phase);
    }
    sum.add(c * detail::unit_phase(phase));
  }
  return sum.value();
}

inline Complex eval_exp(const LaurentPoly& p, std::initializer_list<double> x) {
  return eval_exp(p, std::span<const double>(x.begin(), x.size()));
}

/// ∂p/∂z_i for every i.
inline std::vector<Complex> gradient(const LaurentPoly& p, std::span<const Complex> z) {
  if (z.size() != p.arity()) throw DomainError("evaluation point has wrong length");
  for (const auto& zi : z)
    if (zi == Complex{}) throw DomainError("Laurent polynomial evaluated at a zero coordinate");
  std::vector<detail::CompensatedSum> sums(p.arity());
  for (const auto& [e, c] : p.terms()) {
    Complex m = c;
    for (std::size_t i = 0; i < e.size(); ++i) m *= detail::ipow(z[i], e[i]);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) sums[i].add(static_cast<double>(e[i]) * m / z[i]);
  }
  std::vector<Complex> g(p.arity());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = sums[i].value();
  return g;
}

inline std::vector<Complex> gradient(const LaurentPoly& p, std::initializer_list<Complex> z) {
  return gradient(p, std::span<const Complex>(z.begin(), z.size()));
}

/// Relative threshold below which merged coefficients are treated as roundoff.
inline constexpr double kMergeDropTolerance = 1e-14;

/// q(z) = p(z^A) for A of shape arity(p) × n, where (z^A)_j = Π_i z_i^{A_ji}.
/// The monomial w^α becomes z^{Aᵀα}.
inline LaurentPoly monomial_substitute(const LaurentPoly& p, const IntMatrix& a) {
  if (a.rows() != p.arity()) throw DomainError("substitution matrix rows must equal the polynomial arity");
  if (a.cols() == 0) throw DomainError("substitution matrix has no columns");
  const IntMatrix at = a.transpose();
  LaurentPoly q(a.cols());
  for (const auto& [e, c] : p.terms()) q.add_term(at.apply(e), c);
  q.prune(kMergeDropTolerance);
  return q;
}

/// Multiplies p by the monomial z^{-min} so that every exponent is ≥ 0 and each
/// variable has minimal exponent 0. Returns the polynomial and the shift (the
/// per-variable minimum exponent of the input).
inline std::pair<LaurentPoly, Exponent> shift_to_polynomial(const LaurentPoly& p) {
  if (p.is_zero()) throw DomainError("cannot shift the zero polynomial");
  Exponent shift(p.arity());
  for (std::size_t i = 0; i < p.arity(); ++i) shift[i] = p.min_degree(i);
  LaurentPoly out(p.arity());
  for (const auto& [e, c] : p.terms()) {
    Exponent s(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) s[i] = detail::checked_add(e[i], -shift[i]);
    out.add_term(s, c);
  }
  return {std::move(out), std::move(shift)};
}

}  // namespace fqlab

#endif  // FQLAB_LAURENT_HPP
