// Acceptance suite: one verdict line per criterion, runtime budgets included.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fqlab/fqlab.hpp"
#include "oracles.hpp"

using namespace fqlab;

namespace {

const double kRoot2 = std::sqrt(2.0);

Direction golden() {
  Direction d;
  d.entries = {1.0, kRoot2};
  return d;
}

LaurentPoly diagonal() { return LaurentPoly(2, {{{1, 1}, 1.0}, {{0, 0}, -1.0}}); }
LaurentPoly quadric() { return LaurentPoly(2, {{{1, 1}, 1.0}, {{1, 0}, 0.5}, {{0, 1}, 0.5}, {{0, 0}, 1.0}}); }
LaurentPoly affine() { return LaurentPoly(2, {{{0, 0}, 2.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}}); }

// Collects failed sub-checks with a short reason.
struct Checks {
  std::vector<std::string> failures;
  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <typename T>
  void within(T value, T target, T tol, const std::string& what) {
    if (!(std::abs(value - target) <= tol)) {
      std::ostringstream os;
      os << what << " (got " << value << ", want " << target << " +/- " << tol << ")";
      failures.push_back(os.str());
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<void(Checks&)> run;
};

void diagonal_exactness(Checks& c) {
  const auto table = compute_spectrum(diagonal(), golden(), box_vectors(8));
  double on = 0, off = 0;
  for (const auto& [k, e] : table.entries) {
    if (k[0] == k[1])
      on = std::max(on, std::abs(e.coefficient - (1 + kRoot2)));
    else
      off = std::max(off, std::abs(e.coefficient));
  }
  c.require(on <= 1e-10, "diagonal coefficients equal 1+sqrt2 within 1e-10");
  c.require(off <= 1e-10, "off-diagonal coefficients vanish within 1e-10");

  const auto roots = find_real_roots(restrict_to_line(diagonal(), golden()), 0, 1);
  c.require(roots.roots.size() == 3, "three roots in [0,1]");
  if (roots.roots.size() == 3)
    for (int i = 0; i < 3; ++i) c.within(roots.roots[i], i * (kRoot2 - 1), 1e-10, "root " + std::to_string(i));

  const auto rep = verify_summation(diagonal(), golden(), GaussianTest(0, 1), 6, 10);
  c.require(rep.residual <= 1e-8, "summation residual <= 1e-8");
}

void quadric_crystal(Checks& c) {
  const auto p = quadric();
  const auto ell = golden();
  c.require(ly_falsify(p, 10000, 42).pass(), "ly_falsify passes at 1e4 fibers");

  const auto f = restrict_to_line(p, ell);
  c.require(real_rootedness_audit(f, 0, 50).pass, "real_rootedness_audit on [0,50]");

  const double density = static_cast<double>(find_real_roots(f, 0, 200).count_with_multiplicity()) / 200.0;
  c.within(density, 1 + kRoot2, 0.02, "zero density over [0,200]");

  const auto scan = cone_support_scan(p, ell, ProperCone::orthant(2), 8);
  c.require(scan.pass, "cone_support_scan first orthant, radius 8");

  const double m0 = scan.mass;
  c.within(m0, density, 1e-3, "mass vs root density");
  const auto slab = slab_volume_oracle(p, ell, 0.05, 1'000'000, 42);
  c.within(slab.estimate, m0, 3 * slab.standard_error, "mass vs slab volume oracle");

  const auto window = find_real_roots(f, -500, 500);
  const std::vector<std::vector<std::int64_t>> ks = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  for (const auto& k : ks) {
    const double xi = ell.dot(k);
    const Complex table = scan.table.at({-k[0], -k[1]}).coefficient;
    c.within(std::abs(recover_coefficient(window, xi) - table), 0.0, 5e-3, "recovered coefficient at xi=" + std::to_string(xi));
  }

  const auto sum = verify_summation(p, ell, GaussianTest(1, 0.8), 8, 12);
  c.require(sum.residual <= 1e-6, "summation residual <= 1e-6");
}

void counterexamples(Checks& c) {
  const auto ly = ly_falsify(affine(), 10000, 42);
  c.require(!ly.pass(), "violation found for 2 - z1 - z2");
  if (ly.violation) {
    const auto& v = *ly.violation;
    c.require(std::abs(eval(affine(), std::span<const Complex>(v.point))) <= kWitnessTol * v.scale, "witness re-verifies");
    bool same_regime = true;
    for (const auto& z : v.point)
      same_regime = same_regime && (v.regime == Regime::Inside ? std::abs(z) < 1 - kBoundaryBand : std::abs(z) > 1 + kBoundaryBand);
    c.require(same_regime, "witness lies strictly inside or strictly outside");
  }
  c.require(!real_rootedness_audit(restrict_to_line(affine(), golden()), 0, 50).pass, "audit fails for 2 - z1 - z2");
  c.require(!regularity_check(diagonal() * diagonal(), 256).pass, "regularity fails for (z1z2-1)^2");
}

void exact_algebra(Checks& c) {
  std::mt19937_64 rng(2024);
  int bad_identity = 0, bad_unimodular = 0, bad_chain = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng() % 5, n = 1 + rng() % 5;
    const IntMatrix a = oracle::random_matrix(rng, m, n, 9);
    const auto s = smith_normal_form(a);
    bad_identity += !(s.S * s.D * s.T == a);
    bad_unimodular += std::llabs(determinant(s.S)) != 1 || std::llabs(determinant(s.T)) != 1;
    const std::size_t r = std::min(m, n);
    for (std::size_t i = 0; i < r; ++i) {
      if (s.D(i, i) < 0) ++bad_chain;
      if (i + 1 < r && s.D(i, i) != 0 && s.D(i + 1, i + 1) % s.D(i, i) != 0) ++bad_chain;
      if (i + 1 < r && s.D(i, i) == 0 && s.D(i + 1, i + 1) != 0) ++bad_chain;
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && s.D(i, j) != 0) ++bad_chain;
  }
  c.require(bad_identity == 0, "A = S*D*T on 200 matrices");
  c.require(bad_unimodular == 0, "S, T unimodular");
  c.require(bad_chain == 0, "divisibility chain");

  auto certificate_ok = [](const IntMatrix& a, const PullbackCertificate& pc) {
    const IntMatrix ab = a * pc.B;
    for (std::size_t i = 0; i < ab.rows(); ++i)
      for (std::size_t j = 0; j < ab.cols(); ++j)
        if (ab(i, j) != (i == j ? pc.d : 0)) return false;
    return pc.d != 0;
  };
  std::vector<IntMatrix> inputs = {IntMatrix{{1, 2}}, IntMatrix::diagonal({2, 3})};
  while (inputs.size() < 50) {
    const std::size_t n = 1 + rng() % 5, m = 1 + rng() % n;
    IntMatrix a = oracle::random_matrix(rng, m, n, 9);
    if (rank(a) == m) inputs.push_back(a);
  }
  int bad_pullback = 0;
  for (const auto& a : inputs) bad_pullback += !certificate_ok(a, pullback_certificate(a));
  c.require(bad_pullback == 0, "A*B = (dI | 0) on 50 full-rank inputs");
  c.require(pullback_certificate(IntMatrix{{1, 2}}).d == 1, "(1 2) gives d = 1");
  c.require(pullback_certificate(IntMatrix::diagonal({2, 3})).d == 6, "diag(2,3) gives d = 6");
}

void change_of_variables(Checks& c) {
  const auto rep = change_of_variables_check(quadric(), IntMatrix{{1, 1}, {0, 1}}, golden(), 6);
  c.require(rep.supported > 1, "several supported coefficients");
  c.require(rep.max_ratio_spread <= 1e-6, "ratio constant within 1e-6 relative");
  c.require(rep.pass, "deviation from kappa times transformed table");
}

void gaussian_bounds(Checks& c) {
  for (int n : {1, 2})
    for (double N : {10.0, 20.0, 40.0})
      for (double R : {4.0, 6.0, 8.0})
        for (double eps : {0.1, 0.2})
          c.require(gaussian_tail_bound(n, N, R, eps, std::vector<double>(n, 0.0)).pass,
                    "lattice tail n=" + std::to_string(n) + " N=" + std::to_string(N) + " R=" + std::to_string(R));
  for (int n : {1, 2, 3})
    for (double N : {5.0, 10.0})
      for (double R : {0.5, 1.0, 2.0})
        c.require(gaussian_tail_integral_check(n, N, R).pass,
                  "integral tail n=" + std::to_string(n) + " N=" + std::to_string(N) + " R=" + std::to_string(R));
  for (int n : {1, 2, 3})
    for (double N : {5.0, 10.0}) {
      const double full = std::pow(kTwoPi, n / 2.0) / std::pow(N, n);
      c.within(gaussian_outer_integral(n, N, 0.0) / full, 1.0, 1e-8, "R->0 anchor n=" + std::to_string(n));
    }
}

void cone_enumeration(Checks& c) {
  c.require(enumerate_truncated(ProperCone::orthant(2), golden(), 5).size() == 27, "27 points for the first orthant, R = 5");
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> pos(0.3, 2.0);
  int done = 0, mismatches = 0;
  while (done < 20) {
    const std::size_t n = 2 + rng() % 2;
    IntMatrix a = oracle::random_matrix(rng, n, n, 3);
    if (determinant(a) == 0) continue;
    std::vector<double> w(n), ell(n, 0.0);
    for (auto& v : w) v = pos(rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) ell[i] += static_cast<double>(a(i, j)) * w[j];
    const double R = n == 2 ? 6.0 : 3.0;
    Direction d;
    d.entries = ell;
    auto got = enumerate_truncated(ProperCone(a), d, R);
    std::sort(got.begin(), got.end());
    const IntMatrix adj = adjugate(a);
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0;
      for (std::size_t j = 0; j < n; ++j) row += std::abs(static_cast<double>(adj(j, i)));
      norm = std::max(norm, row);
    }
    const double wmin = *std::min_element(w.begin(), w.end());
    const auto bound =
        static_cast<std::int64_t>(std::ceil(norm * R / (wmin * std::abs(static_cast<double>(determinant(a)))))) + 1;
    if (std::pow(2.0 * bound + 1.0, n) > 5e6) continue;
    mismatches += got != oracle::box_scan(a, ell, R, bound);
    ++done;
  }
  c.require(mismatches == 0, "enumeration matches box scan on 20 random cones");
}

void orbit_closure(Checks& c) {
  const auto a = orbit_closure_check(diagonal(), golden(), 0.05, 200);
  c.require(a.pass, "diagonal orbit within 0.05 at T = 200");
  const auto b = orbit_closure_check(quadric(), golden(), 0.05, 500);
  c.require(b.pass, "quadric orbit within 0.05 at T = 500");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "diagonal exactness", 10, diagonal_exactness},
      {2, "Lee-Yang quadric crystal", 120, quadric_crystal},
      {3, "counterexample detection", 30, counterexamples},
      {4, "exact algebra suite", 10, exact_algebra},
      {5, "change of variables", 60, change_of_variables},
      {6, "Gaussian bounds", 30, gaussian_bounds},
      {7, "cone enumeration", 5, cone_enumeration},
      {8, "orbit closure", 60, orbit_closure},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checks checks;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(checks);
    } catch (const std::exception& e) {
      checks.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.budget_seconds) checks.failures.push_back("runtime over budget");
    const bool ok = checks.failures.empty();
    failed += !ok;
    std::printf("criterion %d %-28s %s  (%.2f s, budget %.0f s)\n", cr.id, cr.title.c_str(), ok ? "PASS" : "FAIL", secs,
                cr.budget_seconds);
    for (const auto& f : checks.failures) std::printf("    - %s\n", f.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
