// fqlab command-line driver.
//
// Exit status: 0 pass, 1 violation or failed check, 2 malformed input.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fqlab/fqlab.hpp"
#include "fqlab/io.hpp"

using namespace fqlab;
using io::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::uint64_t seed = 42;
  double tol = 0;  // 0: command default
  std::size_t resolution = 256;
  std::string window = "0,100";
  std::string ell = "1,1.4142135623730951";
  std::int64_t k_radius = 8;
  std::string out;

  // Command-specific parameters.
  std::size_t fibers = 10000;
  double radius = 5;
  double height = 1;
  double center = 0, width = 1, trunc_t = 8, trunc_r = 12;
  std::string cone_path, p_path;
  int gauss_n = 1;
  double gauss_N = 10, gauss_R = 6, gauss_eps = 0.1;
  std::string shift;
  double delta = 0.05, horizon = 200;
};

double tol_or(const RunConfig& c, double fallback) { return c.tol > 0 ? c.tol : fallback; }

std::string require_input(const RunConfig& c, std::size_t i, const std::string& what) {
  if (c.inputs.size() <= i) throw InputError("missing " + what + " argument");
  return c.inputs[i];
}

LaurentPoly load_poly(const std::string& path) {
  try {
    return io::poly_from_json(io::load_json(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

IntMatrix load_matrix(const std::string& path) {
  const json j = io::load_json(path);
  try {
    return io::matrix_from_json(j.contains("matrix") ? j.at("matrix") : j);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Direction parse_ell(const RunConfig& c, std::size_t arity) {
  Direction d;
  d.entries = io::parse_reals(c.ell, "--ell");
  if (d.entries.size() != arity) throw InputError("--ell: expected " + std::to_string(arity) + " entries");
  if (find_integer_relation(d)) warn("--ell entries satisfy a small integer relation; Q-independence fails numerically");
  return d;
}

std::pair<double, double> parse_window(const RunConfig& c) {
  const auto w = io::parse_reals(c.window, "--window");
  if (w.size() != 2 || !(w[1] > w[0])) throw InputError("--window: expected t_min,t_max with t_max > t_min");
  return {w[0], w[1]};
}

json config_json(const RunConfig& c) {
  return {{"command", c.command}, {"inputs", c.inputs},  {"seed", c.seed},     {"tol", c.tol},           {"resolution", c.resolution},
          {"window", c.window},   {"ell", c.ell},        {"k_radius", c.k_radius}, {"fibers", c.fibers}, {"radius", c.radius},
          {"height", c.height},   {"center", c.center},  {"width", c.width},   {"T", c.trunc_t},         {"R", c.trunc_r},
          {"cone", c.cone_path},  {"p", c.p_path},       {"n", c.gauss_n},     {"N", c.gauss_N},         {"gauss_R", c.gauss_R},
          {"eps", c.gauss_eps},   {"shift", c.shift},    {"delta", c.delta},   {"horizon", c.horizon}};
}

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

// Output sink: the --out file when given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError(path + ": cannot open for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// Emits a JSON report with the config hash and tolerances, plus a verdict line on stderr.
int report(const RunConfig& c, json body, bool pass, const json& tolerances) {
  const json config = config_json(c);
  body["config"] = config;
  body["config_hash"] = io::config_hash(config);
  body["tolerances"] = tolerances;
  body["pass"] = pass;
  Sink sink(c.out);
  sink.stream() << io::dump(body);
  std::cerr << c.command << ": " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitPass : kExitFail;
}

void csv_preamble(io::CsvWriter& w, const RunConfig& c) { w.comment("config_hash " + io::config_hash(config_json(c))); }

int cmd_check_ly(const RunConfig& c) {
  const LaurentPoly p = load_poly(require_input(c, 0, "polynomial"));
  const LYReport rep = ly_falsify(p, c.fibers, c.seed);
  json body = {{"fibers_tested", rep.fibers_tested}, {"degenerate_fibers", rep.degenerate_fibers},
               {"min_margin", std::isfinite(rep.min_margin) ? json(rep.min_margin) : json(nullptr)}};
  if (rep.violation) {
    const auto& v = *rep.violation;
    json pts = json::array();
    for (const auto& z : v.point) pts.push_back(complex_json(z));
    body["violation"] = {{"point", pts},         {"free_var", v.free_var}, {"regime", to_string(v.regime)},
                         {"fiber", v.fiber},     {"residual", v.residual}, {"scale", v.scale}};
  }
  return report(c, body, rep.pass(), {{"witness", kWitnessTol}, {"boundary_band", kBoundaryBand}});
}

int cmd_regularity(const RunConfig& c) {
  const LaurentPoly p = load_poly(require_input(c, 0, "polynomial"));
  const auto rep = regularity_check(p, c.resolution);
  json body = {{"points", rep.points}, {"empty", rep.empty},
               {"min_gradient_norm", std::isfinite(rep.min_gradient_norm) ? json(rep.min_gradient_norm) : json(nullptr)}};
  return report(c, body, rep.pass, {{"relative_gradient", kRegularityTol}});
}

int cmd_snf(const RunConfig& c) {
  const IntMatrix a = load_matrix(require_input(c, 0, "matrix"));
  const auto s = smith_normal_form(a);
  if (!(s.S * s.D * s.T == a)) throw NumericalError("Smith decomposition failed its identity check");
  json body = {{"S", io::matrix_to_json(s.S)}, {"D", io::matrix_to_json(s.D)}, {"T", io::matrix_to_json(s.T)}};
  return report(c, body, true, json::object());
}

int cmd_pullback(const RunConfig& c) {
  const IntMatrix a = load_matrix(require_input(c, 0, "matrix"));
  const auto pc = pullback_certificate(a);
  const IntMatrix ab = a * pc.B;
  bool ok = pc.d != 0;
  for (std::size_t i = 0; i < ab.rows(); ++i)
    for (std::size_t j = 0; j < ab.cols(); ++j) ok = ok && ab(i, j) == (i == j ? pc.d : 0);
  json body = {{"B", io::matrix_to_json(pc.B)}, {"d", pc.d}, {"AB", io::matrix_to_json(ab)}};
  return report(c, body, ok, json::object());
}

int cmd_cone_enum(const RunConfig& c) {
  const ProperCone cone(load_matrix(require_input(c, 0, "cone matrix")));
  const Direction ell = parse_ell(c, cone.dim());
  const auto pts = enumerate_truncated(cone, ell, c.radius);
  Sink sink(c.out);
  auto& os = sink.stream();
  io::CsvWriter w(os);
  csv_preamble(w, c);
  for (std::size_t i = 0; i < cone.dim(); ++i) os << "k_" << (i + 1) << ',';
  os << "dot_l\n";
  for (const auto& k : pts) {
    for (auto v : k) os << v << ',';
    os << io::fmt_real(ell.dot(k)) << '\n';
  }
  return kExitPass;
}

int cmd_roots(const RunConfig& c) {
  const LaurentPoly p = load_poly(require_input(c, 0, "polynomial"));
  const auto f = restrict_to_line(p, parse_ell(c, p.arity()));
  const auto [a, b] = parse_window(c);
  const RootList r = find_real_roots(f, a, b, tol_or(c, 1e-10));
  Sink sink(c.out);
  io::CsvWriter w(sink.stream());
  csv_preamble(w, c);
  w.header({"t", "multiplicity"});
  for (std::size_t i = 0; i < r.roots.size(); ++i) w.row(r.roots[i], r.multiplicities[i]);
  if (r.newton_failures > 0) std::cerr << "roots: " << r.newton_failures << " Newton seeds discarded\n";
  return kExitPass;
}

int cmd_audit(const RunConfig& c) {
  const LaurentPoly p = load_poly(require_input(c, 0, "polynomial"));
  const auto f = restrict_to_line(p, parse_ell(c, p.arity()));
  const auto [a, b] = parse_window(c);
  const auto rep = real_rootedness_audit(f, a, b, c.height);
  json body = {{"real_count", rep.real_count}, {"complex_count", rep.complex_count}, {"total_count", rep.total_count},
               {"t_min", rep.t_min},           {"t_max", rep.t_max},                 {"height", rep.height}};
  return report(c, body, rep.pass, {{"root_residual", 1e-10}, {"winding_residue", 0.01}});
}

int cmd_trace(const RunConfig& c) {
  const LaurentPoly p = load_poly(require_input(c, 0, "polynomial"));
  const auto curve = trace_curve(p, c.resolution);
  Sink sink(c.out);
  io::CsvWriter w(sink.stream());
  csv_preamble(w, c);
  w.header({"x1", "x2", "branch", "slope"});
  for (const auto& br : curve.branches)
    for (const auto& pt : br.points) {
      const auto x = pt.point();
      w.row(x[0], x[1], pt.branch_id, pt.slope);
    }
  return kExitPass;
}

int cmd_fourier(const RunConfig& c) {
  const LaurentPoly p = load_poly(require_input(c, 0, "polynomial"));
  const auto table = compute_spectrum(p, parse_ell(c, p.arity()), box_vectors(c.k_radius), c.resolution);
  Sink sink(c.out);
  io::CsvWriter w(sink.stream());
  csv_preamble(w, c);
  w.comment("converged_resolution " + std::to_string(table.resolution));
  w.header({"k1", "k2", "re", "im", "freq"});
  for (const auto& [k, e] : table.entries) w.row(k[0], k[1], e.coefficient.real(), e.coefficient.imag(), e.frequency);
  return kExitPass;
}

json scan_json(const ConeScanReport& rep) {
  return {{"max_outside", rep.max_outside}, {"max_inside", rep.max_inside}, {"mass", rep.mass},
          {"worst_outside", rep.worst_outside}, {"resolution", rep.table.resolution}};
}

int cmd_scan_cone(const RunConfig& c) {
  const LaurentPoly p = load_poly(require_input(c, 0, "polynomial"));
  const ProperCone cone(load_matrix(require_input(c, 1, "cone matrix")));
  const double tol = tol_or(c, kConeSupportTol);
  const auto rep = cone_support_scan(p, parse_ell(c, p.arity()), cone, c.k_radius, c.resolution, tol);
  return report(c, scan_json(rep), rep.pass, {{"relative_support", tol}, {"fourier_convergence", kFourierConvergenceTol}});
}

int cmd_verify_lighthouse(const RunConfig& c) {
  const LaurentPoly p = load_poly(require_input(c, 0, "polynomial"));
  const ProperCone cone(load_matrix(require_input(c, 1, "cone matrix")));
  const double tol = tol_or(c, kConeSupportTol);
  const auto rep = lighthouse_report(p, parse_ell(c, p.arity()), cone, c.k_radius, tol, c.resolution);
  json body = scan_json(rep.scan);
  body["dual_interior"] = rep.dual_interior;
  return report(c, body, rep.pass, {{"relative_support", tol}});
}

int cmd_verify_summation(const RunConfig& c) {
  const LaurentPoly p = load_poly(require_input(c, 0, "polynomial"));
  std::optional<ProperCone> cone;
  if (!c.cone_path.empty()) cone.emplace(load_matrix(c.cone_path));
  const auto rep = verify_summation(p, parse_ell(c, p.arity()), GaussianTest(c.center, c.width), c.trunc_t, c.trunc_r, cone, c.resolution);
  json body = {{"lhs", complex_json(rep.lhs)},     {"rhs", complex_json(rep.rhs)},       {"residual", rep.residual},
               {"lhs_tail", rep.lhs_tail},         {"rhs_tail", rep.rhs_tail},           {"root_count", rep.root_count},
               {"lattice_count", rep.lattice_count}, {"mass", rep.mass}};
  return report(c, body, rep.pass, {{"relative_residual", kSummationTol}, {"truncation", kTruncationTol}});
}

int cmd_verify_cov(const RunConfig& c) {
  const LaurentPoly q = load_poly(require_input(c, 0, "polynomial q"));
  const IntMatrix a = load_matrix(require_input(c, 1, "matrix A"));
  std::optional<LaurentPoly> p;
  if (!c.p_path.empty()) p = load_poly(c.p_path);
  const auto rep = change_of_variables_check(q, a, parse_ell(c, q.arity()), c.k_radius, p, c.resolution);
  json body = {{"kappa", complex_json(rep.kappa)}, {"det", rep.det},           {"max_deviation", rep.max_deviation},
               {"max_ratio_spread", rep.max_ratio_spread}, {"supported", rep.supported}, {"ell", rep.ell.entries}};
  return report(c, body, rep.pass, {{"relative_deviation", kConeSupportTol}});
}

int cmd_verify_gauss(const RunConfig& c) {
  std::vector<double> v(static_cast<std::size_t>(std::max(c.gauss_n, 0)), 0.0);
  if (!c.shift.empty()) v = io::parse_reals(c.shift, "--shift");
  const auto tail = gaussian_tail_bound(c.gauss_n, c.gauss_N, c.gauss_R, c.gauss_eps, v);
  const auto integral = gaussian_tail_integral_check(c.gauss_n, c.gauss_N, c.gauss_R);
  json body = {{"lattice_tail", {{"lhs_sum", tail.lhs_sum}, {"rhs_bound", tail.rhs_bound}, {"radius", tail.radius}, {"pass", tail.pass}}},
               {"integral_tail", {{"lhs", integral.lhs}, {"rhs", integral.rhs}, {"constant", integral.constant}, {"pass", integral.pass}}}};
  return report(c, body, tail.pass && integral.pass, json::object());
}

int cmd_verify_orbit(const RunConfig& c) {
  const LaurentPoly p = load_poly(require_input(c, 0, "polynomial"));
  const auto rep = orbit_closure_check(p, parse_ell(c, p.arity()), c.delta, c.horizon, c.resolution);
  json body = {{"max_min_distance", rep.max_min_distance}, {"orbit_points", rep.orbit_points}, {"curve_points", rep.curve_points}};
  return report(c, body, rep.pass, {{"delta", c.delta}});
}

int cmd_plot(const RunConfig& c) {
  const LaurentPoly p = load_poly(require_input(c, 0, "polynomial"));
  const auto curve = trace_curve(p, c.resolution);
  constexpr double kSize = 512;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  Sink sink(c.out);
  auto& os = sink.stream();
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize << "\" viewBox=\"0 0 1 1\">\n";
  os << "<!-- config_hash " << io::config_hash(config_json(c)) << " -->\n";
  os << "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\" stroke=\"black\" stroke-width=\"0.004\"/>\n";
  for (const auto& br : curve.branches) {
    const char* colour = palette[static_cast<std::size_t>(br.points.empty() ? 0 : br.points[0].branch_id) % 6];
    // Split the polyline wherever the branch wraps across the fundamental domain.
    std::vector<std::array<double, 2>> run;
    auto flush = [&] {
      if (run.size() > 1) {
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"0.004\" points=\"";
        for (const auto& x : run) os << io::fmt_real(x[0]) << ',' << io::fmt_real(1.0 - x[1]) << ' ';
        os << "\"/>\n";
      }
      run.clear();
    };
    for (std::size_t i = 0; i <= br.points.size(); ++i) {
      const auto x = br.points[i % br.points.size()].point();
      if (!run.empty() && (std::abs(x[0] - run.back()[0]) > 0.5 || std::abs(x[1] - run.back()[1]) > 0.5)) flush();
      run.push_back(x);
    }
    flush();
  }
  os << "</svg>\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fqlab: Fourier quasicrystals from Lee-Yang polynomials"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;

  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--tol", cfg.tol, "tolerance override")->check(CLI::PositiveNumber);
  app.add_option("--resolution", cfg.resolution, "slices per unit (power of two, at least 64)")
      ->capture_default_str()
      ->check([](const std::string& s) {
        std::size_t v = 0;
        try {
          v = std::stoul(s);
        } catch (...) {
          return std::string("not an integer");
        }
        return (v >= 64 && (v & (v - 1)) == 0) ? std::string() : std::string("must be a power of two >= 64");
      });
  app.add_option("--window", cfg.window, "t_min,t_max")->capture_default_str();
  app.add_option("--ell", cfg.ell, "direction entries, comma separated")->capture_default_str();
  app.add_option("--k-radius", cfg.k_radius, "lattice radius ||k||_inf")->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--out", cfg.out, "output path (default stdout)");

  using Handler = std::function<int(const RunConfig&)>;
  std::map<std::string, Handler> handlers;
  auto sub = [&](const std::string& name, const std::string& help, const std::string& args, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("inputs", cfg.inputs, args)->required();
    handlers[name] = std::move(h);
    return s;
  };

  sub("check-ly", "randomised Lee-Yang falsification", "poly.json", cmd_check_ly)
      ->add_option("--fibers", cfg.fibers, "fiber count")
      ->capture_default_str();
  sub("regularity", "torus gradient check on the zero curve", "poly.json", cmd_regularity);
  sub("snf", "Smith normal form A = S*D*T", "matrix.json", cmd_snf);
  sub("pullback", "pullback certificate A*B = (dI | 0)", "matrix.json", cmd_pullback);
  sub("cone-enum", "lattice points of a truncated double cone", "cone.json", cmd_cone_enum)
      ->add_option("--radius", cfg.radius, "truncation |<l,k>| <= R")
      ->capture_default_str();
  sub("roots", "real zeros along a line", "poly.json", cmd_roots);
  sub("audit", "argument-principle real-rootedness audit", "poly.json", cmd_audit)
      ->add_option("--height", cfg.height, "contour half-height")
      ->capture_default_str();
  sub("trace", "trace the zero curve on the torus", "poly.json", cmd_trace);
  sub("fourier", "Fourier coefficients of the directional measure", "poly.json", cmd_fourier);
  sub("scan-cone", "cone support scan of the spectrum", "poly.json cone.json", cmd_scan_cone);
  auto* vs = sub("verify-summation", "summation formula with a Gaussian test function", "poly.json", cmd_verify_summation);
  vs->add_option("--center", cfg.center, "Gaussian centre")->capture_default_str();
  vs->add_option("--width", cfg.width, "Gaussian width")->capture_default_str()->check(CLI::PositiveNumber);
  vs->add_option("-T", cfg.trunc_t, "root-side truncation")->capture_default_str();
  vs->add_option("-R", cfg.trunc_r, "spectrum-side truncation")->capture_default_str();
  vs->add_option("--cone", cfg.cone_path, "cone matrix (default first orthant)");
  sub("verify-lighthouse", "lighthouse predicate", "poly.json cone.json", cmd_verify_lighthouse);
  sub("verify-cov", "monomial change of variables", "q.json A.json", cmd_verify_cov)->add_option("--p", cfg.p_path, "explicit p");
  {
    CLI::App* vg = app.add_subcommand("verify-gauss", "Gaussian tail bounds");
    vg->add_option("--n", cfg.gauss_n, "dimension (1-3)")->capture_default_str();
    vg->add_option("--N", cfg.gauss_N, "scale N")->capture_default_str();
    vg->add_option("--R", cfg.gauss_R, "radius R")->capture_default_str();
    vg->add_option("--eps", cfg.gauss_eps, "exponent epsilon")->capture_default_str();
    vg->add_option("--shift", cfg.shift, "shift vector v");
    handlers["verify-gauss"] = cmd_verify_gauss;
  }
  auto* vo = sub("verify-orbit", "orbit closure density check", "poly.json", cmd_verify_orbit);
  vo->add_option("--delta", cfg.delta, "torus distance threshold")->capture_default_str();
  vo->add_option("--horizon", cfg.horizon, "time horizon T")->capture_default_str();
  sub("plot", "SVG of the zero curve in the fundamental domain", "poly.json", cmd_plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  for (const auto* s : app.get_subcommands()) cfg.command = s->get_name();
  try {
    return handlers.at(cfg.command)(cfg);
  } catch (const InputError& e) {
    std::cerr << "fqlab: input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "fqlab: invalid request: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "fqlab: " << cfg.command << " failed: " << e.what() << '\n';
    return kExitFail;
  }
}
