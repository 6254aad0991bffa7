#include "ballavg/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "ballavg/analysis.hpp"
#include "ballavg/functionals.hpp"
#include "ballavg/kernels.hpp"
#include "ballavg/pointwise.hpp"
#include "ballavg/synth.hpp"

namespace ballavg::checks {

using kernels::FilterBank;

void SuiteResult::expect(bool ok, const std::string& line) {
  details.push_back(std::string(ok ? "ok   " : "FAIL ") + line);
  if (!ok) passed = false;
}

std::string SuiteResult::to_text() const {
  std::ostringstream os;
  os << "[" << (passed ? "PASS" : "FAIL") << "] " << name << '\n';
  for (const auto& d : details) os << "    " << d << '\n';
  for (const auto& [k, v] : measured) os << "    measured " << k << " = " << io::format_number(v) << '\n';
  return os.str();
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

double sup_diff(const GridFunction& a, const GridFunction& b) { return lp_norm(a - b, kInf); }

synth::GeneratorSpec bandlimited(int dim, int n, int max_mode, std::uint64_t seed) {
  synth::GeneratorSpec s;
  s.kind = synth::Kind::Bandlimited;
  s.dim = dim;
  s.samples_per_axis = n;
  s.max_mode = max_mode;
  s.seed = seed;
  return s;
}

synth::GeneratorSpec single_mode(int dim, int n, Index k) {
  synth::GeneratorSpec s;
  s.kind = synth::Kind::SingleMode;
  s.dim = dim;
  s.samples_per_axis = n;
  s.mode = k;
  s.phase = 0.3;
  return s;
}

synth::GeneratorSpec weierstrass(int n, double alpha0, int terms) {
  synth::GeneratorSpec s;
  s.kind = synth::Kind::Weierstrass;
  s.samples_per_axis = n;
  s.alpha0 = alpha0;
  s.terms = terms;
  return s;
}

// Spectral f − B_t f through the Î profile, for any t > 0.
GridFunction difference_via_average(const GridFunction& f, double t) {
  const int dim = f.dim();
  return apply_radial_multiplier(f, [=](double xi) { return 1.0 - kernels::ball_multiplier(dim, t * xi); });
}

GridFunction eta_applied(const GridFunction& v, double t, const FilterBank& bank) {
  const int dim = v.dim();
  return apply_radial_multiplier(
      v, [&, dim, t](double xi) { return kernels::reconstruction_multiplier(dim, t * xi, bank); });
}

struct FaultGuard {
  explicit FaultGuard(bool on) : active(on) {
    if (active) kernels::set_multiplier_fault(1e-3);
  }
  ~FaultGuard() {
    if (active) kernels::set_multiplier_fault(0.0);
  }
  bool active;
};

// -- suites ---------------------------------------------------------------------

SuiteResult multipliers(const CheckOptions&) {
  SuiteResult r{"multipliers"};
  double e1 = 0.0, e3 = 0.0, ea = 0.0, e2 = 0.0, over = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double s = 0.01 * i;
    const double c1 = s == 0.0 ? 1.0 : std::sin(s) / s;
    const double c3 = s == 0.0 ? 1.0 : 3.0 * (std::sin(s) - s * std::cos(s)) / (s * s * s);
    const double c2 = s == 0.0 ? 1.0 : 2.0 * std::cyl_bessel_j(1.0, s) / s;
    e1 = std::max(e1, std::abs(kernels::ball_multiplier_quadrature(1, s) - c1));
    e3 = std::max(e3, std::abs(kernels::ball_multiplier_quadrature(3, s) - c3));
    e2 = std::max(e2, std::abs(kernels::ball_multiplier(2, s) - c2));
    for (int n = 1; n <= 3; ++n) {
      const double ihat = kernels::ball_multiplier(n, s);
      ea = std::max(ea, std::abs(kernels::a_function(n, s) - (1.0 - ihat)));
      over = std::max(over, std::abs(ihat) - 1.0);
    }
  }
  r.measured["quadrature_err_n1"] = e1;
  r.measured["quadrature_err_n3"] = e3;
  r.measured["bessel_err_n2"] = e2;
  r.measured["a_identity_err"] = ea;
  r.expect(e1 <= 1e-10, "n=1 quadrature vs sin s/s on [0,100]: " + fmt(e1) + " <= 1e-10");
  r.expect(e3 <= 1e-10, "n=3 quadrature vs closed form on [0,100]: " + fmt(e3) + " <= 1e-10");
  r.expect(e2 <= 1e-10, "n=2 profile vs 2 J1(s)/s on [0,100]: " + fmt(e2) + " <= 1e-10");
  r.expect(ea <= 1e-12, "A = 1 - I on [0,100], n=1,2,3: " + fmt(ea) + " <= 1e-12");
  r.expect(over <= 1e-15, "|I(s)| <= 1 on [0,100]");
  for (int n = 1; n <= 3; ++n) {
    double lo = kInf, hi = 0.0;
    for (int i = 1; i <= 400; ++i) {
      const double s = 0.01 * i;
      const double v = kernels::a_function(n, s) / (s * s);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    r.measured["c1_n" + std::to_string(n)] = lo;
    r.measured["c2_n" + std::to_string(n)] = hi;
    const bool ok = lo > 0.0 && std::isfinite(hi) && (n != 1 || (lo >= 0.01 && hi <= 1.0));
    r.expect(ok, "A(s)/s^2 on (0,4], n=" + std::to_string(n) + ": [" + fmt(lo) + ", " + fmt(hi) + "]");
  }
  for (int ell = 1; ell <= 2; ++ell) {
    auto ratio = [ell](double s) { return kernels::higher_defect(1, ell, s) / std::pow(s, 2 * ell); };
    const double a = ratio(1e-2), b = ratio(1e-3);
    r.expect(std::abs(a / b - 1.0) < 0.05,
             "(1 - m_l)/s^(2l) flat near 0, l=" + std::to_string(ell) + ": " + fmt(a) + " vs " + fmt(b));
  }
  return r;
}

SuiteResult oracle(const CheckOptions&) {
  SuiteResult r{"oracle"};
  std::vector<synth::GeneratorSpec> specs = {
      single_mode(1, 256, {3, 0, 0}),   single_mode(2, 64, {2, 1, 0}),
      single_mode(3, 32, {1, 1, 1}),    bandlimited(1, 256, 16, 3),
      bandlimited(2, 64, 4, 4),         weierstrass(256, 0.9, 6),
      weierstrass(256, 1.5, 6),         synth::GeneratorSpec{}};
  specs.back().samples_per_axis = 64;
  double worst = 0.0;
  for (const auto& s : specs) {
    const auto f = synth::generate(s);
    for (double t : make_ladder(s.samples_per_axis, 2).scales()) {
      worst = std::max(worst, sup_diff(synth::analytic_ball_average(s, t),
                                       kernels::apply_ball_average(f, t)));
    }
  }
  r.measured["analytic_vs_spectral"] = worst;
  r.expect(worst <= 1e-10, "analytic vs spectral ball average: " + fmt(worst) + " <= 1e-10");

  const std::vector<synth::GeneratorSpec> smooth = {
      single_mode(1, 256, {1, 0, 0}), bandlimited(1, 256, 4, 5), single_mode(2, 64, {1, 1, 0})};
  for (const auto& s : smooth) {
    const auto f = synth::generate(s);
    double grad = 0.0;
    for (const auto& m : synth::modes(s)) {
      grad += std::abs(m.amplitude) * 2.0 * kPi *
              std::sqrt(static_cast<double>(m.k[0] * m.k[0] + m.k[1] * m.k[1] + m.k[2] * m.k[2]));
    }
    const double t = 0.125;
    const double err = sup_diff(kernels::validate_direct(f, t), kernels::apply_ball_average(f, t));
    const double band = 10.0 * f.spacing() * grad;
    r.expect(err <= band, "direct vs spectral, " + synth::to_string(s.kind) + " dim=" +
                              std::to_string(s.dim) + ": " + fmt(err) + " <= " + fmt(band));
  }
  return r;
}

SuiteResult calderon(const CheckOptions&) {
  SuiteResult r{"calderon"};
  for (const auto& bank : {kernels::build_filter_bank(), kernels::build_alternate_filter_bank()}) {
    const std::string tag = "a=" + fmt(bank.plateau_end()) + " b=" + fmt(bank.support_end());
    r.measured["partition_dev_" + tag] = bank.partition_deviation();
    r.measured["c0_" + tag] = bank.lower_bound();
    r.expect(bank.partition_deviation() <= 1e-10,
             "partition of unity, " + tag + ": " + fmt(bank.partition_deviation()) + " <= 1e-10");
    r.expect(bank.lower_bound() > 0.0, "lower bound c0 > 0, " + tag + ": " + fmt(bank.lower_bound()));
  }
  const auto bank = kernels::build_filter_bank();
  const std::vector<synth::GeneratorSpec> specs = {bandlimited(1, 256, 60, 11),
                                                   bandlimited(2, 64, 15, 12),
                                                   bandlimited(3, 16, 4, 13)};
  double worst_sq = 0.0, worst_ball = 0.0;
  for (const auto& s : specs) {
    const auto f = synth::generate(s);
    const int cover = bank.rungs_to_cover(f.dim(), f.samples_per_axis());
    GridFunction sq = kernels::apply_base_filter(kernels::apply_base_filter(f, bank), bank);
    GridFunction via_ball = sq;
    for (int k = 1; k <= cover; ++k) {
      const double t = std::ldexp(1.0, -k);
      sq = sq + kernels::apply_filter(kernels::apply_filter(f, bank, k), bank, k);
      via_ball = via_ball +
                 kernels::apply_filter(eta_applied(difference_via_average(f, t), t, bank), bank, k);
    }
    worst_sq = std::max(worst_sq, sup_diff(sq, f));
    worst_ball = std::max(worst_ball, sup_diff(via_ball, f));
  }
  r.measured["reconstruction_err"] = worst_sq;
  r.measured["reconstruction_via_ball_err"] = worst_ball;
  r.expect(worst_sq <= 1e-8, "f = Phi*Phi*f + sum phi_k*phi_k*f: " + fmt(worst_sq) + " <= 1e-8");
  r.expect(worst_ball <= 1e-8,
           "f rebuilt from ball differences through eta: " + fmt(worst_ball) + " <= 1e-8");
  return r;
}

SuiteResult se9(const CheckOptions&) {
  SuiteResult r{"se9"};
  const auto bank = kernels::build_filter_bank();
  const std::vector<synth::GeneratorSpec> specs = {bandlimited(1, 256, 60, 21),
                                                   bandlimited(2, 64, 15, 22),
                                                   bandlimited(3, 16, 4, 23)};
  double worst = 0.0;
  for (const auto& s : specs) {
    const auto f = synth::generate(s);
    const int cover = bank.rungs_to_cover(f.dim(), f.samples_per_axis());
    for (int k = 1; k <= cover; ++k) {
      const double t = std::ldexp(1.0, -k);
      worst = std::max(worst, sup_diff(kernels::apply_filter(f, bank, k),
                                       eta_applied(difference_via_average(f, t), t, bank)));
    }
  }
  r.measured["se9_err"] = worst;
  r.expect(worst <= 1e-8, "phi_t*f = eta_t*(f - B_t f) at every rung: " + fmt(worst) + " <= 1e-8");
  return r;
}

SuiteResult polynomial(const CheckOptions&) {
  SuiteResult r{"polynomial"};
  synth::GeneratorSpec s;
  s.kind = synth::Kind::PolyPatch;
  s.degree = 2;
  s.samples_per_axis = 1024;
  const auto f = synth::generate(s);
  double worst = 0.0;
  for (double t : {0.125, 0.0625, 0.03125}) {
    const auto d = kernels::ball_difference(f, t);
    for (std::size_t i : synth::patch_interior(s, t)) {
      const double expect = -t * t / 3.0;
      worst = std::max(worst, std::abs(d[i] - expect) / std::abs(expect));
    }
  }
  r.measured["quadratic_rel_err"] = worst;
  r.expect(worst <= 1e-6, "f - B_t f = -t^2/3 on the quadratic patch: " + fmt(worst) + " <= 1e-6");

  double exact = 0.0;
  for (double t : {0.0625, 0.03125, 0.015625}) {
    const auto d = kernels::higher_difference(f, t, 2);
    for (std::size_t i : synth::patch_interior(s, 2.0 * t)) exact = std::max(exact, std::abs(d[i]));
  }
  r.measured["order4_quadratic_err"] = exact;
  r.expect(exact <= 1e-8, "order-4 average reproduces quadratics: " + fmt(exact) + " <= 1e-8");

  const ScaleLadder ladder(4, 9);
  analysis::SlopeOptions o;
  o.statistic = analysis::Statistic::BallAverage;
  o.mask = synth::patch_interior(s, ScaleLadder::scale(ladder.k_min()));
  const auto quad = analysis::estimate_alpha(f, ladder, o);
  r.measured["quadratic_slope"] = quad.alpha_hat;
  r.expect(std::abs(quad.alpha_hat - 2.0) <= 0.05, "ball slope on the quadratic patch: " + fmt(quad.alpha_hat) + " in 2 +- 0.05");

  s.degree = 4;
  const auto f4 = synth::generate(s);
  o.statistic = analysis::Statistic::HigherOrder;
  o.ell = 2;
  o.mask = synth::patch_interior(s, 2.0 * ScaleLadder::scale(ladder.k_min()));
  const auto quart = analysis::estimate_alpha(f4, ladder, o);
  r.measured["quartic_slope"] = quart.alpha_hat;
  r.expect(std::abs(quart.alpha_hat - 4.0) <= 0.2, "order-4 slope on the quartic patch: " + fmt(quart.alpha_hat) + " in 4 +- 0.2");
  return r;
}

// Random nonnegative time-space field with occasional spikes.
TimeSpaceField random_field(int dim, int n, const ScaleLadder& ladder, std::mt19937_64& rng) {
  auto u = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<GridFunction> rungs;
  std::size_t size = 1;
  for (int a = 0; a < dim; ++a) size *= static_cast<std::size_t>(n);
  for (int k = ladder.k_min(); k <= ladder.k_max(); ++k) {
    std::vector<double> v(size);
    for (auto& x : v) {
      x = u();
      x = x * x * x;
      if (u() < 0.01) x += 10.0 * u();
    }
    rungs.emplace_back(dim, n, std::move(v));
  }
  return TimeSpaceField(ladder, std::move(rungs));
}

SuiteResult lemma23(const CheckOptions& o) {
  SuiteResult r{"lemma23"};
  std::mt19937_64 rng(o.seed);
  const double qs[] = {1.5, 2.0, 3.0};
  const double lambdas[] = {1.5, 2.0, 3.0};
  std::size_t violations = 0, checked = 0;
  double worst = 0.0;
  for (int trial = 0; trial < o.trials; ++trial) {
    const int dim = 1 + trial % 2;
    const int n = 64;
    const ScaleLadder ladder = make_ladder(n, 2);
    const double q = qs[trial % 3];
    const double lambda = lambdas[(trial / 3) % 3];
    const auto F = random_field(dim, n, ladder, rng);
    const auto S = square_s(F, q);
    const auto G = square_gstar(F, q, lambda);
    const double K = std::pow(std::pow(2.0, lambda * dim) / kernels::unit_ball_volume(dim), 1.0 / q);
    for (std::size_t i = 0; i < S.size(); ++i) {
      ++checked;
      const double ratio = S[i] / (K * G[i]);
      worst = std::max(worst, ratio);
      if (ratio > 1.0 + 1e-12) ++violations;
    }
  }
  r.measured["S_over_bound_max"] = worst;
  r.expect(violations == 0, "S <= (2^(lambda n)/v_n)^(1/q) G*: " + std::to_string(violations) +
                                " violations in " + std::to_string(checked) + " nodes, max ratio " + fmt(worst));

  // Upper comparison for p >= q: the ratio ‖G*‖_p/‖G‖_p, worst over trials.
  const double p = 3.0, q = 2.0, lambda = 2.0;
  const int trials = std::max(1, o.trials / 4);
  for (int dim = 1; dim <= 2; ++dim) {
    double c64 = 0.0, c128 = 0.0;
    for (int n : {64, 128}) {
      const ScaleLadder ladder = make_ladder(n, 2);
      double c = 0.0;
      for (int t = 0; t < trials; ++t) {
        const auto F = random_field(dim, n, ladder, rng);
        c = std::max(c, lp_norm(square_gstar(F, q, lambda), p) / lp_norm(square_g(F, q), p));
      }
      (n == 64 ? c64 : c128) = c;
    }
    const std::string tag = "dim" + std::to_string(dim);
    r.measured["gstar_over_g_N64_" + tag] = c64;
    r.measured["gstar_over_g_N128_" + tag] = c128;
    r.expect(std::isfinite(c64) && std::abs(c128 / c64 - 1.0) <= 0.25,
             "||G*||_p/||G||_p stable N=64->128, " + tag + ": " + fmt(c64) + " -> " + fmt(c128));
  }

  // Dilation growth of ‖S_β‖_p over β ∈ {1, 2, 4, 8}.
  for (const auto& [pp, qq] : {std::pair{1.5, 2.0}, std::pair{3.0, 2.0}}) {
    for (int dim = 1; dim <= 2; ++dim) {
      const int n = dim == 1 ? 256 : 64;
      const ScaleLadder ladder(5, make_ladder(n, 5).k_max());
      double worst_slope = -kInf;
      for (int t = 0; t < trials; ++t) {
        const auto F = random_field(dim, n, ladder, rng);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (double beta : {1.0, 2.0, 4.0, 8.0}) {
          const double x = std::log2(beta);
          const double y = std::log2(lp_norm(square_s(F, qq, beta), pp));
          sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        worst_slope = std::max(worst_slope, (4 * sxy - sx * sy) / (4 * sxx - sx * sx));
      }
      const double bound = dim * (1.0 / std::min(pp, qq) - 1.0 / qq) + 0.2;
      const std::string tag = "p" + fmt(pp) + "_dim" + std::to_string(dim);
      r.measured["beta_growth_" + tag] = worst_slope;
      r.expect(worst_slope <= bound, "||S_beta||_p growth exponent, " + tag + ": " + fmt(worst_slope) +
                                         " <= " + fmt(bound));
    }
  }
  return r;
}

SuiteResult chains(const CheckOptions&) {
  SuiteResult r{"chains"};
  const std::vector<std::pair<std::string, synth::GeneratorSpec>> funcs = {
      {"weierstrass", weierstrass(128, 0.9, 5)}, {"bandlimited", bandlimited(1, 128, 12, 31)},
      {"bandlimited2d", bandlimited(2, 32, 4, 32)}};
  const double alpha = 0.9;
  for (const auto& [name, spec] : funcs) {
    const auto f = synth::generate(spec);
    const auto ladder = make_ladder(spec.samples_per_axis, 2);
    struct Case {
      Variant v;
      double r;
    };
    for (const auto& c : {Case{Variant::SupPoint, 2}, Case{Variant::SupNbhd, 2},
                          Case{Variant::BallSup, 2}, Case{Variant::BallAvg, 2},
                          Case{Variant::BallRavg, 2}, Case{Variant::PointCtr, kInf},
                          Case{Variant::PointCtr, 2}, Case{Variant::Hajlasz, 2}}) {
      GradientConstants k;
      k.r = c.r;
      const auto cand = extract_gradient(f, alpha, ladder, c.v, k);
      const auto rep = verify_implications(f, cand, ladder, 2.0);
      std::size_t checks = 0;
      for (const auto& ch : rep.checks) checks += ch.checked;
      r.expect(rep.passed(), name + " " + to_string(c.v) + " r=" + format_exponent(c.r) + ": " +
                                 std::to_string(rep.checks.size()) + " inequalities, " +
                                 std::to_string(checks) + " node checks, " +
                                 std::to_string(rep.total_violations()) + " violations");
      if (!rep.passed()) r.details.push_back(rep.to_text());
    }
    // Maximal function: dominates |f|, homogeneous, monotone.
    const auto M = hl_maximal(f, ladder).values;
    const auto M3 = hl_maximal(-3.0 * f, ladder).values;
    const auto Mbig = hl_maximal(f.abs() + GridFunction::constant(f.dim(), f.samples_per_axis(), 0.5), ladder).values;
    bool dom = true, hom = true, mono = true;
    for (std::size_t i = 0; i < f.size(); ++i) {
      dom = dom && M[i] >= std::abs(f[i]);
      hom = hom && std::abs(M3[i] - 3.0 * M[i]) <= 1e-12 * M3[i];
      mono = mono && Mbig[i] >= M[i];
    }
    r.expect(dom && hom && mono, name + " maximal function: Mf >= |f|, M(cf) = |c|Mf, monotone");
  }
  return r;
}

SuiteResult hajlasz(const CheckOptions&) {
  SuiteResult r{"hajlasz"};
  const auto f = synth::generate(weierstrass(256, 0.9, 6));
  const auto g = hajlasz_certificate(f, 0.9);
  const auto chk = hajlasz_verify(f, g, 0.9);
  r.measured["certificate_lp2"] = lp_norm(g, 2.0);
  r.expect(chk.passed() && std::isfinite(lp_norm(g, 2.0)),
           "Weierstrass 0.9 with pairwise certificate, N=256: " + std::to_string(chk.violations) +
               " violations in " + std::to_string(chk.checked) + " pairs");
  const auto lip = GridFunction::sample(1, 256, [](const Point& x) { return std::sin(2 * kPi * x[0]) / (2 * kPi); });
  const auto half = GridFunction::constant(1, 256, 0.5);
  const auto c2 = hajlasz_verify(lip, half, 1.0);
  r.expect(c2.passed(), "Lipschitz f, alpha=1, g = L/2: " + std::to_string(c2.violations) + " violations");
  const auto c3 = hajlasz_verify(GridFunction::constant(1, 256, 2.0), GridFunction::constant(1, 256, 0.0), 0.5);
  r.expect(c3.passed(), "constant f, g = 0: " + std::to_string(c3.violations) + " violations");
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"multipliers", "oracle", "calderon", "se9",
                                                 "polynomial", "lemma23", "chains", "hajlasz"};
  return names;
}

SuiteResult run_suite(const std::string& name, const CheckOptions& options) {
  static const std::map<std::string, std::function<SuiteResult(const CheckOptions&)>> table = {
      {"multipliers", multipliers}, {"oracle", oracle},         {"calderon", calderon},
      {"se9", se9},                 {"polynomial", polynomial}, {"lemma23", lemma23},
      {"chains", chains},           {"hajlasz", hajlasz}};
  const auto it = table.find(name);
  if (it == table.end()) throw DomainError("unknown check suite '" + name + "'");
  FaultGuard guard(options.inject_fault);
  return it->second(options);
}

}  // namespace ballavg::checks
