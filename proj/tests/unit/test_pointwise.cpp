#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "ballavg/kernels.hpp"
#include "ballavg/pointwise.hpp"
#include "ballavg/synth.hpp"

using namespace ballavg;
using Catch::Approx;

namespace {

GridFunction smooth(int dim, int n, std::uint64_t seed) {
  synth::GeneratorSpec s;
  s.kind = synth::Kind::Bandlimited;
  s.dim = dim;
  s.samples_per_axis = n;
  s.max_mode = n / 8;
  s.seed = seed;
  return synth::generate(s);
}

GridFunction weierstrass(int n, double a0, int terms) {
  synth::GeneratorSpec s;
  s.kind = synth::Kind::Weierstrass;
  s.samples_per_axis = n;
  s.alpha0 = a0;
  s.terms = terms;
  return synth::generate(s);
}

const Variant kAll[] = {Variant::SupPoint, Variant::SupNbhd, Variant::BallSup, Variant::BallAvg,
                        Variant::BallRavg, Variant::PointCtr, Variant::Hajlasz};

}  // namespace

TEST_CASE("maximal function of constants and spikes", "[pointwise]") {
  const auto ladder = make_ladder(64, 2);
  const auto c = hl_maximal(GridFunction::constant(1, 64, -2.0), ladder);
  for (double v : c.values.values()) CHECK(v == Approx(2.0));

  std::vector<double> v(64, 0.0);
  v[20] = 3.0;
  const GridFunction f(1, 64, v);
  const auto m = hl_maximal(f, ladder);
  CHECK(m.values[20] == 3.0);
  // direct enumeration over {x}, the ladder balls and the torus
  for (int x = 0; x < 64; ++x) {
    double best = std::abs(f[x]);
    best = std::max(best, 3.0 / 64);
    for (double t : ladder.scales()) {
      double s = 0.0;
      int cnt = 0;
      for (int y = 0; y < 64; ++y) {
        const int d = std::min(std::abs(x - y), 64 - std::abs(x - y));
        if (d / 64.0 < t) {
          s += std::abs(f[y]);
          ++cnt;
        }
      }
      best = std::max(best, s / cnt);
    }
    CHECK(m.values[x] == Approx(best));
  }
  for (int d = 1; d < 20; ++d) CHECK(m.values[20 + d] <= m.values[20 + d - 1]);
}

TEST_CASE("maximal function properties", "[pointwise]") {
  const auto f = smooth(2, 32, 3);
  const auto ladder = make_ladder(32, 2);
  const auto m = hl_maximal(f, ladder);
  const auto m2 = hl_maximal(-3.0 * f, ladder);
  const auto bigger = hl_maximal(f.abs() + GridFunction::constant(2, 32, 0.1), ladder);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(m.values[i] >= std::abs(f[i]));
    CHECK(m2.values[i] == Approx(3.0 * m.values[i]));
    CHECK(bigger.values[i] >= m.values[i]);
  }
  const auto g = weierstrass(512, 0.9, 7);
  CHECK(lp_norm(hl_maximal(g, make_ladder(512, 2)).values, 2.0) < 5.0 * lp_norm(g, 2.0));
}

TEST_CASE("variant names", "[pointwise]") {
  for (auto v : kAll) CHECK(parse_variant(to_string(v)) == v);
  CHECK(to_string(Variant::SupPoint) == "sup_point");
  CHECK_THROWS_AS(parse_variant("nope"), DomainError);
}

TEST_CASE("canonical gradients vanish on constants", "[pointwise]") {
  const auto c = GridFunction::constant(1, 64, 4.0);
  const auto ladder = make_ladder(64, 2);
  for (auto v : kAll) {
    const auto cand = extract_gradient(c, 0.5, ladder, v);
    CHECK(lp_norm(cand.g, kInf) <= 1e-12);
  }
}

TEST_CASE("sup-point gradient of a cosine", "[pointwise]") {
  const int n = 128;
  const auto f = GridFunction::sample(1, n, [](const Point& x) { return std::cos(2 * kPi * x[0]); });
  const auto ladder = make_ladder(n, 2);
  const auto cand = extract_gradient(f, 1.0, ladder, Variant::SupPoint);
  double mx = 0.0;
  for (int k = ladder.k_min(); k <= ladder.k_max(); ++k)
    mx = std::max(mx, std::ldexp(1.0, k) * kernels::a_function(1, 2 * kPi * std::ldexp(1.0, -k)));
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(cand.g[i] == Approx(std::abs(f[i]) * mx).margin(1e-12));
}

TEST_CASE("defining inequalities and implication chains", "[pointwise]") {
  const auto f = smooth(1, 64, 7);
  const auto ladder = make_ladder(64, 2);
  for (auto v : kAll) {
    const auto cand = extract_gradient(f, 0.8, ladder, v);
    for (double x : cand.g.values()) CHECK(x >= 0.0);
    const auto check = check_defining_inequality(f, cand, ladder);
    CHECK(check.checked > 0);
    CHECK(check.violations == 0);
    const auto rep = verify_implications(f, cand, ladder);
    INFO(rep.to_text());
    CHECK(rep.passed());
    CHECK(!rep.checks.empty());
  }
}

TEST_CASE("a shrunken certificate is rejected", "[pointwise]") {
  const auto f = smooth(1, 64, 7);
  const auto ladder = make_ladder(64, 2);
  auto cand = extract_gradient(f, 0.8, ladder, Variant::SupPoint);
  cand.g = 0.5 * cand.g;
  CHECK(check_defining_inequality(f, cand, ladder).violations > 0);

  std::stringstream ss;
  io::write_annotated(ss, cand.header(), cand.g);
  CHECK_THROWS_AS(import_gradient(ss, f, ladder), NumericalError);

  const auto good = extract_gradient(f, 0.8, ladder, Variant::BallAvg);
  std::stringstream ok;
  io::write_annotated(ok, good.header(), good.g);
  const auto back = import_gradient(ok, f, ladder);
  CHECK(back.variant == Variant::BallAvg);
  CHECK(back.alpha == 0.8);
}

TEST_CASE("Hajlasz pairs", "[pointwise]") {
  const auto c = GridFunction::constant(1, 64, 1.0);
  CHECK(hajlasz_verify(c, GridFunction::constant(1, 64, 0.0), 0.5).violations == 0);

  // Lipschitz with constant 2π·0.1 on the torus metric
  const int n = 128;
  const auto f = GridFunction::sample(1, n, [](const Point& x) { return 0.1 * std::sin(2 * kPi * x[0]); });
  const double L = 2 * kPi * 0.1;
  const auto rep = hajlasz_verify(f, GridFunction::constant(1, n, L / 2), 1.0);
  CHECK(rep.checked == std::size_t(n) * (n - 1) / 2);
  CHECK(rep.violations == 0);
  CHECK(hajlasz_verify(f, GridFunction::constant(1, n, 0.3 * L / 2), 1.0).violations > 0);

  const auto w = weierstrass(256, 0.9, 6);
  const auto g = hajlasz_certificate(w, 0.9);
  CHECK(hajlasz_verify(w, g, 0.9).violations == 0);
  CHECK(std::isfinite(lp_norm(g, 2.0)));
  CHECK_THROWS_AS(hajlasz_verify(GridFunction::constant(1, 1024, 0.0), GridFunction::constant(1, 1024, 0.0), 0.5),
                  DomainError);
}
