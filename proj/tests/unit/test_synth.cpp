#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "ballavg/io.hpp"
#include "ballavg/kernels.hpp"
#include "ballavg/synth.hpp"

using namespace ballavg;
using namespace ballavg::synth;
using Catch::Approx;

namespace {

GeneratorSpec weierstrass(int n, double a0, int terms) {
  GeneratorSpec s;
  s.kind = Kind::Weierstrass;
  s.samples_per_axis = n;
  s.alpha0 = a0;
  s.terms = terms;
  return s;
}

}  // namespace

TEST_CASE("kind names", "[synth]") {
  for (auto k : {Kind::Constant, Kind::SingleMode, Kind::Bandlimited, Kind::Weierstrass, Kind::PolyPatch,
                 Kind::Cusp, Kind::Gaussian})
    CHECK(parse_kind(to_string(k)) == k);
  CHECK(parse_kind("poly_patch") == Kind::PolyPatch);
  CHECK_THROWS_AS(parse_kind("square"), DomainError);
}

TEST_CASE("polynomial patch of degree 0 is constant", "[synth]") {
  GeneratorSpec s;
  s.kind = Kind::PolyPatch;
  s.degree = 0;
  const auto f = generate(s);
  for (double v : f.values()) CHECK(v == 1.0);
}

TEST_CASE("single mode is a sampled cosine", "[synth]") {
  GeneratorSpec s;
  s.kind = Kind::SingleMode;
  s.samples_per_axis = 64;
  s.mode = {3, 0, 0};
  s.phase = 0.7;
  const auto f = generate(s);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == Approx(std::cos(2 * kPi * 3 * i / 64.0 + 0.7)).margin(1e-14));

  const double t = 0.0625;
  const auto b = analytic_ball_average(s, t);
  const double m = std::sin(2 * kPi * 3 * t) / (2 * kPi * 3 * t);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(b[i] == Approx(m * f[i]).margin(1e-14));
}

TEST_CASE("Weierstrass sum", "[synth]") {
  auto s = weierstrass(256, 0.9, 6);
  s.random_phases = false;
  const auto f = generate(s);
  double bound = 0.0;
  for (int j = 1; j <= 6; ++j) bound += std::pow(2.0, -0.9 * j);
  CHECK(f[0] == Approx(bound));
  CHECK(sup_bound(s) == Approx(bound));
  CHECK(lp_norm(f, kInf) <= bound * (1 + 1e-14));
  const auto idx = 37;
  double v = 0.0;
  for (int j = 1; j <= 6; ++j) v += std::pow(2.0, -0.9 * j) * std::cos(2 * kPi * std::ldexp(1.0, j) * idx / 256.0);
  CHECK(f[idx] == Approx(v).margin(1e-14));
}

TEST_CASE("Weierstrass generation is deterministic", "[synth]") {
  const auto s = weierstrass(1024, 0.9, 7);
  std::ostringstream a, b;
  io::write_gf1(a, generate(s));
  io::write_gf1(b, generate(s));
  CHECK(a.str() == b.str());
  auto other = s;
  other.seed = 2;
  CHECK(lp_norm(generate(other) - generate(s), kInf) > 0.1);
  CHECK(seeded_phases(5, 4) == seeded_phases(5, 4));
  for (double p : seeded_phases(5, 100)) {
    CHECK(p >= 0.0);
    CHECK(p < 2 * kPi);
  }
}

TEST_CASE("domain guards", "[synth]") {
  CHECK_THROWS_AS(generate(weierstrass(1024, 2.5, 7)), DomainError);
  CHECK_THROWS_AS(generate(weierstrass(1024, 0.0, 7)), DomainError);
  CHECK_THROWS_AS(generate(weierstrass(256, 0.9, 7)), DomainError);  // 2^7 > 256/4
  CHECK_NOTHROW(generate(weierstrass(256, 0.9, 6)));
  GeneratorSpec b;
  b.kind = Kind::Bandlimited;
  b.samples_per_axis = 32;
  b.max_mode = 9;
  CHECK_THROWS_AS(generate(b), DomainError);
  GeneratorSpec g;
  g.kind = Kind::Gaussian;
  g.width = 0.2;
  CHECK_THROWS_AS(generate(g), DomainError);
}

TEST_CASE("analytic and spectral ball averages agree", "[synth]") {
  std::vector<GeneratorSpec> specs{weierstrass(1024, 1.5, 8), weierstrass(512, 0.4, 7)};
  GeneratorSpec b;
  b.kind = Kind::Bandlimited;
  b.dim = 2;
  b.samples_per_axis = 64;
  b.max_mode = 12;
  specs.push_back(b);
  b.dim = 3;
  b.samples_per_axis = 16;
  b.max_mode = 4;
  specs.push_back(b);
  for (const auto& s : specs) {
    const auto f = generate(s);
    for (double t : {0.25, 0.125}) {
      const auto spectral = kernels::apply_ball_average(f, t);
      CHECK(lp_norm(analytic_ball_average(s, t) - spectral, kInf) <= 1e-10);
    }
  }
  GeneratorSpec c;
  c.kind = Kind::Constant;
  c.value = -2.0;
  CHECK(lp_norm(analytic_ball_average(c, 0.125) - generate(c), kInf) == 0.0);
  GeneratorSpec cusp;
  cusp.kind = Kind::Cusp;
  CHECK_THROWS_AS(analytic_ball_average(cusp, 0.125), DomainError);
}

TEST_CASE("cusp and gaussian shapes", "[synth]") {
  GeneratorSpec s;
  s.kind = Kind::Cusp;
  s.samples_per_axis = 512;
  s.alpha0 = 0.5;
  const auto f = generate(s);
  // mollified |x - 1/2|^{α₀}: minimum at the centre, close to the raw value away from it
  const std::size_t c = 256;
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] >= f[c] - 1e-12);
  CHECK(f[c + 100] == Approx(std::pow(100.0 / 512, 0.5)).epsilon(1e-3));

  GeneratorSpec g;
  g.kind = Kind::Gaussian;
  g.samples_per_axis = 256;
  g.width = 0.05;
  const auto h = generate(g);
  CHECK(h[128] == Approx(1.0));
  CHECK(h[128 + 13] == Approx(std::exp(-0.5 * std::pow(13.0 / 256 / 0.05, 2))).epsilon(1e-12));
}

TEST_CASE("patch interior", "[synth]") {
  GeneratorSpec s;
  s.kind = Kind::PolyPatch;
  s.samples_per_axis = 1024;
  const auto inner = patch_interior(s, 0.0);
  const auto narrower = patch_interior(s, 0.1);
  CHECK(!inner.empty());
  CHECK(narrower.size() < inner.size());
  const auto f = generate(s);
  for (std::size_t i : inner) {
    const double d = i / 1024.0 - 0.5;
    CHECK(f[i] == Approx(d * d).margin(1e-12));
  }
}

TEST_CASE("spec key=value round trip", "[synth]") {
  auto s = weierstrass(512, 1.25, 5);
  s.seed = 99;
  const auto back = GeneratorSpec::from_key_values(s.to_key_values());
  CHECK(back.kind == Kind::Weierstrass);
  CHECK(back.alpha0 == 1.25);
  CHECK(back.terms == 5);
  CHECK(back.seed == 99);
  CHECK(back.samples_per_axis == 512);
  CHECK(s.at_resolution(2048).samples_per_axis == 2048);
}
