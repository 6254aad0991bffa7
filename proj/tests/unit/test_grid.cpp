#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "ballavg/grid.hpp"
#include "ballavg/io.hpp"

using namespace ballavg;
using Catch::Approx;

namespace {

GridFunction random_function(int dim, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::size_t size = 1;
  for (int a = 0; a < dim; ++a) size *= static_cast<std::size_t>(n);
  std::vector<double> v(size);
  for (auto& x : v) x = g(rng);
  return GridFunction(dim, n, std::move(v));
}

GridFunction cosine(int n) {
  return GridFunction::sample(1, n, [](const Point& x) { return std::cos(2 * kPi * x[0]); });
}

}  // namespace

TEST_CASE("geometry is validated", "[grid]") {
  CHECK_THROWS_AS(GridFunction::constant(4, 16, 1.0), DomainError);
  CHECK_THROWS_AS(GridFunction::constant(1, 24, 1.0), DomainError);
  CHECK_THROWS_AS(GridFunction::constant(1, 8, 1.0), DomainError);
  CHECK_THROWS_AS(GridFunction(1, 16, std::vector<double>(15, 0.0)), DomainError);
  std::vector<double> bad(16, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS(GridFunction(1, 16, bad));
}

TEST_CASE("flat and multi indices agree and wrap", "[grid]") {
  const auto f = GridFunction::constant(3, 16, 0.0);
  for (std::size_t i : {0u, 17u, 300u, 4095u}) CHECK(f.flat_index(f.multi_index(i)) == i);
  CHECK(f.flat_index({-1, 0, 0}) == f.flat_index({15, 0, 0}));
  CHECK(f.node(1)[2] == Approx(1.0 / 16));
}

TEST_CASE("forward transform of simple functions", "[grid]") {
  const int n = 32;
  const auto c = forward_transform(GridFunction::constant(1, n, 2.5));
  CHECK(c[0].real() == Approx(2.5 * n));
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(std::abs(c[i]) < 1e-12);

  const auto s = forward_transform(cosine(n));
  CHECK(s[s.position({1, 0, 0})].real() == Approx(n / 2.0));
  CHECK(s[s.position({-1, 0, 0})].real() == Approx(n / 2.0));
  double rest = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto k = s.frequency(i)[0];
    if (k != 1 && k != -1) rest = std::max(rest, std::abs(s[i]));
  }
  CHECK(rest < 1e-12);
}

TEST_CASE("round trip and Parseval", "[grid]") {
  for (int dim : {1, 2, 3}) {
    const int n = dim == 3 ? 16 : 64;
    const auto f = random_function(dim, n, 11 + dim);
    const auto back = inverse_transform_real(forward_transform(f));
    const double scale = lp_norm(f, kInf);
    CHECK(lp_norm(back - f, kInf) <= 1e-12 * scale);

    const auto s = forward_transform(f);
    double sum = 0.0;
    for (auto z : s.coefficients()) sum += std::norm(z);
    const double total = static_cast<double>(f.size());
    const double l2 = lp_norm(f, 2.0);
    CHECK(l2 * l2 == Approx(sum / (total * total)).epsilon(1e-10));
  }
}

TEST_CASE("transform is linear", "[grid]") {
  const auto a = random_function(2, 16, 1);
  const auto b = random_function(2, 16, 2);
  const auto sa = forward_transform(a), sb = forward_transform(b);
  const auto sum = forward_transform(a + 3.0 * b);
  double err = 0.0;
  for (std::size_t i = 0; i < sum.size(); ++i) err = std::max(err, std::abs(sum[i] - (sa[i] + 3.0 * sb[i])));
  CHECK(err < 1e-11);
}

TEST_CASE("lp norms", "[grid]") {
  CHECK(lp_norm(GridFunction::constant(2, 16, 1.0), 3.0) == Approx(1.0));
  CHECK(lp_norm(cosine(256), 2.0) == Approx(1.0 / std::sqrt(2.0)).margin(1e-6));
  const double dx = 1.0 / 256;
  CHECK(std::abs(lp_norm(cosine(256), kInf) - 1.0) <= dx * dx);

  const auto f = random_function(1, 64, 5).map([](double v) { return std::tanh(v); });
  double prev = 0.0;
  for (double p : {1.0, 1.5, 2.0, 4.0, 8.0}) {
    const double v = lp_norm(f, p);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(lp_norm(f, kInf) >= prev);
}

TEST_CASE("dyadic ladders", "[grid]") {
  const auto l = make_ladder(64, 2);
  CHECK(l.k_min() == 2);
  CHECK(l.k_max() == 5);
  const std::vector<double> want{0.25, 0.125, 0.0625, 0.03125};
  CHECK(l.scales() == want);
  CHECK(make_ladder(16, 2).scales() == std::vector<double>{0.25, 0.125});
  CHECK_THROWS_AS(make_ladder(8, 3), DomainError);
  CHECK_THROWS_AS(make_ladder(64, 1), DomainError);
  CHECK(ScaleLadder::weight() == Approx(std::log(2.0)));
  CHECK_FALSE(ScaleLadder(2, 6).resolvable_on(64));
}

TEST_CASE("space parameters", "[grid]") {
  SpaceParams p;
  CHECK_NOTHROW(p.validate());
  p.p = 1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.q = kInf;
  CHECK_NOTHROW(p.validate());
  p.alpha = 2.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.ell = 2;
  CHECK_NOTHROW(p.validate());
  CHECK(parse_exponent("inf") == kInf);
  CHECK(parse_exponent("infinity") == kInf);
  CHECK(parse_exponent("2.5") == 2.5);
  CHECK(format_exponent(kInf) == "inf");
  CHECK_THROWS_AS(parse_exponent("x"), DomainError);
}

TEST_CASE("open discrete balls", "[grid]") {
  CHECK(ball_count(1, 64, 2.0 / 64) == 3);
  CHECK(ball_count(2, 64, 2.0 / 64) == 9);
  CHECK(ball_count(1, 64, 2.5 / 64) == 5);
  // brute-force count on the 2D torus
  const int n = 32;
  const double r = 5.0 / n;
  std::size_t brute = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int a = std::min(i, n - i), b = std::min(j, n - j);
      if (std::hypot(a, b) / n < r) ++brute;
    }
  CHECK(ball_count(2, n, r) == brute);
  CHECK(torus_distance({31, 0, 0}, 1, 32) == Approx(1.0 / 32));
}

TEST_CASE("ball neighbourhood statistics", "[grid]") {
  const auto f = random_function(1, 32, 3);
  const BallNeighbourhood nb(1, 32, 2.0 / 32);
  const auto mean = nb.mean(f);
  const auto mx = nb.max(f), mn = nb.min(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = f[(i + 31) % 32], b = f[i], c = f[(i + 1) % 32];
    CHECK(mean[i] == Approx((a + b + c) / 3.0));
    CHECK(mx[i] == std::max({a, b, c}));
    CHECK(mn[i] == std::min({a, b, c}));
  }
  const auto p1 = nb.power_mean(f, 1.0), p2 = nb.power_mean(f, 2.0), pinf = nb.power_mean(f, kInf);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(p1[i] <= p2[i] * (1 + 1e-14));
    CHECK(p2[i] <= pinf[i] * (1 + 1e-14));
  }
}

TEST_CASE("translation by whole samples", "[grid]") {
  const auto f = random_function(2, 16, 9);
  const auto g = translate(f, {3, -2, 0});
  CHECK(g[g.flat_index({3, -2, 0})] == f[0]);
  CHECK(lp_norm(translate(g, {-3, 2, 0}) - f, kInf) == 0.0);
}

TEST_CASE("GF1 round trip", "[io]") {
  const auto f = random_function(2, 16, 4);
  std::stringstream ss;
  io::write_gf1(ss, f);
  const auto first = ss.str();
  CHECK(first.rfind("GF1 dim=2 N=16\n", 0) == 0);
  const auto g = io::read_gf1(ss);
  CHECK(lp_norm(g - f, kInf) == 0.0);

  std::stringstream bad("GF1 dim=1 N=16\n1 2 3\n");
  CHECK_THROWS(io::read_gf1(bad));
  std::stringstream wrong("GF2 dim=1 N=16\n");
  CHECK_THROWS(io::read_gf1(wrong));
}

TEST_CASE("annotated GF1 and key=value blocks", "[io]") {
  io::KeyValues kv;
  kv.set("variant", "sup_point");
  kv.set("alpha", 0.9);
  kv.set("N", 16);
  const auto f = GridFunction::constant(1, 16, 0.5);
  std::stringstream ss;
  io::write_annotated(ss, kv, f);
  const auto [h, g] = io::read_annotated(ss);
  CHECK(h.get("variant") == "sup_point");
  CHECK(h.number("alpha") == 0.9);
  CHECK(lp_norm(g - f, kInf) == 0.0);
  CHECK(io::parse_number(io::format_number(0.1 + 0.2)) == 0.1 + 0.2);
}
