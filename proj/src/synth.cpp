#include "ballavg/synth.hpp"

#include <cmath>
#include <random>

#include "ballavg/kernels.hpp"

namespace ballavg::synth {

namespace {

double wrap(double d) {
  d -= std::floor(d + 0.5);
  return d;
}

// Smooth compactly supported bump on (−1, 1).
double bump(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - z * z));
}

// ∫_a^b fn with geometric panels refined towards `a`, where fn may carry an
// algebraic singularity.
double integrate_graded(const std::function<double(double)>& fn, double a, double b) {
  constexpr int kLevels = 10;
  double total = 0.0;
  double hi = b;
  for (int level = 0; level < kLevels; ++level) {
    const double lo = (level == kLevels - 1) ? a : a + (hi - a) * 0.25;
    total += kernels::integrate(fn, lo, hi, 1);
    hi = lo;
  }
  return total;
}

double poly_window(const GeneratorSpec& s, double d) {
  return 0.5 * (std::erf((d + s.half_width) / s.edge) - std::erf((d - s.half_width) / s.edge));
}

double eval_modes(const std::vector<Mode>& ms, const Point& x, int dim) {
  double v = 0.0;
  for (const auto& m : ms) {
    double arg = 0.0;
    for (int a = 0; a < dim; ++a) arg += m.k[a] * x[a];
    v += m.amplitude * std::cos(2.0 * kPi * arg + m.phase);
  }
  return v;
}

double mode_norm(const Index& k, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += static_cast<double>(k[a]) * k[a];
  return std::sqrt(s);
}

}  // namespace

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::Constant: return "constant";
    case Kind::SingleMode: return "mode";
    case Kind::Bandlimited: return "bandlimited";
    case Kind::Weierstrass: return "weierstrass";
    case Kind::PolyPatch: return "poly";
    case Kind::Cusp: return "cusp";
    case Kind::Gaussian: return "gaussian";
  }
  return "unknown";
}

Kind parse_kind(const std::string& text) {
  for (Kind k : {Kind::Constant, Kind::SingleMode, Kind::Bandlimited, Kind::Weierstrass,
                 Kind::PolyPatch, Kind::Cusp, Kind::Gaussian}) {
    if (to_string(k) == text) return k;
  }
  if (text == "poly_patch") return Kind::PolyPatch;
  if (text == "single_mode") return Kind::SingleMode;
  throw DomainError("unknown generator kind '" + text + "'");
}

bool is_trigonometric(Kind kind) {
  return kind == Kind::Constant || kind == Kind::SingleMode || kind == Kind::Bandlimited ||
         kind == Kind::Weierstrass;
}

std::vector<double> seeded_phases(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(count);
  for (auto& v : out) {
    // 53 random bits, so the stream is identical across standard libraries.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = 2.0 * kPi * u;
  }
  return out;
}

void GeneratorSpec::validate() const {
  check_geometry(dim, samples_per_axis);
  const int quarter = samples_per_axis / 4;
  switch (kind) {
    case Kind::Constant:
      if (!std::isfinite(value)) throw DomainError("constant value must be finite");
      break;
    case Kind::SingleMode: {
      for (int a = 0; a < dim; ++a) {
        if (std::abs(mode[a]) > quarter) {
          throw DomainError("mode index exceeds N/4 (aliasing guard)");
        }
      }
      break;
    }
    case Kind::Bandlimited:
      if (max_mode < 1) throw DomainError("bandlimited needs max_mode >= 1");
      if (max_mode > quarter) throw DomainError("max_mode exceeds N/4 (aliasing guard)");
      break;
    case Kind::Weierstrass:
      if (!(alpha0 > 0.0 && alpha0 < 2.0)) {
        throw DomainError("weierstrass requires alpha0 in (0, 2)");
      }
      if (terms < 1) throw DomainError("weierstrass needs at least one term");
      if (terms > 30 || (1L << terms) > quarter) {
        throw DomainError("weierstrass highest mode 2^K exceeds N/4 (aliasing guard)");
      }
      break;
    case Kind::PolyPatch:
      if (degree < 0) throw DomainError("poly degree must be >= 0");
      if (!(half_width > 0.0 && edge > 0.0 && half_width + 8.0 * edge < 0.5)) {
        throw DomainError("poly window must fit inside one period (half_width + 8*edge < 1/2)");
      }
      break;
    case Kind::Cusp:
      if (!(alpha0 > 0.0 && alpha0 < 2.0)) throw DomainError("cusp requires alpha0 in (0, 2)");
      break;
    case Kind::Gaussian:
      if (!(width > 0.0 && width < 0.1)) throw DomainError("gaussian width must lie in (0, 0.1)");
      break;
  }
}

io::KeyValues GeneratorSpec::to_key_values() const {
  io::KeyValues kv;
  kv.set("kind", to_string(kind));
  kv.set("dim", dim);
  kv.set("N", samples_per_axis);
  switch (kind) {
    case Kind::Constant:
      kv.set("value", value);
      break;
    case Kind::SingleMode:
      kv.set("k0", mode[0]);
      if (dim >= 2) kv.set("k1", mode[1]);
      if (dim == 3) kv.set("k2", mode[2]);
      kv.set("amplitude", amplitude);
      kv.set("phase", phase);
      break;
    case Kind::Bandlimited:
      kv.set("max_mode", max_mode);
      kv.set("decay", decay);
      kv.set("seed", static_cast<long>(seed));
      break;
    case Kind::Weierstrass:
      kv.set("alpha0", alpha0);
      kv.set("terms", terms);
      kv.set("seed", static_cast<long>(seed));
      kv.set("phases", random_phases ? "seeded" : "zero");
      break;
    case Kind::PolyPatch:
      kv.set("degree", degree);
      kv.set("center", center);
      kv.set("half_width", half_width);
      kv.set("edge", edge);
      break;
    case Kind::Cusp:
      kv.set("alpha0", alpha0);
      kv.set("center", center);
      break;
    case Kind::Gaussian:
      kv.set("center", center);
      kv.set("width", width);
      break;
  }
  return kv;
}

GeneratorSpec GeneratorSpec::from_key_values(const io::KeyValues& kv) {
  GeneratorSpec s;
  s.kind = parse_kind(kv.get("kind"));
  s.dim = static_cast<int>(kv.number_or("dim", 1));
  s.samples_per_axis = static_cast<int>(kv.number_or("N", 256));
  s.value = kv.number_or("value", s.value);
  s.mode = {static_cast<int>(kv.number_or("k0", s.mode[0])),
            static_cast<int>(kv.number_or("k1", 0)), static_cast<int>(kv.number_or("k2", 0))};
  s.amplitude = kv.number_or("amplitude", s.amplitude);
  s.phase = kv.number_or("phase", s.phase);
  s.max_mode = static_cast<int>(kv.number_or("max_mode", s.max_mode));
  s.decay = kv.number_or("decay", s.decay);
  s.alpha0 = kv.number_or("alpha0", s.alpha0);
  s.terms = static_cast<int>(kv.number_or("terms", s.terms));
  s.seed = static_cast<std::uint64_t>(kv.number_or("seed", static_cast<double>(s.seed)));
  s.random_phases = kv.get_or("phases", "seeded") != "zero";
  s.degree = static_cast<int>(kv.number_or("degree", s.degree));
  s.center = kv.number_or("center", s.center);
  s.half_width = kv.number_or("half_width", s.half_width);
  s.edge = kv.number_or("edge", s.edge);
  s.width = kv.number_or("width", s.width);
  s.validate();
  return s;
}

GeneratorSpec GeneratorSpec::at_resolution(int n) const {
  GeneratorSpec s = *this;
  s.samples_per_axis = n;
  s.validate();
  return s;
}

std::vector<Mode> modes(const GeneratorSpec& spec) {
  spec.validate();
  std::vector<Mode> out;
  switch (spec.kind) {
    case Kind::Constant:
      out.push_back({{0, 0, 0}, spec.value, 0.0});
      break;
    case Kind::SingleMode:
      out.push_back({spec.mode, spec.amplitude, spec.phase});
      break;
    case Kind::Weierstrass: {
      const auto phases = spec.random_phases ? seeded_phases(spec.seed, spec.terms)
                                             : std::vector<double>(spec.terms, 0.0);
      for (int j = 1; j <= spec.terms; ++j) {
        out.push_back({{1 << j, 0, 0}, std::pow(2.0, -j * spec.alpha0), phases[j - 1]});
      }
      break;
    }
    case Kind::Bandlimited: {
      std::mt19937_64 rng(spec.seed);
      auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
      const int m = spec.max_mode;
      const int hi1 = spec.dim >= 2 ? m : 0;
      const int hi2 = spec.dim == 3 ? m : 0;
      for (int a = 0; a <= m; ++a) {
        for (int b = 0; b <= hi1; ++b) {
          for (int c = 0; c <= hi2; ++c) {
            if (a == 0 && b == 0 && c == 0) continue;
            const Index k{a, b, c};
            const double amp =
                std::pow(1.0 + mode_norm(k, spec.dim), -spec.decay) * (0.5 + 0.5 * uniform());
            out.push_back({k, amp, 2.0 * kPi * uniform()});
          }
        }
      }
      break;
    }
    default:
      throw DomainError("generator kind '" + to_string(spec.kind) + "' has no cosine expansion");
  }
  return out;
}

double sup_bound(const GeneratorSpec& spec) {
  double s = 0.0;
  for (const auto& m : modes(spec)) s += std::abs(m.amplitude);
  return s;
}

GridFunction generate(const GeneratorSpec& spec) {
  spec.validate();
  const int dim = spec.dim;
  const int n = spec.samples_per_axis;
  if (is_trigonometric(spec.kind)) {
    if (spec.kind == Kind::Constant) return GridFunction::constant(dim, n, spec.value);
    const auto ms = modes(spec);
    return GridFunction::sample(dim, n, [&](const Point& x) { return eval_modes(ms, x, dim); });
  }
  switch (spec.kind) {
    case Kind::PolyPatch: {
      if (spec.degree == 0) return GridFunction::constant(dim, n, 1.0);
      const double outside = std::pow(spec.half_width, spec.degree);
      return GridFunction::sample(dim, n, [&](const Point& x) {
        const double d = wrap(x[0] - spec.center);
        const double psi = poly_window(spec, d);
        return psi * std::pow(d, spec.degree) + (1.0 - psi) * outside;
      });
    }
    case Kind::Cusp: {
      // |x_1 − c|^{α₀} mollified by a C^∞ bump of half-width 4Δx.
      const double w = 4.0 / n;
      const double mass = kernels::integrate([](double z) { return bump(z); }, -1.0, 1.0, 4);
      std::vector<double> line(n);
      for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / n;
        auto integrand = [&](double y) {
          return std::pow(std::abs(wrap(x - y - spec.center)), spec.alpha0) * bump(y / w);
        };
        const double kink = wrap(x - spec.center);  // integrand singular at y = kink
        double total = 0.0;
        if (std::abs(kink) < w) {
          total += integrate_graded(integrand, kink, w);
          total += integrate_graded(integrand, kink, -w) * -1.0;
        } else {
          total = kernels::integrate(integrand, -w, w, 4);
        }
        line[i] = total / (w * mass);
      }
      return GridFunction::sample(dim, n, [&](const Point& x) {
        const int i = static_cast<int>(std::lround(x[0] * n)) % n;
        return line[i];
      });
    }
    case Kind::Gaussian:
      return GridFunction::sample(dim, n, [&](const Point& x) {
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) {
          const double d = wrap(x[a] - spec.center);
          r2 += d * d;
        }
        return std::exp(-0.5 * r2 / (spec.width * spec.width));
      });
    default:
      break;
  }
  throw DomainError("unsupported generator kind");
}

GridFunction analytic_ball_average(const GeneratorSpec& spec, double t) {
  if (!is_trigonometric(spec.kind)) {
    throw DomainError("analytic ball average needs a trigonometric generator, got '" +
                      to_string(spec.kind) + "'");
  }
  const int dim = spec.dim;
  const int n = spec.samples_per_axis;
  if (!(t >= 2.0 / n * (1.0 - 1e-12) && t <= 0.25 * (1.0 + 1e-12))) {
    throw DomainError("scale outside [2/N, 1/4]");
  }
  auto ms = modes(spec);
  for (auto& m : ms) m.amplitude *= kernels::ball_multiplier(dim, 2.0 * kPi * t * mode_norm(m.k, dim));
  if (spec.kind == Kind::Constant) return GridFunction::constant(dim, n, spec.value);
  return GridFunction::sample(dim, n, [&](const Point& x) { return eval_modes(ms, x, dim); });
}

std::vector<std::size_t> patch_interior(const GeneratorSpec& spec, double margin) {
  if (spec.kind != Kind::PolyPatch) throw DomainError("patch_interior needs a poly patch");
  spec.validate();
  // erfc(z) < 1e-17 for z >= 6, so the window equals 1 to rounding there.
  const double flat = spec.half_width - 6.0 * spec.edge - margin;
  std::vector<std::size_t> out;
  const GridFunction probe = GridFunction::constant(spec.dim, spec.samples_per_axis, 0.0);
  for (std::size_t i = 0; i < probe.size(); ++i) {
    if (std::abs(wrap(probe.node(i)[0] - spec.center)) <= flat) out.push_back(i);
  }
  return out;
}

}  // namespace ballavg::synth
