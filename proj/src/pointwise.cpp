#include "ballavg/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ballavg/kernels.hpp"

namespace ballavg {

namespace {

constexpr double kRelTol = 1e-12;

struct Rung {
  int k;
  double t;
  GridFunction D;  // |f − B_{Ct} f|
};

std::vector<Rung> difference_rungs(const GridFunction& f, const ScaleLadder& ladder, double C) {
  ladder.require_admissible(f.samples_per_axis(), 1.0);
  ladder.require_admissible(f.samples_per_axis(), C);
  std::vector<Rung> out;
  for (int k : ladder.rungs()) {
    const double t = ScaleLadder::scale(k);
    out.push_back({k, t, kernels::ball_difference(f, C * t).abs()});
  }
  return out;
}

// stat over B(x, t): r = ∞ is the max, r = 1 the mean, otherwise the r-mean.
GridFunction ball_stat(const GridFunction& v, double t, double r) {
  const BallNeighbourhood ball(v.dim(), v.samples_per_axis(), t);
  if (r == kInf) return ball.max(v);
  if (r == 1.0) return ball.mean(v);
  return ball.power_mean(v, r);
}

GridFunction pointwise_max(const GridFunction& a, const GridFunction& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return GridFunction(a.dim(), a.samples_per_axis(), std::move(out));
}

GridFunction power(const GridFunction& v, double q) {
  return v.map([q](double x) { return std::pow(std::abs(x), q); });
}

void compare(InequalityCheck& chk, const GridFunction& lhs, const GridFunction& bound) {
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    ++chk.checked;
    const double l = lhs[i];
    const double b = bound[i];
    if (l > b * (1.0 + kRelTol)) ++chk.violations;
    if (l > 0.0) chk.max_ratio = std::max(chk.max_ratio, b > 0.0 ? l / b : kInf);
  }
}

double node_count_ratio(int dim, int n, double big, double small) {
  return static_cast<double>(ball_count(dim, n, big)) /
         static_cast<double>(ball_count(dim, n, small));
}

GradientCandidate canonical(const GridFunction& f, double alpha, const ScaleLadder& ladder,
                            Variant variant, const GradientConstants& k) {
  const auto rungs = difference_rungs(f, ladder, k.C);
  GridFunction g = GridFunction::constant(f.dim(), f.samples_per_axis(), 0.0);
  for (const auto& r : rungs) {
    const double w = std::pow(r.t, -alpha) / k.Ctilde;
    GridFunction term = r.D;
    switch (variant) {
      case Variant::SupPoint:
        break;
      case Variant::SupNbhd:
        term = BallNeighbourhood(f.dim(), f.samples_per_axis(), k.c * r.t).max(r.D);
        break;
      case Variant::BallSup:
      case Variant::BallAvg:
      case Variant::BallRavg: {
        const double stat_r = variant == Variant::BallSup ? kInf
                              : variant == Variant::BallAvg ? 1.0
                                                            : k.r;
        term = BallNeighbourhood(f.dim(), f.samples_per_axis(), k.c * r.t)
                   .max(ball_stat(r.D, r.t, stat_r));
        break;
      }
      case Variant::PointCtr:
        term = ball_stat(r.D, r.t, k.r);
        break;
      case Variant::Hajlasz:
        break;
    }
    g = pointwise_max(g, term.map([w](double v) { return w * v; }));
  }
  return {std::move(g), variant, alpha, k};
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("requires alpha in (0, 2)");
}

void require_constants(const GradientConstants& k) {
  if (!(k.c > 0.0 && k.C > 0.0 && k.Ctilde > 0.0)) {
    throw DomainError("gradient constants c, C, Ctilde must be positive");
  }
  if (!(k.r >= 1.0)) throw DomainError("inner exponent r must be >= 1");
}

}  // namespace

MaximalField hl_maximal(const GridFunction& f, const ScaleLadder& ladder) {
  return hl_maximal(f, ladder.scales());
}

MaximalField hl_maximal(const GridFunction& f, std::vector<double> radii) {
  const GridFunction a = f.abs();
  double total = 0.0;
  for (double v : a.values()) total += v;
  const double torus_mean = total / static_cast<double>(a.size());
  std::vector<double> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::max(a[i], torus_mean);
  GridFunction out(f.dim(), f.samples_per_axis(), std::move(m));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  for (double r : radii) {
    if (!(r > 0.0)) throw DomainError("maximal function radii must be positive");
    out = pointwise_max(out, BallNeighbourhood(f.dim(), f.samples_per_axis(), r).mean(a));
  }
  return {std::move(out), std::move(radii)};
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::SupPoint: return "sup_point";
    case Variant::SupNbhd: return "sup_nbhd";
    case Variant::BallSup: return "ball_sup";
    case Variant::BallAvg: return "ball_avg";
    case Variant::BallRavg: return "ball_ravg";
    case Variant::PointCtr: return "point_ctr";
    case Variant::Hajlasz: return "hajlasz";
  }
  return "unknown";
}

Variant parse_variant(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) {
    return ch == '-' ? '_' : static_cast<char>(std::tolower(ch));
  });
  for (Variant v : {Variant::SupPoint, Variant::SupNbhd, Variant::BallSup, Variant::BallAvg,
                    Variant::BallRavg, Variant::PointCtr, Variant::Hajlasz}) {
    if (to_string(v) == t) return v;
  }
  throw DomainError("unknown gradient variant '" + text + "'");
}

io::KeyValues GradientCandidate::header() const {
  io::KeyValues kv;
  kv.set("variant", to_string(variant));
  kv.set("alpha", alpha);
  kv.set("c", constants.c);
  kv.set("C", constants.C);
  kv.set("Ctilde", constants.Ctilde);
  kv.set("r", format_exponent(constants.r));
  return kv;
}

GradientCandidate extract_gradient(const GridFunction& f, double alpha, const ScaleLadder& ladder,
                                   Variant variant, const GradientConstants& constants) {
  require_constants(constants);
  if (variant == Variant::Hajlasz) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Hajlasz gradient requires alpha in (0, 1]");
    return {hajlasz_certificate(f, alpha), variant, alpha, constants};
  }
  require_alpha(alpha);
  return canonical(f, alpha, ladder, variant, constants);
}

InequalityCheck check_defining_inequality(const GridFunction& f, const GradientCandidate& cand,
                                          const ScaleLadder& ladder) {
  if (!cand.g.same_geometry(f)) throw DomainError("gradient and function grids differ");
  for (double v : cand.g.values()) {
    if (v < 0.0) throw DomainError("gradient candidate must be nonnegative");
  }
  if (cand.variant == Variant::Hajlasz) return hajlasz_verify(f, cand.g, cand.alpha);
  const auto& k = cand.constants;
  InequalityCheck chk{"defining inequality (" + to_string(cand.variant) + ")"};
  const int dim = f.dim(), n = f.samples_per_axis();
  for (const auto& r : difference_rungs(f, ladder, k.C)) {
    const double s = k.Ctilde * std::pow(r.t, cand.alpha);
    GridFunction lhs = r.D;
    GridFunction rhs = cand.g;
    switch (cand.variant) {
      case Variant::SupPoint:
        break;
      case Variant::SupNbhd:
        rhs = BallNeighbourhood(dim, n, k.c * r.t).min(cand.g);
        break;
      case Variant::BallSup:
        lhs = ball_stat(r.D, r.t, kInf);
        rhs = BallNeighbourhood(dim, n, k.c * r.t).mean(cand.g);
        break;
      case Variant::BallAvg:
        lhs = ball_stat(r.D, r.t, 1.0);
        rhs = BallNeighbourhood(dim, n, k.c * r.t).mean(cand.g);
        break;
      case Variant::BallRavg:
        lhs = ball_stat(r.D, r.t, k.r);
        rhs = BallNeighbourhood(dim, n, k.c * r.t).mean(cand.g);
        break;
      case Variant::PointCtr:
        lhs = ball_stat(r.D, r.t, k.r);
        break;
      case Variant::Hajlasz:
        break;
    }
    compare(chk, lhs, s * rhs);
  }
  return chk;
}

std::size_t ImplicationReport::total_violations() const {
  std::size_t s = 0;
  for (const auto& c : checks) s += c.violations;
  return s;
}

std::string ImplicationReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed() ? "ok   " : "FAIL ") << c.name << ": " << c.violations << "/" << c.checked
       << " violations, max ratio " << c.max_ratio << '\n';
  }
  return os.str();
}

ImplicationReport verify_implications(const GridFunction& f, const GradientCandidate& cand,
                                      const ScaleLadder& ladder, double q) {
  if (!(q >= 1.0 && q < kInf)) throw DomainError("implication exponent q must lie in [1, inf)");
  ImplicationReport report;
  report.checks.push_back(check_defining_inequality(f, cand, ladder));
  const int dim = f.dim(), n = f.samples_per_axis();
  const auto& k = cand.constants;
  const GridFunction& g = cand.g;
  const double alpha = cand.alpha;

  if (cand.variant == Variant::Hajlasz) {
    // Pair bound ⇒ avg_{B(x,t)} |f(x) − f(y)| ≤ t^α (g(x) + avg g) ≤ 2 t^α Mg(x).
    InequalityCheck mean_chk{"pair bound => first-difference ball mean"};
    InequalityCheck max_chk{"first-difference ball mean => maximal majorant"};
    const GridFunction Mg = hl_maximal(g, ladder).values;
    for (int kk : ladder.rungs()) {
      const double t = ScaleLadder::scale(kk);
      const BallNeighbourhood ball(dim, n, t);
      std::vector<double> lhs(f.size());
      for (std::size_t x = 0; x < f.size(); ++x) {
        double s = 0.0;
        ball.for_each(x, [&](std::size_t y) { s += std::abs(f[x] - f[y]); });
        lhs[x] = s / static_cast<double>(ball.count());
      }
      const GridFunction L(dim, n, std::move(lhs));
      const double ta = std::pow(t, alpha);
      compare(mean_chk, L, ta * (g + ball.mean(g)));
      compare(max_chk, L, (2.0 * ta) * Mg);
    }
    report.checks.push_back(mean_chk);
    report.checks.push_back(max_chk);
    return report;
  }

  const auto rungs = difference_rungs(f, ladder, k.C);
  const GridFunction gq = power(g, q);
  const double r_mid = (k.r == kInf || k.r == 1.0) ? 2.0 : k.r;

  if (cand.variant == Variant::SupPoint) {
    InequalityCheck chk{"pointwise => maximal majorant"};
    const GridFunction Mg = hl_maximal(g, ladder).values;
    for (const auto& r : rungs) compare(chk, r.D, (k.Ctilde * std::pow(r.t, alpha)) * Mg);
    report.checks.push_back(chk);
    return report;
  }

  if (cand.variant == Variant::PointCtr) {
    // Power-mean chain at fixed centre: sup ⇒ r-mean ⇒ mean.
    InequalityCheck to_r{"centred sup => centred r-mean"};
    InequalityCheck to_mean{"centred r-mean => centred mean"};
    for (const auto& r : rungs) {
      const GridFunction bound = (k.Ctilde * std::pow(r.t, alpha)) * g;
      const double start = k.r;
      if (start == kInf) compare(to_r, ball_stat(r.D, r.t, r_mid), bound);
      compare(to_mean, ball_stat(r.D, r.t, 1.0), bound);
    }
    if (k.r == kInf) report.checks.push_back(to_r);
    report.checks.push_back(to_mean);
    return report;
  }

  // Ball radius (relative to t) and per-rung constant of the averaged-g form.
  double radius_factor = k.c;
  std::vector<double> K(rungs.size(), k.Ctilde);

  if (cand.variant == Variant::SupNbhd) {
    InequalityCheck inf_avg{"neighbourhood => ball mean of g"};
    InequalityCheck holder{"ball mean of g => ball q-mean of g"};
    InequalityCheck maximal{"ball q-mean of g => maximal majorant [M(g^q)]^(1/q)"};
    InequalityCheck dilated{"neighbourhood => ball sup with (1+c)-dilated mean"};
    std::vector<double> radii;
    for (const auto& r : rungs) radii.push_back(k.c * r.t);
    const GridFunction Mgq = hl_maximal(gq, radii).values.map(
        [q](double v) { return std::pow(v, 1.0 / q); });
    for (std::size_t i = 0; i < rungs.size(); ++i) {
      const auto& r = rungs[i];
      const double s = k.Ctilde * std::pow(r.t, alpha);
      const BallNeighbourhood ball(dim, n, k.c * r.t);
      compare(inf_avg, r.D, s * ball.mean(g));
      compare(holder, r.D, s * ball.mean(gq).map([q](double v) { return std::pow(v, 1.0 / q); }));
      compare(maximal, r.D, s * Mgq);
      // y ∈ B(x,t), z ∈ B(y,ct) ⇒ z ∈ B(x,(1+c)t); the discrete means differ
      // by the node-count ratio.
      K[i] = k.Ctilde * node_count_ratio(dim, n, (1.0 + k.c) * r.t, k.c * r.t);
      compare(dilated, ball_stat(r.D, r.t, kInf),
              (K[i] * std::pow(r.t, alpha)) *
                  BallNeighbourhood(dim, n, (1.0 + k.c) * r.t).mean(g));
    }
    for (auto* c : {&inf_avg, &holder, &maximal, &dilated}) report.checks.push_back(*c);
    radius_factor = 1.0 + k.c;
  }

  // Ball forms: sup ⇒ r-mean ⇒ mean on the left, mean of g ⇒ q-mean of g ⇒
  // maximal majorants on the right.
  const bool from_sup = cand.variant == Variant::SupNbhd || cand.variant == Variant::BallSup;
  const bool from_ravg = from_sup || cand.variant == Variant::BallRavg;
  const double lhs_r = cand.variant == Variant::BallRavg ? k.r : r_mid;
  InequalityCheck sup_r{"ball sup => ball r-mean"};
  InequalityCheck r_mean{"ball r-mean => ball mean"};
  InequalityCheck sup_q{"ball sup, mean of g => q-mean of g"};
  InequalityCheck r_q{"ball r-mean, q-mean of g"};
  InequalityCheck mean_q{"ball mean, q-mean of g"};
  InequalityCheck mean_max{"ball mean => maximal majorant [M(g^q)]^(1/q)"};
  InequalityCheck ctr_sup{"ball sup => centred sup with Mg"};
  InequalityCheck ctr_r{"centred sup => centred r-mean with Mg"};
  InequalityCheck ctr_mean{"centred r-mean => centred mean with Mg"};
  std::vector<double> radii;
  for (const auto& r : rungs) radii.push_back(radius_factor * r.t);
  const GridFunction Mgq =
      hl_maximal(gq, radii).values.map([q](double v) { return std::pow(v, 1.0 / q); });
  const GridFunction Mg = hl_maximal(g, radii).values;
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    const auto& r = rungs[i];
    const double s = K[i] * std::pow(r.t, alpha);
    const BallNeighbourhood ball(dim, n, radius_factor * r.t);
    const GridFunction mean_g = s * ball.mean(g);
    const GridFunction qmean_g = s * ball.mean(gq).map([q](double v) { return std::pow(v, 1.0 / q); });
    const GridFunction sup_d = ball_stat(r.D, r.t, kInf);
    const GridFunction r_d = ball_stat(r.D, r.t, lhs_r);
    const GridFunction mean_d = ball_stat(r.D, r.t, 1.0);
    if (from_sup) {
      compare(sup_r, r_d, mean_g);
      compare(sup_q, sup_d, qmean_g);
      compare(ctr_sup, sup_d, s * Mg);
      compare(ctr_r, r_d, s * Mg);
    }
    if (from_ravg) {
      compare(r_mean, mean_d, mean_g);
      compare(r_q, r_d, qmean_g);
    }
    compare(mean_q, mean_d, qmean_g);
    compare(mean_max, mean_d, s * Mgq);
    compare(ctr_mean, mean_d, s * Mg);
  }
  if (from_sup) {
    for (auto* c : {&sup_r, &sup_q, &ctr_sup, &ctr_r}) report.checks.push_back(*c);
  }
  if (from_ravg) {
    for (auto* c : {&r_mean, &r_q}) report.checks.push_back(*c);
  }
  for (auto* c : {&mean_q, &mean_max, &ctr_mean}) report.checks.push_back(*c);
  return report;
}

namespace {

void require_pair_size(const GridFunction& f) {
  const int n = f.samples_per_axis();
  const int limit = f.dim() == 1 ? 512 : f.dim() == 2 ? 64 : 16;
  if (n > limit) {
    throw DomainError("all-pairs check limited to N <= " + std::to_string(limit) + " in " +
                      std::to_string(f.dim()) + "D");
  }
}

}  // namespace

InequalityCheck hajlasz_verify(const GridFunction& f, const GridFunction& g, double alpha) {
  if (!g.same_geometry(f)) throw DomainError("gradient and function grids differ");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Hajlasz check requires alpha in (0, 1]");
  require_pair_size(f);
  InequalityCheck chk{"pairwise Hajlasz inequality"};
  const int dim = f.dim(), n = f.samples_per_axis();
  for (std::size_t x = 0; x < f.size(); ++x) {
    const Index ix = f.multi_index(x);
    for (std::size_t y = x + 1; y < f.size(); ++y) {
      const Index iy = f.multi_index(y);
      const Index off{iy[0] - ix[0], iy[1] - ix[1], iy[2] - ix[2]};
      const double bound = std::pow(torus_distance(off, dim, n), alpha) * (g[x] + g[y]);
      const double l = std::abs(f[x] - f[y]);
      ++chk.checked;
      if (l > bound * (1.0 + kRelTol)) ++chk.violations;
      if (l > 0.0) chk.max_ratio = std::max(chk.max_ratio, bound > 0.0 ? l / bound : kInf);
    }
  }
  return chk;
}

GridFunction hajlasz_certificate(const GridFunction& f, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Hajlasz certificate requires alpha in (0, 1]");
  require_pair_size(f);
  const int dim = f.dim(), n = f.samples_per_axis();
  std::vector<double> g(f.size(), 0.0);
  for (std::size_t x = 0; x < f.size(); ++x) {
    const Index ix = f.multi_index(x);
    for (std::size_t y = x + 1; y < f.size(); ++y) {
      const Index iy = f.multi_index(y);
      const Index off{iy[0] - ix[0], iy[1] - ix[1], iy[2] - ix[2]};
      const double v = 0.5 * std::abs(f[x] - f[y]) / std::pow(torus_distance(off, dim, n), alpha);
      g[x] = std::max(g[x], v);
      g[y] = std::max(g[y], v);
    }
  }
  return GridFunction(dim, n, std::move(g));
}

GradientCandidate import_gradient(std::istream& is, const GridFunction& f,
                                  const ScaleLadder& ladder) {
  auto [kv, g] = io::read_annotated(is);
  GradientConstants k;
  k.c = kv.number_or("c", 1.0);
  k.C = kv.number_or("C", 1.0);
  k.Ctilde = kv.number_or("Ctilde", 1.0);
  k.r = kv.contains("r") ? parse_exponent(kv.get("r")) : 2.0;
  require_constants(k);
  GradientCandidate cand{std::move(g), parse_variant(kv.get("variant")), kv.number("alpha"), k};
  const auto chk = check_defining_inequality(f, cand, ladder);
  if (!chk.passed()) {
    throw NumericalError("imported gradient violates its defining inequality at " +
                         std::to_string(chk.violations) + " of " + std::to_string(chk.checked) +
                         " (node, rung) pairs");
  }
  return cand;
}

}  // namespace ballavg
