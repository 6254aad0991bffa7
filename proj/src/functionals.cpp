#include "ballavg/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ballavg/pointwise.hpp"

namespace ballavg {

namespace {

// Σ_o weight[o]·values[x + o] at every node x (periodic).
std::vector<double> stencil_sum(std::span<const double> values, int dim, int n,
                                const std::vector<Index>& offsets,
                                const std::vector<double>& weights) {
  const int mask = n - 1;
  const auto nn = static_cast<std::size_t>(n);
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t x = 0; x < values.size(); ++x) {
    int i0 = 0, i1 = 0, i2 = 0;
    if (dim == 1) {
      i0 = static_cast<int>(x);
    } else if (dim == 2) {
      i0 = static_cast<int>(x / nn);
      i1 = static_cast<int>(x % nn);
    } else {
      i0 = static_cast<int>(x / (nn * nn));
      i1 = static_cast<int>((x / nn) % nn);
      i2 = static_cast<int>(x % nn);
    }
    double s = 0.0;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const auto& o = offsets[j];
      std::size_t y = static_cast<std::size_t>((i0 + o[0]) & mask);
      if (dim >= 2) y = y * nn + static_cast<std::size_t>((i1 + o[1]) & mask);
      if (dim == 3) y = y * nn + static_cast<std::size_t>((i2 + o[2]) & mask);
      s += weights[j] * values[y];
    }
    out[x] = s;
  }
  return out;
}

double gstar_cutoff_radius(int dim, double t, double lambda) {
  return t * (std::pow(1e6, 1.0 / (lambda * dim)) - 1.0);
}

void gstar_stencil(int dim, int n, double t, double lambda, std::vector<Index>& offsets,
                   std::vector<double>& weights) {
  offsets = ball_offsets(dim, n, gstar_cutoff_radius(dim, t, lambda));
  weights.resize(offsets.size());
  const double scale = std::pow(1.0 / (n * t), dim);  // Δx^n / t^n
  for (std::size_t j = 0; j < offsets.size(); ++j) {
    const double d = torus_distance(offsets[j], dim, n);
    weights[j] = std::pow(t / (t + d), lambda * dim) * scale;
  }
}

// Accumulates per-rung contributions c_k(x) ≥ 0 into (ln2 Σ c_k^q)^{1/q}, or
// sup_k c_k when q = ∞. Contributions are passed already raised to q for
// finite q.
class RungAccumulator {
 public:
  RungAccumulator(std::size_t size, double q) : q_(q), acc_(size, 0.0) {}

  void add_power(std::span<const double> cq) {
    for (std::size_t i = 0; i < acc_.size(); ++i) acc_[i] += cq[i];
  }
  void add_sup(std::span<const double> c) {
    for (std::size_t i = 0; i < acc_.size(); ++i) acc_[i] = std::max(acc_[i], c[i]);
  }
  GridFunction finish(int dim, int n) {
    if (q_ != kInf) {
      for (double& v : acc_) v = std::pow(kLn2 * v, 1.0 / q_);
    }
    return GridFunction(dim, n, std::move(acc_));
  }

 private:
  double q_;
  std::vector<double> acc_;
};

std::vector<double> powered(std::span<const double> v, double q) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::pow(std::abs(v[i]), q);
  return out;
}

void require_q(double q) {
  if (!(q > 1.0)) throw DomainError("requires q in (1, inf]");
}

NormReport make_report(std::string name, const GridFunction& f, const SpaceParams& params,
                       const ScaleLadder& ladder, GridFunction field) {
  NormReport r{std::move(name), params, std::move(field), 0.0, 0.0, 0.0, 0, 0, {}};
  r.field_norm = lp_norm(r.field, params.p);
  r.lp_term = lp_norm(f, params.p);
  r.norm = r.lp_term + r.field_norm;
  r.k_min = ladder.k_min();
  r.k_max = ladder.k_max();
  return r;
}

void require_alpha_below_two(const SpaceParams& params) {
  if (!(params.alpha > 0.0 && params.alpha < 2.0)) {
    throw DomainError("requires alpha in (0, 2)");
  }
}

}  // namespace

TimeSpaceField::TimeSpaceField(ScaleLadder ladder, std::vector<GridFunction> rungs)
    : ladder_(ladder), rungs_(std::move(rungs)) {
  if (static_cast<int>(rungs_.size()) != ladder_.rung_count()) {
    throw DomainError("time-space field needs one grid function per rung");
  }
  for (const auto& r : rungs_) {
    if (!r.same_geometry(rungs_.front())) {
      throw DomainError("time-space field rungs must share one grid geometry");
    }
  }
}

TimeSpaceField ball_difference_field(const GridFunction& f, double alpha,
                                     const ScaleLadder& ladder) {
  ladder.require_admissible(f.samples_per_axis());
  std::vector<GridFunction> rungs;
  for (int k : ladder.rungs()) {
    const double w = std::pow(2.0, k * alpha);
    rungs.push_back(kernels::ball_difference(f, ScaleLadder::scale(k)).map(
        [w](double v) { return w * std::abs(v); }));
  }
  return TimeSpaceField(ladder, std::move(rungs));
}

GridFunction square_g(const TimeSpaceField& F, double q) {
  require_q(q);
  RungAccumulator acc(F.rungs().front().size(), q);
  for (const auto& r : F.rungs()) {
    if (q == kInf) {
      acc.add_sup(r.abs().values());
    } else {
      acc.add_power(powered(r.values(), q));
    }
  }
  return acc.finish(F.dim(), F.samples_per_axis());
}

GridFunction square_s(const TimeSpaceField& F, double q, double beta, double r) {
  require_q(q);
  if (r == 0.0) r = q;
  if (!(r >= 1.0 && r <= q)) throw DomainError("requires r in [1, q]");
  if (!(beta >= 1.0)) throw DomainError("requires beta >= 1");
  const int n = F.samples_per_axis();
  F.ladder().require_admissible(n, beta);
  RungAccumulator acc(F.rungs().front().size(), q);
  for (int k : F.ladder().rungs()) {
    const BallNeighbourhood ball(F.dim(), n, beta * ScaleLadder::scale(k));
    const GridFunction inner = ball.power_mean(F.at(k), r);
    if (q == kInf) {
      acc.add_sup(inner.values());
    } else if (r == q) {
      // Mean of |F|^q, without the round trip through the 1/q power.
      acc.add_power(ball.mean(F.at(k).map([q](double v) { return std::pow(std::abs(v), q); }))
                        .values());
    } else {
      acc.add_power(powered(inner.values(), q));
    }
  }
  return acc.finish(F.dim(), n);
}

double gstar_weight_mass(int dim, int samples_per_axis, double t, double lambda) {
  std::vector<Index> offsets;
  std::vector<double> weights;
  gstar_stencil(dim, samples_per_axis, t, lambda, offsets, weights);
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

GridFunction square_gstar(const TimeSpaceField& F, double q, double lambda) {
  if (!(q > 1.0 && q < kInf)) throw DomainError("g*_lambda requires q in (1, inf)");
  if (!(lambda > 1.0)) throw DomainError("g*_lambda requires lambda > 1");
  const int n = F.samples_per_axis();
  RungAccumulator acc(F.rungs().front().size(), q);
  std::vector<Index> offsets;
  std::vector<double> weights;
  for (int k : F.ladder().rungs()) {
    gstar_stencil(F.dim(), n, ScaleLadder::scale(k), lambda, offsets, weights);
    const auto fq = powered(F.at(k).values(), q);
    acc.add_power(stencil_sum(fq, F.dim(), n, offsets, weights));
  }
  return acc.finish(F.dim(), n);
}

io::KeyValues NormReport::to_key_values() const {
  io::KeyValues kv;
  kv.set("functional", functional);
  kv.set("alpha", params.alpha);
  kv.set("p", params.p);
  kv.set("q", format_exponent(params.q));
  if (params.r) kv.set("r", format_exponent(*params.r));
  if (params.beta) kv.set("beta", *params.beta);
  if (params.lambda) kv.set("lambda", *params.lambda);
  kv.set("dim", field.dim());
  kv.set("N", field.samples_per_axis());
  kv.set("k_min", k_min);
  kv.set("k_max", k_max);
  kv.set("lp_term", lp_term);
  kv.set("field_norm", field_norm);
  kv.set("norm", norm);
  if (!warning.empty()) kv.set("warning", warning);
  return kv;
}

std::string NormReport::to_text() const {
  std::ostringstream os;
  to_key_values().write(os);
  return os.str();
}

NormReport g_functional(const GridFunction& f, const SpaceParams& params,
                        const ScaleLadder& ladder) {
  params.validate();
  require_alpha_below_two(params);
  const auto F = ball_difference_field(f, params.alpha, ladder);
  return make_report("g", f, params, ladder, square_g(F, params.q));
}

NormReport area_functional(const GridFunction& f, const SpaceParams& params,
                           const ScaleLadder& ladder, double r, double beta) {
  params.validate();
  require_alpha_below_two(params);
  if (!(r >= 1.0 && r <= params.q)) throw DomainError("area functional requires r in [1, q]");
  if (!(beta >= 1.0)) throw DomainError("area functional requires beta >= 1");
  ladder.require_admissible(f.samples_per_axis(), beta);
  const auto F = ball_difference_field(f, params.alpha, ladder);
  SpaceParams tagged = params;
  tagged.r = r;
  tagged.beta = beta;
  return make_report(r == params.q ? "area" : "area_r", f, tagged, ladder,
                     square_s(F, params.q, beta, r));
}

NormReport gstar_functional(const GridFunction& f, const SpaceParams& params,
                            const ScaleLadder& ladder, double lambda) {
  params.validate();
  require_alpha_below_two(params);
  if (params.q_is_infinite()) throw DomainError("g*_lambda requires q in (1, inf)");
  if (!(lambda > 1.0)) throw DomainError("g*_lambda requires lambda > 1");
  const auto F = ball_difference_field(f, params.alpha, ladder);
  SpaceParams tagged = params;
  tagged.lambda = lambda;
  return make_report("gstar", f, tagged, ladder, square_gstar(F, params.q, lambda));
}

NormReport fourier_tl_norm(const GridFunction& f, const SpaceParams& params,
                           const ScaleLadder& ladder, const kernels::FilterBank& bank) {
  params.validate();
  const int rungs = bank.rungs_to_cover(f.dim(), f.samples_per_axis());
  RungAccumulator acc(f.size(), params.q);
  for (int k = 1; k <= rungs; ++k) {
    const double w = std::pow(2.0, k * params.alpha);
    const auto piece = kernels::apply_filter(f, bank, k).map([w](double v) { return w * std::abs(v); });
    if (params.q_is_infinite()) {
      acc.add_sup(piece.values());
    } else {
      acc.add_power(powered(piece.values(), params.q));
    }
  }
  NormReport r{"fourier_tl", params, acc.finish(f.dim(), f.samples_per_axis()), 0.0, 0.0, 0.0, 0, 0, {}};
  r.field_norm = lp_norm(r.field, params.p);
  r.lp_term = lp_norm(kernels::apply_base_filter(f, bank), params.p);
  r.norm = r.lp_term + r.field_norm;
  r.k_min = 1;
  r.k_max = rungs;
  (void)ladder;
  return r;
}

NormReport difference_functional(const GridFunction& f, const SpaceParams& params,
                                 const ScaleLadder& ladder) {
  params.validate();
  require_alpha_below_two(params);
  const int n = f.samples_per_axis();
  ladder.require_admissible(n);
  const double q = params.q;
  const auto vals = f.values();
  RungAccumulator acc(f.size(), q);
  std::vector<double> c(f.size());
  for (int k : ladder.rungs()) {
    const double t = ScaleLadder::scale(k);
    const BallNeighbourhood ball(f.dim(), n, t);
    const double w = std::pow(2.0, k * params.alpha);
    for (std::size_t x = 0; x < f.size(); ++x) {
      double s = 0.0;
      if (q == kInf) {
        ball.for_each(x, [&](std::size_t y) { s = std::max(s, std::abs(vals[x] - vals[y])); });
        c[x] = w * s;
      } else {
        ball.for_each(x, [&](std::size_t y) { s += std::pow(std::abs(vals[x] - vals[y]), q); });
        c[x] = std::pow(w, q) * s / static_cast<double>(ball.count());
      }
    }
    if (q == kInf) {
      acc.add_sup(c);
    } else {
      acc.add_power(c);
    }
  }
  auto r = make_report("difference", f, params, ladder, acc.finish(f.dim(), n));
  if (params.alpha >= 1.0) {
    r.warning = "alpha >= 1: first differences saturate; the value grows with k_max";
  }
  return r;
}

double tail_check(const GridFunction& f, const SpaceParams& params) {
  if (!(params.alpha > 0.0)) throw DomainError("tail check requires alpha > 0");
  const double t = 0.25;
  const GridFunction avg = kernels::validate_direct(f, t);
  const MaximalField m = hl_maximal(f, std::vector<double>{t});
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double mf = m.values[i];
    if (mf == 0.0) continue;
    worst = std::max(worst, std::abs(f[i] - avg[i]) / (2.0 * mf));
  }
  return worst;
}

}  // namespace ballavg
