#include "ballavg/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "ballavg/io.hpp"

namespace ballavg::kernels {

namespace {

constexpr int kRuleSize = 64;
// Below this argument the closed forms lose digits to cancellation and the
// Taylor series take over.
constexpr double kSeriesCutoff = 0.5;

void require_dim(int dim) {
  if (dim < 1 || dim > 3) throw DomainError("multiplier dimension must be 1, 2 or 3");
}

void require_nonnegative(double s) {
  if (!(s >= 0.0)) throw DomainError("multiplier argument must be >= 0");
}

double cos_power(double theta, int n) {
  const double c = std::cos(theta);
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= c;
  return r;
}

int panels_for(double s) { return 1 + static_cast<int>(s / 24.0); }

// 1 − sin(s)/s = Σ_{m≥1} (−1)^{m+1} s^{2m}/(2m+1)!
double a1_series(double s) {
  const double s2 = s * s;
  double term = s2 / 6.0;
  double sum = 0.0;
  for (int m = 1; m < 12; ++m) {
    sum += term;
    term *= -s2 / ((2.0 * m + 2.0) * (2.0 * m + 3.0));
  }
  return sum;
}

// 1 − 3(sin s − s cos s)/s³ = 3 Σ_{m≥2} (−1)^m 2m s^{2m−2}/(2m+1)!
double a3_series(double s) {
  const double s2 = s * s;
  double sum = 0.0;
  double pow_s = s2;        // s^{2m−2} for m = 2
  double fact = 120.0;      // (2m+1)! for m = 2
  for (int m = 2; m < 14; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    sum += sign * 2.0 * m * pow_s / fact;
    pow_s *= s2;
    fact *= (2.0 * m + 2.0) * (2.0 * m + 3.0);
  }
  return 3.0 * sum;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int m) {
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  if (m < 1) throw DomainError("Gauss-Legendre rule needs m >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  return cache.emplace(m, std::move(rule)).first->second;
}

double integrate(const std::function<double(double)>& fn, double a, double b, int panels) {
  const auto& rule = gauss_legendre(kRuleSize);
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double half = 0.5 * width;
    const double mid = lo + half;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      s += rule.weights[i] * fn(mid + half * rule.nodes[i]);
    }
    total += half * s;
  }
  return total;
}

double gamma_n(int dim) {
  require_dim(dim);
  // Wallis integrals ∫_0^{π/2} cos^n θ dθ.
  switch (dim) {
    case 1: return 1.0;
    case 2: return 4.0 / kPi;
    default: return 1.5;
  }
}

double unit_ball_volume(int dim) {
  require_dim(dim);
  switch (dim) {
    case 1: return 2.0;
    case 2: return kPi;
    default: return 4.0 * kPi / 3.0;
  }
}

double ball_multiplier_quadrature(int dim, double s) {
  require_dim(dim);
  require_nonnegative(s);
  const double integral = integrate(
      [&](double th) { return std::cos(s * std::sin(th)) * cos_power(th, dim); }, 0.0,
      0.5 * kPi, panels_for(s));
  return gamma_n(dim) * integral;
}

double a_function_quadrature(int dim, double s) {
  require_dim(dim);
  require_nonnegative(s);
  const double integral = integrate(
      [&](double th) {
        const double h = std::sin(0.5 * s * std::sin(th));
        return h * h * cos_power(th, dim);
      },
      0.0, 0.5 * kPi, panels_for(s));
  return 2.0 * gamma_n(dim) * integral;
}

namespace {

std::atomic<double> g_fault{0.0};

double ball_multiplier_exact(int dim, double s) {
  if (s == 0.0) return 1.0;
  switch (dim) {
    case 1:
      return std::sin(s) / s;
    case 2:
      return ball_multiplier_quadrature(2, s);
    default:
      if (s < kSeriesCutoff) return 1.0 - a3_series(s);
      return 3.0 * (std::sin(s) - s * std::cos(s)) / (s * s * s);
  }
}

}  // namespace

void set_multiplier_fault(double amplitude) { g_fault.store(amplitude); }

double multiplier_fault() { return g_fault.load(); }

double ball_multiplier(int dim, double s) {
  require_dim(dim);
  require_nonnegative(s);
  return ball_multiplier_exact(dim, s) + g_fault.load() * std::sin(s);
}

double a_function(int dim, double s) {
  require_dim(dim);
  require_nonnegative(s);
  if (s == 0.0) return 0.0;
  switch (dim) {
    case 1:
      return s < kSeriesCutoff ? a1_series(s) : 1.0 - std::sin(s) / s;
    case 2:
      return a_function_quadrature(2, s);
    default:
      return s < kSeriesCutoff ? a3_series(s)
                               : 1.0 - 3.0 * (std::sin(s) - s * std::cos(s)) / (s * s * s);
  }
}

std::vector<double> higher_average_weights(int ell) {
  if (ell < 1) throw DomainError("ell must be >= 1");
  // C(2ℓ, ℓ−j) for j = 0..ℓ
  std::vector<double> binom(ell + 1);
  for (int j = 0; j <= ell; ++j) {
    double c = 1.0;
    const int kk = ell - j;
    for (int i = 1; i <= kk; ++i) c = c * (2 * ell - kk + i) / i;
    binom[j] = c;
  }
  std::vector<double> w(ell);
  for (int j = 1; j <= ell; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    w[j - 1] = -2.0 / binom[0] * sign * binom[j];
  }
  return w;
}

double higher_defect(int dim, int ell, double s) {
  const auto w = higher_average_weights(ell);
  // Σ_j w_j = 1, so 1 − Σ_j w_j Î(js) = Σ_j w_j A(js).
  double d = 0.0;
  for (int j = 1; j <= ell; ++j) d += w[j - 1] * a_function(dim, j * s);
  return d;
}

double higher_multiplier(int dim, int ell, double s) {
  const auto w = higher_average_weights(ell);
  double m = 0.0;
  for (int j = 1; j <= ell; ++j) m += w[j - 1] * ball_multiplier(dim, j * s);
  return m;
}

void require_scale(const GridFunction& f, double t, double factor) {
  const double dx = f.spacing();
  if (!(t >= 2.0 * dx * (1.0 - 1e-12))) {
    std::ostringstream os;
    os << "scale t=" << t << " is below two grid spacings (2/N=" << 2.0 * dx << ")";
    throw DomainError(os.str());
  }
  if (!(factor * t <= 0.25 * (1.0 + 1e-12))) {
    std::ostringstream os;
    os << "scale " << factor << "*t=" << factor * t << " exceeds 1/4";
    throw DomainError(os.str());
  }
}

GridFunction apply_ball_average(const GridFunction& f, double t) {
  require_scale(f, t);
  const int dim = f.dim();
  return apply_radial_multiplier(f, [=](double xi) { return ball_multiplier(dim, t * xi); });
}

GridFunction ball_difference(const GridFunction& f, double t) {
  require_scale(f, t);
  const int dim = f.dim();
  return apply_radial_multiplier(f, [=](double xi) { return a_function(dim, t * xi); });
}

GridFunction apply_higher_average(const GridFunction& f, double t, int ell) {
  if (ell < 1) throw DomainError("ell must be >= 1");
  require_scale(f, t, ell);
  const int dim = f.dim();
  if (ell == 1) return apply_ball_average(f, t);
  return apply_radial_multiplier(f, [=](double xi) { return higher_multiplier(dim, ell, t * xi); });
}

GridFunction higher_difference(const GridFunction& f, double t, int ell) {
  if (ell < 1) throw DomainError("ell must be >= 1");
  require_scale(f, t, ell);
  const int dim = f.dim();
  return apply_radial_multiplier(f, [=](double xi) { return higher_defect(dim, ell, t * xi); });
}

GridFunction validate_direct(const GridFunction& f, double t) {
  require_scale(f, t);
  return BallNeighbourhood(f.dim(), f.samples_per_axis(), t).mean(f);
}

// -- FilterBank ------------------------------------------------------------------

FilterBank::FilterBank(double plateau_end, double support_end)
    : a_(plateau_end), b_(support_end) {
  if (!(a_ >= 1.0 && a_ < 1.2)) throw DomainError("filter plateau end must lie in [1, 6/5)");
  if (!(b_ > 5.0 / 3.0 && b_ <= 2.0)) throw DomainError("filter support end must lie in (5/3, 2]");

  constexpr int kSamples = 4001;
  annulus_floor_ = kInf;
  for (int i = 0; i < kSamples; ++i) {
    const double s = 0.6 + (5.0 / 3.0 - 0.6) * i / (kSamples - 1);
    annulus_floor_ = std::min(annulus_floor_, std::abs(annulus(s)));
  }
  base_floor_ = kInf;
  for (int i = 0; i < kSamples; ++i) {
    const double s = (5.0 / 3.0) * i / (kSamples - 1);
    base_floor_ = std::min(base_floor_, std::abs(base(s)));
  }
  // Squared partition on s ∈ [0, 1000] with enough rungs to reach the plateau.
  partition_error_ = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double s = 1000.0 * i / 20000.0;
    const int rungs = static_cast<int>(std::ceil(std::log2(std::max(s / a_, 1.0)))) + 1;
    double sum = base(s) * base(s);
    for (int k = 1; k <= rungs; ++k) {
      const double v = annulus(std::ldexp(s, -k));
      sum += v * v;
    }
    partition_error_ = std::max(partition_error_, std::abs(sum - 1.0));
  }
  if (partition_error_ > 1e-10) {
    throw NumericalError("filter bank fails the Calderon partition (deviation " +
                         io::format_number(partition_error_) + ")");
  }
  if (!(annulus_floor_ > 0.0) || !(base_floor_ > 0.0)) {
    throw NumericalError("filter bank lower bound is not positive");
  }
}

double FilterBank::transition(double s) const {
  if (s <= a_) return 1.0;
  if (s >= b_) return 0.0;
  const double x = (s - a_) / (b_ - a_);
  const double up = std::exp(-1.0 / (1.0 - x));
  const double down = std::exp(-1.0 / x);
  return up / (up + down);
}

double FilterBank::base(double s) const { return std::sqrt(transition(s)); }

double FilterBank::annulus(double s) const {
  return std::sqrt(std::max(0.0, transition(s) - transition(2.0 * s)));
}

int FilterBank::rungs_to_cover(int dim, int samples_per_axis) const {
  const double xi_max = 2.0 * kPi * (samples_per_axis / 2.0) * std::sqrt(static_cast<double>(dim));
  int k = 0;
  while (std::ldexp(xi_max, -k) > a_) ++k;
  return std::max(k, 1);
}

FilterBank build_filter_bank() { return FilterBank(1.0, 2.0); }

FilterBank build_alternate_filter_bank() { return FilterBank(1.1, 1.8); }

GridFunction apply_filter(const GridFunction& f, const FilterBank& bank, int rung) {
  const int cover = bank.rungs_to_cover(f.dim(), f.samples_per_axis());
  if (rung < 1 || rung > cover) {
    throw DomainError("filter rung " + std::to_string(rung) + " outside [1, " +
                      std::to_string(cover) + "]");
  }
  return apply_radial_multiplier(
      f, [&bank, rung](double xi) { return bank.annulus(std::ldexp(xi, -rung)); });
}

GridFunction apply_base_filter(const GridFunction& f, const FilterBank& bank) {
  return apply_radial_multiplier(f, [&bank](double xi) { return bank.base(xi); });
}

double reconstruction_multiplier(int dim, double s, const FilterBank& bank) {
  if (s < 0.5 || s > 2.0) return 0.0;
  const double phi = bank.annulus(s);
  if (phi == 0.0) return 0.0;
  return phi / a_function(dim, s);
}

void export_profile(std::ostream& os, const std::function<double(double)>& profile,
                    double s_max, int samples) {
  if (samples < 2) throw DomainError("profile export needs at least two samples");
  for (int i = 0; i < samples; ++i) {
    const double s = s_max * i / (samples - 1);
    os << io::format_number(s) << ' ' << io::format_number(profile(s)) << '\n';
  }
}

}  // namespace ballavg::kernels
