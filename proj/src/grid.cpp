#include "ballavg/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace ballavg {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NumericalError(std::string(what) + ": non-finite sample");
    }
  }
}

void require_same_geometry(const GridFunction& a, const GridFunction& b) {
  if (!a.same_geometry(b)) {
    throw DomainError("grid functions live on different grids");
  }
}

// FFTW plans are cached per (dim, N, sign). Planning is not thread-safe, so it
// happens under a lock; execution through fftw_execute_dft is.
struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

fftw_plan plan_for(int dim, int n, int sign) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, PlanHandle> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(dim, n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second.get();
  const std::size_t total = ipow(static_cast<std::size_t>(n), dim);
  std::vector<std::complex<double>> scratch(total);
  int dims[3] = {n, n, n};
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft(dim, dims, buf, buf, sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan == nullptr) throw NumericalError("FFTW planning failed");
  cache.emplace(key, PlanHandle(plan));
  return plan;
}

void execute(int dim, int n, int sign, std::vector<std::complex<double>>& data) {
  fftw_plan plan = plan_for(dim, n, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

// -- GridFunction ------------------------------------------------------------

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_geometry(int dim, int samples_per_axis) {
  if (dim < 1 || dim > 3) {
    throw DomainError("dimension must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
  }
  if (!is_power_of_two(samples_per_axis) || samples_per_axis < 16) {
    throw DomainError("samples per axis must be a power of two >= 16 (got " +
                      std::to_string(samples_per_axis) + ")");
  }
}

GridFunction::GridFunction(int dim, int samples_per_axis, std::vector<double> values)
    : dim_(dim), n_(samples_per_axis), values_(std::move(values)) {
  check_geometry(dim_, n_);
  if (values_.size() != ipow(static_cast<std::size_t>(n_), dim_)) {
    throw DomainError("expected N^n = " +
                      std::to_string(ipow(static_cast<std::size_t>(n_), dim_)) +
                      " samples, got " + std::to_string(values_.size()));
  }
  require_finite(values_, "GridFunction");
}

GridFunction GridFunction::constant(int dim, int samples_per_axis, double value) {
  check_geometry(dim, samples_per_axis);
  return GridFunction(dim, samples_per_axis,
                      std::vector<double>(ipow(static_cast<std::size_t>(samples_per_axis), dim), value));
}

GridFunction GridFunction::sample(int dim, int samples_per_axis,
                                  const std::function<double(const Point&)>& fn) {
  check_geometry(dim, samples_per_axis);
  const std::size_t total = ipow(static_cast<std::size_t>(samples_per_axis), dim);
  std::vector<double> values(total);
  GridFunction proto(dim, samples_per_axis, std::vector<double>(total, 0.0));
  for (std::size_t i = 0; i < total; ++i) values[i] = fn(proto.node(i));
  return GridFunction(dim, samples_per_axis, std::move(values));
}

double GridFunction::cell_volume() const { return std::pow(spacing(), dim_); }

Index GridFunction::multi_index(std::size_t flat) const {
  Index idx{0, 0, 0};
  const auto nn = static_cast<std::size_t>(n_);
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % nn);
    flat /= nn;
  }
  return idx;
}

std::size_t GridFunction::flat_index(const Index& idx) const {
  std::size_t flat = 0;
  const int mask = n_ - 1;
  for (int a = 0; a < dim_; ++a) {
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[a] & mask);
  }
  return flat;
}

Point GridFunction::node(std::size_t flat) const {
  const Index idx = multi_index(flat);
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = idx[a] * spacing();
  return x;
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), fn);
  return GridFunction(dim_, n_, std::move(out));
}

GridFunction GridFunction::abs() const {
  return map([](double v) { return std::abs(v); });
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_geometry(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return GridFunction(a.dim(), a.samples_per_axis(), std::move(out));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_geometry(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return GridFunction(a.dim(), a.samples_per_axis(), std::move(out));
}

GridFunction operator*(double c, const GridFunction& f) {
  return f.map([c](double v) { return c * v; });
}

GridFunction translate(const GridFunction& f, const Index& shift) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    Index idx = f.multi_index(i);
    for (int a = 0; a < f.dim(); ++a) idx[a] += shift[a];
    out[f.flat_index(idx)] = f[i];
  }
  return GridFunction(f.dim(), f.samples_per_axis(), std::move(out));
}

// -- SpectralField -----------------------------------------------------------

SpectralField::SpectralField(int dim, int samples_per_axis,
                             std::vector<std::complex<double>> coefficients)
    : dim_(dim), n_(samples_per_axis), coefficients_(std::move(coefficients)) {
  check_geometry(dim_, n_);
  if (coefficients_.size() != ipow(static_cast<std::size_t>(n_), dim_)) {
    throw DomainError("spectral field has the wrong number of coefficients");
  }
}

Index SpectralField::frequency(std::size_t flat) const {
  Index k{0, 0, 0};
  const auto nn = static_cast<std::size_t>(n_);
  for (int a = dim_ - 1; a >= 0; --a) {
    int j = static_cast<int>(flat % nn);
    k[a] = j < n_ / 2 ? j : j - n_;
    flat /= nn;
  }
  return k;
}

std::size_t SpectralField::position(const Index& frequency) const {
  std::size_t flat = 0;
  const int mask = n_ - 1;
  for (int a = 0; a < dim_; ++a) {
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(frequency[a] & mask);
  }
  return flat;
}

long SpectralField::frequency_norm_sq(std::size_t flat) const {
  const Index k = frequency(flat);
  long s = 0;
  for (int a = 0; a < dim_; ++a) s += static_cast<long>(k[a]) * k[a];
  return s;
}

SpectralField forward_transform(const GridFunction& f) {
  std::vector<std::complex<double>> data(f.values().begin(), f.values().end());
  execute(f.dim(), f.samples_per_axis(), FFTW_FORWARD, data);
  return SpectralField(f.dim(), f.samples_per_axis(), std::move(data));
}

std::vector<std::complex<double>> inverse_transform(const SpectralField& s) {
  std::vector<std::complex<double>> data(s.coefficients().begin(), s.coefficients().end());
  execute(s.dim(), s.samples_per_axis(), FFTW_BACKWARD, data);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& c : data) c *= scale;
  return data;
}

GridFunction inverse_transform_real(const SpectralField& s) {
  auto data = inverse_transform(s);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
  return GridFunction(s.dim(), s.samples_per_axis(), std::move(out));
}

GridFunction apply_radial_multiplier(const GridFunction& f,
                                     const std::function<double(double)>& profile) {
  SpectralField spec = forward_transform(f);
  std::vector<std::complex<double>> coeffs(spec.coefficients().begin(),
                                           spec.coefficients().end());
  std::unordered_map<long, double> cache;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const long k2 = spec.frequency_norm_sq(i);
    auto it = cache.find(k2);
    if (it == cache.end()) {
      const double xi = 2.0 * kPi * std::sqrt(static_cast<double>(k2));
      it = cache.emplace(k2, profile(xi)).first;
    }
    coeffs[i] *= it->second;
  }
  return inverse_transform_real(SpectralField(f.dim(), f.samples_per_axis(), std::move(coeffs)));
}

// -- norms -------------------------------------------------------------------

double lp_norm(std::span<const double> values, double cell_volume, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p in [1, inf]");
  if (p == kInf) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  // Scale by the max modulus so large p does not overflow.
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s * cell_volume, 1.0 / p);
}

double lp_norm(const GridFunction& f, double p) {
  return lp_norm(f.values(), f.cell_volume(), p);
}

// -- ScaleLadder ---------------------------------------------------------------

ScaleLadder::ScaleLadder(int k_min, int k_max) : k_min_(k_min), k_max_(k_max) {
  if (k_min < 0 || k_max < k_min) {
    throw DomainError("scale ladder needs 0 <= k_min <= k_max (got " +
                      std::to_string(k_min) + ", " + std::to_string(k_max) + ")");
  }
}

std::vector<int> ScaleLadder::rungs() const {
  std::vector<int> r;
  for (int k = k_min_; k <= k_max_; ++k) r.push_back(k);
  return r;
}

std::vector<double> ScaleLadder::scales() const {
  std::vector<double> s;
  for (int k = k_min_; k <= k_max_; ++k) s.push_back(scale(k));
  return s;
}

double ScaleLadder::scale(int k) { return std::ldexp(1.0, -k); }

bool ScaleLadder::resolvable_on(int samples_per_axis) const {
  return scale(k_max_) >= 2.0 / samples_per_axis;
}

void ScaleLadder::require_admissible(int samples_per_axis, double factor) const {
  const double lo = factor * scale(k_max_);
  const double hi = factor * scale(k_min_);
  if (lo < 2.0 / samples_per_axis * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "scale " << lo << " is below two grid spacings (N=" << samples_per_axis << ")";
    throw DomainError(os.str());
  }
  if (hi > 0.25 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "scale " << hi << " exceeds 1/4";
    throw DomainError(os.str());
  }
}

ScaleLadder make_ladder(int samples_per_axis, int k_min) {
  if (!is_power_of_two(samples_per_axis)) {
    throw DomainError("ladder needs a power-of-two grid size");
  }
  int log2n = 0;
  while ((1 << log2n) < samples_per_axis) ++log2n;
  const int k_max = log2n - 1;
  if (k_min < 2) throw DomainError("ladder scales must not exceed 1/4 (k_min >= 2)");
  if (k_min > k_max) {
    throw DomainError("no admissible rung: t = 2^-" + std::to_string(k_min) +
                      " is below two grid spacings for N = " +
                      std::to_string(samples_per_axis));
  }
  return ScaleLadder(k_min, k_max);
}

// -- SpaceParams ---------------------------------------------------------------

void SpaceParams::validate() const {
  if (ell < 1) throw DomainError("ell must be >= 1");
  if (!(p > 1.0 && p < kInf)) throw DomainError("p must lie in (1, inf)");
  if (!(q > 1.0)) throw DomainError("q must lie in (1, inf]");
  if (!(alpha > 0.0 && alpha < 2.0 * ell)) {
    throw DomainError("alpha must lie in (0, 2*ell) = (0, " + std::to_string(2 * ell) + ")");
  }
  if (r && !(*r >= 1.0 && (*r < q || q == kInf))) {
    throw DomainError("r must lie in [1, q)");
  }
  if (lambda && !(*lambda > 1.0)) throw DomainError("lambda must exceed 1");
  if (beta && !(*beta >= 1.0)) throw DomainError("beta must be >= 1");
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInf;
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw DomainError("cannot parse exponent '" + text + "'");
  }
  return v;
}

std::string format_exponent(double value) {
  if (value == kInf) return "inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

// -- torus geometry -------------------------------------------------------------

double torus_distance(const Index& offset, int dim, int samples_per_axis) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) {
    int j = offset[a] % samples_per_axis;
    if (j < 0) j += samples_per_axis;
    const int d = std::min(j, samples_per_axis - j);
    s += static_cast<double>(d) * d;
  }
  return std::sqrt(s) / samples_per_axis;
}

std::vector<Index> ball_offsets(int dim, int samples_per_axis, double radius) {
  check_geometry(dim, samples_per_axis);
  const int n = samples_per_axis;
  // Enumerate each node once by its minimal-image offset in [-N/2, N/2).
  const int reach = std::min(n / 2, static_cast<int>(std::ceil(radius * n)) + 1);
  const int lo = -std::min(reach, n / 2);
  const int hi = std::min(reach, n / 2 - 1);
  std::vector<Index> out;
  const int hi1 = dim >= 2 ? hi : 0, lo1 = dim >= 2 ? lo : 0;
  const int hi2 = dim == 3 ? hi : 0, lo2 = dim == 3 ? lo : 0;
  for (int a = lo; a <= hi; ++a) {
    for (int b = lo1; b <= hi1; ++b) {
      for (int c = lo2; c <= hi2; ++c) {
        const Index o{a, b, c};
        if (torus_distance(o, dim, n) < radius) out.push_back(o);
      }
    }
  }
  return out;
}

std::size_t ball_count(int dim, int samples_per_axis, double radius) {
  return ball_offsets(dim, samples_per_axis, radius).size();
}

BallNeighbourhood::BallNeighbourhood(int dim, int samples_per_axis, double radius)
    : dim_(dim), n_(samples_per_axis), radius_(radius),
      offsets_(ball_offsets(dim, samples_per_axis, radius)) {
  if (offsets_.empty()) throw DomainError("empty discrete ball (radius too small)");
}

GridFunction BallNeighbourhood::mean(const GridFunction& f) const {
  std::vector<double> out(f.size());
  const auto vals = f.values();
  const double inv = 1.0 / static_cast<double>(offsets_.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double s = 0.0;
    for_each(i, [&](std::size_t j) { s += vals[j]; });
    out[i] = s * inv;
  }
  return GridFunction(f.dim(), f.samples_per_axis(), std::move(out));
}

GridFunction BallNeighbourhood::power_mean(const GridFunction& f, double r) const {
  if (r == kInf) return max(f.abs());
  if (!(r >= 1.0)) throw DomainError("power mean needs r >= 1");
  std::vector<double> out(f.size());
  const auto vals = f.values();
  const double inv = 1.0 / static_cast<double>(offsets_.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double s = 0.0;
    if (r == 1.0) {
      for_each(i, [&](std::size_t j) { s += std::abs(vals[j]); });
      out[i] = s * inv;
    } else {
      for_each(i, [&](std::size_t j) { s += std::pow(std::abs(vals[j]), r); });
      out[i] = std::pow(s * inv, 1.0 / r);
    }
  }
  return GridFunction(f.dim(), f.samples_per_axis(), std::move(out));
}

GridFunction BallNeighbourhood::max(const GridFunction& f) const {
  std::vector<double> out(f.size());
  const auto vals = f.values();
  for (std::size_t i = 0; i < f.size(); ++i) {
    double m = -kInf;
    for_each(i, [&](std::size_t j) { m = std::max(m, vals[j]); });
    out[i] = m;
  }
  return GridFunction(f.dim(), f.samples_per_axis(), std::move(out));
}

GridFunction BallNeighbourhood::min(const GridFunction& f) const {
  std::vector<double> out(f.size());
  const auto vals = f.values();
  for (std::size_t i = 0; i < f.size(); ++i) {
    double m = kInf;
    for_each(i, [&](std::size_t j) { m = std::min(m, vals[j]); });
    out[i] = m;
  }
  return GridFunction(f.dim(), f.samples_per_axis(), std::move(out));
}

}  // namespace ballavg
