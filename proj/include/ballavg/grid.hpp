#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ballavg {

/// Raised when an argument lies outside the documented parameter domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical self-check fails (e.g. a filter bank that does not
/// partition unity).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Integer multi-index on the grid; unused trailing axes are zero.
using Index = std::array<int, 3>;
/// Physical coordinate in [0,1)^n; unused trailing axes are zero.
using Point = std::array<double, 3>;

/// Real samples of a periodic function on the uniform grid over [0,1)^n.
///
/// Values are stored lexicographically with the last axis fastest. The
/// object is immutable once built, and every constructor rejects non-finite
/// samples.
class GridFunction {
 public:
  GridFunction(int dim, int samples_per_axis, std::vector<double> values);

  static GridFunction constant(int dim, int samples_per_axis, double value);
  static GridFunction sample(int dim, int samples_per_axis,
                             const std::function<double(const Point&)>& fn);

  int dim() const { return dim_; }
  int samples_per_axis() const { return n_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return 1.0 / n_; }
  /// Δx^n, the quadrature weight of one node.
  double cell_volume() const;

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  Index multi_index(std::size_t flat) const;
  /// Flat index of a multi-index, wrapped periodically on every axis.
  std::size_t flat_index(const Index& idx) const;
  Point node(std::size_t flat) const;

  bool same_geometry(const GridFunction& other) const {
    return dim_ == other.dim_ && n_ == other.n_;
  }

  /// Pointwise map, rechecked for finiteness.
  GridFunction map(const std::function<double(double)>& fn) const;
  GridFunction abs() const;

 private:
  int dim_;
  int n_;
  std::vector<double> values_;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double c, const GridFunction& f);

/// Translate by whole samples: result(x) = f(x - shift·Δx).
GridFunction translate(const GridFunction& f, const Index& shift);

bool is_power_of_two(int n);
/// Validates dim ∈ {1,2,3} and N a power of two with N ≥ 16.
void check_geometry(int dim, int samples_per_axis);

/// Discrete Fourier coefficients of a grid function.
///
/// Storage follows the FFT order on each axis: position j holds the signed
/// frequency j for j < N/2 and j − N otherwise, so frequencies cover
/// {−N/2, …, N/2−1}. The forward transform carries no normalization; the
/// inverse divides by N^n.
class SpectralField {
 public:
  SpectralField(int dim, int samples_per_axis,
                std::vector<std::complex<double>> coefficients);

  int dim() const { return dim_; }
  int samples_per_axis() const { return n_; }
  std::size_t size() const { return coefficients_.size(); }
  std::span<const std::complex<double>> coefficients() const {
    return coefficients_;
  }
  std::complex<double> operator[](std::size_t i) const {
    return coefficients_[i];
  }

  /// Signed frequency vector of storage position `flat`.
  Index frequency(std::size_t flat) const;
  /// Storage position of a signed frequency vector.
  std::size_t position(const Index& frequency) const;
  /// |k|² of storage position `flat`.
  long frequency_norm_sq(std::size_t flat) const;

 private:
  int dim_;
  int n_;
  std::vector<std::complex<double>> coefficients_;
};

SpectralField forward_transform(const GridFunction& f);
std::vector<std::complex<double>> inverse_transform(const SpectralField& s);
/// Inverse transform keeping the real part; for spectra of real functions
/// the discarded imaginary part is rounding noise.
GridFunction inverse_transform_real(const SpectralField& s);

/// Applies the radial multiplier ξ ↦ profile(|ξ|), where the grid mode
/// e^{2πik·x} sits at angular frequency |ξ| = 2π|k|.
///
/// The profile is evaluated once per distinct |k|².
GridFunction apply_radial_multiplier(
    const GridFunction& f, const std::function<double(double)>& profile);

/// Riemann-sum L^p norm (Σ|f|^p Δx^n)^{1/p}; p = ∞ gives the max modulus.
double lp_norm(const GridFunction& f, double p);
double lp_norm(std::span<const double> values, double cell_volume, double p);

/// Dyadic scale ladder t_k = 2^{−k}, k_min ≤ k ≤ k_max, each rung carrying
/// the quadrature weight ln 2 of ∫ dt/t over one octave.
class ScaleLadder {
 public:
  ScaleLadder(int k_min, int k_max);

  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  int rung_count() const { return k_max_ - k_min_ + 1; }
  std::vector<int> rungs() const;
  std::vector<double> scales() const;
  static double scale(int k);
  static double weight() { return kLn2; }

  /// True when the finest scale resolves at least two grid spacings.
  bool resolvable_on(int samples_per_axis) const;
  /// Throws DomainError unless every dilated scale factor·t_k lies in
  /// [2Δx, 1/4].
  void require_admissible(int samples_per_axis, double factor = 1.0) const;

 private:
  int k_min_;
  int k_max_;
};

/// Ladder with k_max = log2(N) − 1, so that the finest scale is 2Δx.
ScaleLadder make_ladder(int samples_per_axis, int k_min);

/// Smoothness/integrability parameters shared by the functionals.
struct SpaceParams {
  double alpha = 0.5;
  double p = 2.0;
  double q = 2.0;  ///< kInf allowed
  std::optional<double> r;
  std::optional<double> lambda;
  std::optional<double> beta;
  int ell = 1;

  bool q_is_infinite() const { return q == kInf; }
  /// Throws DomainError naming the violated constraint.
  void validate() const;
};

/// Parses a q-style exponent: a decimal number or "inf"/"infinity".
double parse_exponent(const std::string& text);
std::string format_exponent(double value);

// -- torus geometry ---------------------------------------------------------

/// Torus distance between the origin and the node offset `offset`.
double torus_distance(const Index& offset, int dim, int samples_per_axis);

/// Node offsets of the open discrete ball B(0, radius) on the torus: every
/// node with torus distance strictly less than `radius`, listed once.
std::vector<Index> ball_offsets(int dim, int samples_per_axis, double radius);

/// Number of nodes in the open discrete ball of the given radius.
std::size_t ball_count(int dim, int samples_per_axis, double radius);

/// Neighbour tables: for each node, the flat indices of the nodes inside the
/// open discrete ball around it.
class BallNeighbourhood {
 public:
  BallNeighbourhood(int dim, int samples_per_axis, double radius);

  std::size_t count() const { return offsets_.size(); }
  double radius() const { return radius_; }
  /// Calls visit(flat_neighbour) for each neighbour of node `centre`.
  template <class Visit>
  void for_each(std::size_t centre, Visit&& visit) const;

  /// Discrete-ball mean of f around every node.
  GridFunction mean(const GridFunction& f) const;
  /// (mean |f|^r)^{1/r}; r = ∞ gives the ball max of |f|.
  GridFunction power_mean(const GridFunction& f, double r) const;
  GridFunction max(const GridFunction& f) const;
  GridFunction min(const GridFunction& f) const;

 private:
  int dim_;
  int n_;
  double radius_;
  std::vector<Index> offsets_;
};

template <class Visit>
void BallNeighbourhood::for_each(std::size_t centre, Visit&& visit) const {
  const int mask = n_ - 1;
  const auto nn = static_cast<std::size_t>(n_);
  std::size_t i0 = 0, i1 = 0, i2 = 0;
  if (dim_ == 1) {
    i0 = centre;
  } else if (dim_ == 2) {
    i0 = centre / nn;
    i1 = centre % nn;
  } else {
    i0 = centre / (nn * nn);
    i1 = (centre / nn) % nn;
    i2 = centre % nn;
  }
  for (const auto& o : offsets_) {
    std::size_t flat = static_cast<std::size_t>((static_cast<int>(i0) + o[0]) & mask);
    if (dim_ >= 2) flat = flat * nn + static_cast<std::size_t>((static_cast<int>(i1) + o[1]) & mask);
    if (dim_ == 3) flat = flat * nn + static_cast<std::size_t>((static_cast<int>(i2) + o[2]) & mask);
    visit(flat);
  }
}

}  // namespace ballavg
