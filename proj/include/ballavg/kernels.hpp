#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "ballavg/grid.hpp"

namespace ballavg::kernels {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights of the m-point rule, computed by Newton iteration on the
/// Legendre recurrence and cached.
const GaussLegendreRule& gauss_legendre(int m);

/// ∫_a^b fn(x) dx with `panels` equal panels of the 64-point rule.
double integrate(const std::function<double(double)>& fn, double a, double b, int panels = 1);

// -- ball-average multiplier --------------------------------------------------

/// Fourier profile Î_n(s) of the normalized unit-ball indicator.
///
/// Closed forms for n = 1 (sin s / s) and n = 3 (3(sin s − s cos s)/s³),
/// quadrature for n = 2. Î(0) = 1.
double ball_multiplier(int dim, double s);

/// Î_n(s) by composite Gauss-Legendre quadrature of
/// γ_n ∫_0^1 cos(us)(1−u²)^{(n−1)/2} du after the substitution u = sin θ,
/// which removes the endpoint singularity for even n.
double ball_multiplier_quadrature(int dim, double s);

/// Harness self-test hook: adds amplitude·sin(s) to Î (not to A, so the two
/// profiles disagree). Zero, the default, disables it.
void set_multiplier_fault(double amplitude);
double multiplier_fault();

/// A_n(s) = 1 − Î_n(s), evaluated without cancellation near s = 0.
double a_function(int dim, double s);

/// A_n(s) = 2γ_n ∫_0^1 (1−u²)^{(n−1)/2} sin²(us/2) du by quadrature.
double a_function_quadrature(int dim, double s);

/// Normalization γ_n = [∫_0^1 (1−u²)^{(n−1)/2} du]^{−1}.
double gamma_n(int dim);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int dim);

/// Multiplier m_ℓ(s) of the order-2ℓ average
/// B_{ℓ,t} = (−2/C(2ℓ,ℓ)) Σ_{j=1}^{ℓ} (−1)^j C(2ℓ,ℓ−j) B_{jt}.
double higher_multiplier(int dim, int ell, double s);

/// 1 − m_ℓ(s), built from A so that the O(s^{2ℓ}) behaviour at 0 survives
/// rounding.
double higher_defect(int dim, int ell, double s);

/// Binomial weights w_j with B_{ℓ,t} = Σ_j w_j B_{jt}, j = 1..ℓ.
std::vector<double> higher_average_weights(int ell);

/// B_t f by spectral multiplication with Î(2πt|k|). Requires 2Δx ≤ t ≤ 1/4.
GridFunction apply_ball_average(const GridFunction& f, double t);

/// f − B_t f by spectral multiplication with A(2πt|k|).
GridFunction ball_difference(const GridFunction& f, double t);

/// B_{ℓ,t} f. Requires 2Δx ≤ t and ℓt ≤ 1/4.
GridFunction apply_higher_average(const GridFunction& f, double t, int ell);

/// f − B_{ℓ,t} f.
GridFunction higher_difference(const GridFunction& f, double t, int ell);

/// Throws DomainError unless 2Δx ≤ t and factor·t ≤ 1/4.
void require_scale(const GridFunction& f, double t, double factor = 1.0);

/// Direct spatial average over the open discrete ball, each node weighted
/// equally. Independent of the spectral engine; used as a cross-check.
GridFunction validate_direct(const GridFunction& f, double t);

// -- Littlewood-Paley filters ---------------------------------------------------

/// Radial filter pair (Φ̂, φ̂) with Φ̂² = h and φ̂(s)² = h(s) − h(2s), where h
/// is a C^∞ transition equal to 1 on [0, a] and 0 on [b, ∞).
///
/// The telescoping sum gives Φ̂(s)² + Σ_{k=1}^{K} φ̂(2^{−k}s)² = h(2^{−K}s),
/// which is exactly 1 once 2^{−K}s ≤ a. The constructor verifies the
/// partition and the lower bounds on [3/5, 5/3] and throws NumericalError if
/// either fails.
class FilterBank {
 public:
  /// Requires 1 ≤ a < 6/5 and 5/3 < b ≤ 2, which keeps supp φ̂ inside
  /// [1/2, 2] and both lower bounds positive.
  FilterBank(double plateau_end, double support_end);

  double plateau_end() const { return a_; }
  double support_end() const { return b_; }

  /// The transition h.
  double transition(double s) const;
  /// Φ̂(s), supported in [0, b].
  double base(double s) const;
  /// φ̂(s), supported in [a/2, b].
  double annulus(double s) const;

  /// min |φ̂| over [3/5, 5/3].
  double annulus_lower_bound() const { return annulus_floor_; }
  /// min |Φ̂| over [0, 5/3].
  double base_lower_bound() const { return base_floor_; }
  /// c_0 = min of the two lower bounds.
  double lower_bound() const { return std::min(annulus_floor_, base_floor_); }
  /// Largest deviation of the squared partition from 1 seen at construction.
  double partition_deviation() const { return partition_error_; }

  /// Number of annulus rungs needed so that every grid frequency falls under
  /// the plateau of h after K halvings.
  int rungs_to_cover(int dim, int samples_per_axis) const;

 private:
  double a_;
  double b_;
  double annulus_floor_ = 0.0;
  double base_floor_ = 0.0;
  double partition_error_ = 0.0;
};

/// The standard bank: transition from 1 at s = 1 to 0 at s = 2.
FilterBank build_filter_bank();
/// A differently shaped bank (transition on [1.1, 1.8]) for checking that
/// norms do not depend on the filter choice beyond a bounded factor.
FilterBank build_alternate_filter_bank();

/// φ_{2^{−k}} * f (rung k ≥ 1) by spectral multiplication with φ̂(2^{−k}ξ).
GridFunction apply_filter(const GridFunction& f, const FilterBank& bank, int rung);
/// Φ * f.
GridFunction apply_base_filter(const GridFunction& f, const FilterBank& bank);

/// η(s) = φ̂(s)/A_n(s) on [1/2, 2]; zero elsewhere.
double reconstruction_multiplier(int dim, double s, const FilterBank& bank);

/// Writes `samples` rows "s m(s)" for s uniformly spaced on [0, s_max].
void export_profile(std::ostream& os, const std::function<double(double)>& profile,
                    double s_max, int samples);

}  // namespace ballavg::kernels
