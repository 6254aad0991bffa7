#pragma once

#include <string>
#include <vector>

#include "ballavg/grid.hpp"
#include "ballavg/io.hpp"
#include "ballavg/kernels.hpp"

namespace ballavg {

/// Values F(·, t_k) on one grid for every rung of a ladder.
class TimeSpaceField {
 public:
  TimeSpaceField(ScaleLadder ladder, std::vector<GridFunction> rungs);

  const ScaleLadder& ladder() const { return ladder_; }
  const GridFunction& at(int k) const { return rungs_.at(k - ladder_.k_min()); }
  const std::vector<GridFunction>& rungs() const { return rungs_; }
  int dim() const { return rungs_.front().dim(); }
  int samples_per_axis() const { return rungs_.front().samples_per_axis(); }

 private:
  ScaleLadder ladder_;
  std::vector<GridFunction> rungs_;
};

/// F_k = t_k^{−α} |f − B_{t_k} f|, the field the difference functionals
/// aggregate.
TimeSpaceField ball_difference_field(const GridFunction& f, double alpha,
                                     const ScaleLadder& ladder);

// Square functions of a time-space field. q = ∞ replaces the ln 2-weighted
// sum by the sup over rungs.

/// G(F)(x) = (ln2 Σ_k |F_k(x)|^q)^{1/q}.
GridFunction square_g(const TimeSpaceField& F, double q);
/// S_β(F)(x) = (ln2 Σ_k [avg_{B(x,βt_k)} |F_k|^r]^{q/r})^{1/q}; r = q gives the
/// plain area function. r = ∞ takes the ball max.
GridFunction square_s(const TimeSpaceField& F, double q, double beta = 1.0, double r = 0.0);
/// G*_λ(F)(x) = (ln2 Σ_k Σ_y w_k(x,y) |F_k(y)|^q Δx^n / t_k^n)^{1/q} with
/// w_k = (t_k/(t_k + d(x,y)))^{λn}, dropped where w_k < 1e−6. Needs q < ∞.
GridFunction square_gstar(const TimeSpaceField& F, double q, double lambda);

/// Σ_y w_k(0,y) Δx^n / t^n for the truncated g*_λ weight at scale t.
double gstar_weight_mass(int dim, int samples_per_axis, double t, double lambda);

struct NormReport {
  std::string functional;
  SpaceParams params;
  GridFunction field;
  double field_norm = 0.0;  ///< ‖field‖_p
  double lp_term = 0.0;     ///< ‖f‖_p, or ‖Φ*f‖_p for the Fourier norm
  double norm = 0.0;        ///< lp_term + field_norm
  int k_min = 0;
  int k_max = 0;
  std::string warning;

  io::KeyValues to_key_values() const;
  std::string to_text() const;
};

/// ‖f‖_p + ‖G(F)‖_p with F the ball-difference field.
NormReport g_functional(const GridFunction& f, const SpaceParams& params,
                        const ScaleLadder& ladder);

/// ‖f‖_p + ‖S_β‖_p with inner r-average; r = q is the plain area function.
/// Needs r ∈ [1, q] (r = ∞ allowed when q = ∞), β ≥ 1, βt_k ≤ 1/4.
NormReport area_functional(const GridFunction& f, const SpaceParams& params,
                           const ScaleLadder& ladder, double r, double beta);

/// ‖f‖_p + ‖G*_λ‖_p. Needs λ > 1 and q ∈ (1, ∞).
NormReport gstar_functional(const GridFunction& f, const SpaceParams& params,
                            const ScaleLadder& ladder, double lambda);

/// ‖Φ*f‖_p + ‖(ln2 Σ_k 2^{kαq} |φ_{2^{−k}}*f|^q)^{1/q}‖_p.
///
/// The sum runs over rungs 1..bank.rungs_to_cover(), which is the whole
/// grid spectrum; the ladder argument only supplies metadata.
NormReport fourier_tl_norm(const GridFunction& f, const SpaceParams& params,
                           const ScaleLadder& ladder, const kernels::FilterBank& bank);

/// ‖f‖_p + ‖(ln2 Σ_k t_k^{−αq} avg_{y∈B(x,t_k)} |f(x) − f(y)|^q)^{1/q}‖_p.
/// For α ≥ 1 the report carries a warning: first differences saturate.
NormReport difference_functional(const GridFunction& f, const SpaceParams& params,
                                 const ScaleLadder& ladder);

/// max over nodes of |f − B_t f| / (2 Mf) at t = 1/4, with B_t the discrete
/// ball average; nodes with Mf = 0 count as 0.
double tail_check(const GridFunction& f, const SpaceParams& params);

}  // namespace ballavg
