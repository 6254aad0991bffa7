#pragma once

#include <string>
#include <vector>

#include "ballavg/grid.hpp"
#include "ballavg/io.hpp"

namespace ballavg {

/// Discrete Hardy-Littlewood maximal function over a finite window set: the
/// node itself, centred discrete balls of each listed radius, and the whole
/// torus.
struct MaximalField {
  GridFunction values;
  std::vector<double> radii;
};

MaximalField hl_maximal(const GridFunction& f, const ScaleLadder& ladder);
MaximalField hl_maximal(const GridFunction& f, std::vector<double> radii);

/// Which pointwise inequality a gradient candidate certifies. D_t denotes
/// |f − B_{Ct} f| and stat_{B(x,t)} one of sup, r-mean or mean over the ball.
enum class Variant {
  SupPoint,   ///< D_t(x) ≤ C̃ t^α g(x)
  SupNbhd,    ///< D_t(x) ≤ C̃ t^α g(y) for all y ∈ B(x, ct)
  BallSup,    ///< sup_{B(x,t)} D_t ≤ C̃ t^α avg_{B(x,ct)} g
  BallAvg,    ///< avg_{B(x,t)} D_t ≤ C̃ t^α avg_{B(x,ct)} g
  BallRavg,   ///< [avg_{B(x,t)} D_t^r]^{1/r} ≤ C̃ t^α avg_{B(x,ct)} g
  PointCtr,   ///< stat_{B(x,t)} D_t ≤ C̃ t^α g(x), stat picked by r (∞: sup)
  Hajlasz,    ///< |f(x) − f(y)| ≤ d(x,y)^α (g(x) + g(y))
};

std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

struct GradientConstants {
  double c = 1.0;       ///< neighbourhood / averaging radius factor
  double C = 1.0;       ///< dilation of the ball average inside D_t
  double Ctilde = 1.0;  ///< multiplicative constant on the right-hand side
  double r = 2.0;       ///< inner exponent for BallRavg and PointCtr
};

struct GradientCandidate {
  GridFunction g;
  Variant variant;
  double alpha;
  GradientConstants constants;

  io::KeyValues header() const;
};

/// Canonical (smallest) g for the variant over the ladder. For Hajlasz the
/// ladder is unused and the pairwise certificate is returned.
GradientCandidate extract_gradient(const GridFunction& f, double alpha, const ScaleLadder& ladder,
                                   Variant variant, const GradientConstants& constants = {});

/// Outcome of checking one pointwise inequality at every node and rung.
struct InequalityCheck {
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;  ///< largest lhs / rhs seen
  bool passed() const { return violations == 0; }
};

/// Checks the variant's defining inequality for `cand.g`.
InequalityCheck check_defining_inequality(const GridFunction& f, const GradientCandidate& cand,
                                          const ScaleLadder& ladder);

struct ImplicationReport {
  std::vector<InequalityCheck> checks;
  std::size_t total_violations() const;
  bool passed() const { return total_violations() == 0; }
  std::string to_text() const;
};

/// Builds the majorants the implication proofs construct from `cand` and
/// checks each resulting inequality at every node and rung. `q` is the
/// exponent of the q-mean and maximal majorants (q ≥ 1).
ImplicationReport verify_implications(const GridFunction& f, const GradientCandidate& cand,
                                      const ScaleLadder& ladder, double q = 2.0);

/// Brute-force check of |f(x) − f(y)| ≤ d(x,y)^α (g(x) + g(y)) over all pairs.
/// Limited to N ≤ 512 in 1D, 64 in 2D, 16 in 3D.
InequalityCheck hajlasz_verify(const GridFunction& f, const GridFunction& g, double alpha);

/// g*(x) = ½ sup_{y≠x} |f(x) − f(y)| / d(x,y)^α.
GridFunction hajlasz_certificate(const GridFunction& f, double alpha);

/// Reads a candidate from an annotated GF1 stream (header keys variant,
/// alpha, c, C, Ctilde, r) and checks its defining inequality; throws
/// NumericalError if it does not hold.
GradientCandidate import_gradient(std::istream& is, const GridFunction& f,
                                  const ScaleLadder& ladder);

}  // namespace ballavg
