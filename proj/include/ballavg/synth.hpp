#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ballavg/grid.hpp"
#include "ballavg/io.hpp"

namespace ballavg::synth {

enum class Kind { Constant, SingleMode, Bandlimited, Weierstrass, PolyPatch, Cusp, Gaussian };

std::string to_string(Kind kind);
Kind parse_kind(const std::string& text);

/// One cosine term amplitude·cos(2π k·x + phase).
struct Mode {
  Index k{0, 0, 0};
  double amplitude = 1.0;
  double phase = 0.0;
};

/// Description of a test function; only the fields relevant to `kind` are
/// read.
struct GeneratorSpec {
  Kind kind = Kind::Constant;
  int dim = 1;
  int samples_per_axis = 256;

  double value = 1.0;           // constant
  Index mode{1, 0, 0};          // single mode
  double amplitude = 1.0;       // single mode
  double phase = 0.0;           // single mode
  int max_mode = 8;             // bandlimited: modes with 0 <= k_a <= max_mode
  double decay = 1.0;           // bandlimited: amplitude ~ (1+|k|)^{-decay}
  double alpha0 = 0.5;          // weierstrass, cusp
  int terms = 6;                // weierstrass: K
  std::uint64_t seed = 1;       // bandlimited, weierstrass phases
  bool random_phases = true;    // weierstrass: false puts every θ_j at 0
  int degree = 2;               // poly patch
  double center = 0.5;          // poly patch, cusp, gaussian
  double half_width = 0.3;      // poly patch window
  double edge = 0.015;          // poly patch window softness (erf width)
  double width = 0.05;          // gaussian

  /// Throws DomainError naming the violated constraint (aliasing guard,
  /// α₀ range, window fits inside one period, ...).
  void validate() const;

  io::KeyValues to_key_values() const;
  static GeneratorSpec from_key_values(const io::KeyValues& kv);

  /// Same function on a different grid size.
  GeneratorSpec at_resolution(int samples_per_axis) const;
};

/// Cosine expansion for the trigonometric kinds (constant, single mode,
/// bandlimited, Weierstrass). Throws for the other kinds.
std::vector<Mode> modes(const GeneratorSpec& spec);

bool is_trigonometric(Kind kind);

/// Samples the described function exactly at the grid nodes.
GridFunction generate(const GeneratorSpec& spec);

/// B_t f in closed form, mode by mode, via Î(2πt|k|). Uses only the
/// multiplier profile, never the FFT engine. Supported for trigonometric
/// kinds.
GridFunction analytic_ball_average(const GeneratorSpec& spec, double t);

/// Σ |amplitude| over the cosine expansion: a sup-norm bound.
double sup_bound(const GeneratorSpec& spec);

/// Nodes where a polynomial patch equals its polynomial to rounding, shrunk by
/// `margin` on each side so that balls of that radius stay inside.
std::vector<std::size_t> patch_interior(const GeneratorSpec& spec, double margin);

/// Phases θ_j drawn from the seeded stream (uniform on [0, 2π)).
std::vector<double> seeded_phases(std::uint64_t seed, int count);

}  // namespace ballavg::synth
