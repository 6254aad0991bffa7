#pragma once

#include <map>
#include <string>
#include <vector>

#include "ballavg/functionals.hpp"
#include "ballavg/grid.hpp"
#include "ballavg/synth.hpp"

namespace ballavg::analysis {

enum class Statistic {
  BallAverage,      ///< |f − B_t f|
  HigherOrder,      ///< |f − B_{ℓ,t} f|
  FirstDifference,  ///< sup_{y∈B(x,t)} |f(x) − f(y)|
};

std::string to_string(Statistic s);
Statistic parse_statistic(const std::string& text);

struct SlopeOptions {
  Statistic statistic = Statistic::BallAverage;
  int ell = 2;        ///< order for HigherOrder
  double p = kInf;    ///< aggregate over x: sup norm by default, L^p otherwise
  std::vector<std::size_t> mask;  ///< nodes to aggregate over; empty means all
};

struct SlopeFit {
  std::string statistic;
  std::vector<int> rungs;
  std::vector<double> scales;
  std::vector<double> values;
  double alpha_hat = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS of the log2 fit residuals
  bool flat = false;      ///< statistic identically zero: no fit

  std::string to_text() const;
};

/// Least-squares slope of log2(statistic at t_k) against −k over every rung.
/// Needs at least four rungs.
SlopeFit estimate_alpha(const GridFunction& f, const ScaleLadder& ladder,
                        const SlopeOptions& options = {});

struct CorpusMember {
  std::string name;
  synth::GeneratorSpec spec;
};

/// The six 1D test functions used by the equivalence studies.
std::vector<CorpusMember> standard_corpus();

/// Parses a manifest: one member per line, `name=<id> kind=<kind> key=value ...`.
std::vector<CorpusMember> parse_manifest(const std::string& text);

struct StudyOptions {
  SpaceParams params;
  std::vector<int> resolutions{512, 1024};
  int k_min = 2;
  double lambda = 2.0;   ///< g*_λ
  double beta = 2.0;     ///< dilated area functional
  double r_inner = 1.0;  ///< inner exponent of the r < q area functional
};

struct StudyRow {
  std::string member;
  int samples_per_axis;
  std::string functional;
  double norm;
  double reference;  ///< fourier_tl_norm with the standard bank
  double ratio;      ///< norm / reference
};

struct EquivalenceReport {
  std::vector<std::string> functionals;
  std::vector<int> resolutions;
  std::vector<StudyRow> rows;
  std::vector<std::string> excluded;  ///< members whose difference terms vanish
  std::vector<std::string> notices;
  /// functional -> (min ratio, max ratio) over members and resolutions
  std::map<std::string, std::pair<double, double>> bracket;
  /// functional -> max over members of |ratio(N_last)/ratio(N_first) − 1|
  std::map<std::string, double> drift;

  bool all_finite() const;
  double max_drift() const;
  /// norm_a / norm_b for one member and resolution.
  double ratio(const std::string& member, int samples_per_axis, const std::string& a,
               const std::string& b) const;
  std::string to_table() const;
  std::string to_csv() const;
};

EquivalenceReport equivalence_study(const std::vector<CorpusMember>& corpus,
                                    const StudyOptions& options);

}  // namespace ballavg::analysis
