// Command-line front end: synth, norm, equiv, slope, gradient, maximal, check.
//
// Exit codes: 0 success, 2 usage or domain error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ballavg/analysis.hpp"
#include "ballavg/checks.hpp"
#include "ballavg/functionals.hpp"
#include "ballavg/io.hpp"
#include "ballavg/kernels.hpp"
#include "ballavg/pointwise.hpp"
#include "ballavg/synth.hpp"

namespace {

using namespace ballavg;

constexpr int kUsage = 2;
constexpr int kNumerical = 3;

// Reads either a bare GF1 file or one with a key=value header.
GridFunction load_input(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open '" + path + "'");
  return io::read_annotated(is).second;
}

struct ParamArgs {
  double alpha = 0.5;
  double p = 2.0;
  std::string q = "2";
  int k_min = 2;

  void add(CLI::App* app) {
    app->add_option("--alpha", alpha, "smoothness order");
    app->add_option("--p", p, "integrability exponent, in (1, inf)");
    app->add_option("--q", q, "secondary exponent, in (1, inf] ('inf' allowed)");
    app->add_option("--k-min", k_min, "coarsest ladder rung, t = 2^-k_min");
  }
  SpaceParams params() const {
    SpaceParams s;
    s.alpha = alpha;
    s.p = p;
    s.q = parse_exponent(q);
    s.validate();
    return s;
  }
};

// -- synth ------------------------------------------------------------------

struct SynthArgs {
  synth::GeneratorSpec spec;
  std::string kind = "weierstrass";
  std::string phases = "seeded";
  std::string out;
  long seed = 1;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  auto* c = app.add_subcommand("synth", "generate a test function as a GF1 file");
  c->add_option("--kind", a.kind,
                "constant, mode, bandlimited, weierstrass, poly, cusp, gaussian")->capture_default_str();
  c->add_option("--dim", a.spec.dim);
  c->add_option("--N", a.spec.samples_per_axis);
  c->add_option("--value", a.spec.value);
  c->add_option("--k0", a.spec.mode[0]);
  c->add_option("--k1", a.spec.mode[1]);
  c->add_option("--k2", a.spec.mode[2]);
  c->add_option("--amplitude", a.spec.amplitude);
  c->add_option("--phase", a.spec.phase);
  c->add_option("--max-mode", a.spec.max_mode);
  c->add_option("--decay", a.spec.decay);
  c->add_option("--alpha0", a.spec.alpha0);
  c->add_option("--terms", a.spec.terms);
  c->add_option("--seed", a.seed);
  c->add_option("--phases", a.phases, "seeded or zero");
  c->add_option("--degree", a.spec.degree);
  c->add_option("--center", a.spec.center);
  c->add_option("--half-width", a.spec.half_width);
  c->add_option("--edge", a.spec.edge);
  c->add_option("--width", a.spec.width);
  c->add_option("--out", a.out, "output path; stdout when omitted");
}

int run_synth(SynthArgs& a) {
  a.spec.kind = synth::parse_kind(a.kind);
  if (a.phases != "seeded" && a.phases != "zero") throw DomainError("--phases must be seeded or zero");
  a.spec.random_phases = a.phases == "seeded";
  if (a.seed < 0) throw DomainError("--seed must be nonnegative");
  a.spec.seed = static_cast<std::uint64_t>(a.seed);
  a.spec.validate();
  const auto f = synth::generate(a.spec);
  const auto meta = a.spec.to_key_values();
  if (a.out.empty()) {
    io::write_annotated(std::cout, meta, f);
  } else {
    std::ofstream os(a.out);
    if (!os) throw DomainError("cannot open '" + a.out + "' for writing");
    io::write_annotated(os, meta, f);
    meta.write(std::cout);
  }
  return 0;
}

// -- norm -------------------------------------------------------------------

struct NormArgs {
  std::string input;
  std::string functional = "g";
  ParamArgs params;
  std::string r;
  double beta = 1.0;
  double lambda = 2.0;
  std::string bank = "standard";
  std::string field_out;
};

void add_norm(CLI::App& app, NormArgs& a) {
  auto* c = app.add_subcommand("norm", "evaluate one functional on a GF1 file");
  c->add_option("--input", a.input)->required();
  c->add_option("--functional", a.functional, "g, area, gstar, fourier_tl, difference, tail")
      ->capture_default_str();
  a.params.add(c);
  c->add_option("--r", a.r, "inner exponent of the area functional (default q)");
  c->add_option("--beta", a.beta, "ball dilation of the area functional");
  c->add_option("--lambda", a.lambda, "g*_lambda decay exponent");
  c->add_option("--bank", a.bank, "filter bank for fourier_tl: standard or alternate");
  c->add_option("--field-out", a.field_out, "write the per-point field as GF1");
}

int run_norm(const NormArgs& a) {
  const auto f = load_input(a.input);
  const SpaceParams P = a.params.params();
  const auto ladder = make_ladder(f.samples_per_axis(), a.params.k_min);
  if (a.functional == "tail") {
    io::KeyValues kv;
    kv.set("functional", "tail");
    kv.set("ratio", tail_check(f, P));
    kv.write(std::cout);
    return 0;
  }
  NormReport rep = [&]() -> NormReport {
    if (a.functional == "g") return g_functional(f, P, ladder);
    if (a.functional == "area") {
      const double r = a.r.empty() ? P.q : parse_exponent(a.r);
      if (!(r >= 1.0 && r <= P.q)) {
        throw DomainError("the area characterization requires r in [1, q] (r < q for the inner "
                          "r-average form, r = q for the plain form)");
      }
      return area_functional(f, P, ladder, r, a.beta);
    }
    if (a.functional == "gstar") {
      if (P.q_is_infinite()) {
        throw DomainError("the g*_lambda characterization requires q in (1, inf); got q = inf");
      }
      if (!(a.lambda > 1.0)) throw DomainError("the g*_lambda characterization requires lambda > 1");
      return gstar_functional(f, P, ladder, a.lambda);
    }
    if (a.functional == "fourier_tl") {
      if (a.bank != "standard" && a.bank != "alternate") throw DomainError("--bank must be standard or alternate");
      const auto bank = a.bank == "standard" ? kernels::build_filter_bank()
                                             : kernels::build_alternate_filter_bank();
      return fourier_tl_norm(f, P, ladder, bank);
    }
    if (a.functional == "difference") return difference_functional(f, P, ladder);
    throw DomainError("unknown functional '" + a.functional + "'");
  }();
  if (a.functional == "gstar") {
    const double need = P.q / std::min(P.q, P.p);
    if (!(a.lambda > need)) {
      rep.warning = "hypothesis lambda > q/min(q,p) = " + io::format_number(need) +
                    " not met: the lower comparison is not covered";
    }
  }
  std::cout << rep.to_text();
  if (!a.field_out.empty()) io::save_gf1(a.field_out, rep.field);
  if (!std::isfinite(rep.norm)) return kNumerical;
  return 0;
}

// -- equiv ------------------------------------------------------------------

struct EquivArgs {
  std::string manifest;
  ParamArgs params;
  std::vector<int> resolutions{512, 1024};
  double lambda = 2.0;
  double beta = 2.0;
  double r = 1.0;
  std::string csv;
};

void add_equiv(CLI::App& app, EquivArgs& a) {
  auto* c = app.add_subcommand("equiv", "equivalence-ratio study over a corpus");
  c->add_option("--manifest", a.manifest, "corpus manifest; the standard corpus when omitted");
  a.params.add(c);
  c->add_option("--resolutions", a.resolutions, "grid sizes")->delimiter(',');
  c->add_option("--lambda", a.lambda);
  c->add_option("--beta", a.beta);
  c->add_option("--r", a.r, "inner exponent of the r < q area functional");
  c->add_option("--csv", a.csv, "write one CSV row per member x functional x resolution");
}

int run_equiv(const EquivArgs& a) {
  std::vector<analysis::CorpusMember> corpus;
  if (a.manifest.empty()) {
    corpus = analysis::standard_corpus();
  } else {
    std::ifstream is(a.manifest);
    if (!is) throw DomainError("cannot open '" + a.manifest + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    corpus = analysis::parse_manifest(ss.str());
  }
  analysis::StudyOptions o;
  o.params = a.params.params();
  o.resolutions = a.resolutions;
  o.k_min = a.params.k_min;
  o.lambda = a.lambda;
  o.beta = a.beta;
  o.r_inner = a.r;
  const auto rep = analysis::equivalence_study(corpus, o);
  std::cout << rep.to_table();
  if (!a.csv.empty()) {
    std::ofstream os(a.csv);
    if (!os) throw DomainError("cannot open '" + a.csv + "' for writing");
    os << rep.to_csv();
  }
  if (!rep.all_finite()) {
    std::cerr << "error: non-finite equivalence ratio\n";
    return kNumerical;
  }
  return 0;
}

// -- slope ------------------------------------------------------------------

struct SlopeArgs {
  std::string input;
  std::string statistic = "ball";
  int ell = 2;
  int k_min = 2;
  int k_max = -1;
  std::string p = "inf";
};

void add_slope(CLI::App& app, SlopeArgs& a) {
  auto* c = app.add_subcommand("slope", "fit the decay exponent of a difference statistic");
  c->add_option("--input", a.input)->required();
  c->add_option("--statistic", a.statistic, "ball, higher, first_difference")->capture_default_str();
  c->add_option("--ell", a.ell, "order of the higher statistic");
  c->add_option("--k-min", a.k_min);
  c->add_option("--k-max", a.k_max, "finest rung (default log2 N - 1)");
  c->add_option("--p", a.p, "aggregate over x: inf (sup) or an L^p exponent");
}

int run_slope(const SlopeArgs& a) {
  const auto f = load_input(a.input);
  ScaleLadder ladder = make_ladder(f.samples_per_axis(), a.k_min);
  if (a.k_max >= 0) ladder = ScaleLadder(a.k_min, a.k_max);
  analysis::SlopeOptions o;
  o.statistic = analysis::parse_statistic(a.statistic);
  o.ell = a.ell;
  o.p = parse_exponent(a.p);
  std::cout << analysis::estimate_alpha(f, ladder, o).to_text();
  return 0;
}

// -- gradient ---------------------------------------------------------------

struct GradientArgs {
  std::string input;
  double alpha = 0.5;
  double p = 2.0;
  std::string variant = "sup_point";
  GradientConstants k;
  std::string r = "2";
  int k_min = 2;
  double q = 2.0;
  std::string out;
  std::string import_path;
  bool verify = false;
};

void add_gradient(CLI::App& app, GradientArgs& a) {
  auto* c = app.add_subcommand("gradient", "extract or check a pointwise gradient");
  c->add_option("--input", a.input)->required();
  c->add_option("--alpha", a.alpha);
  c->add_option("--p", a.p, "exponent for the reported norms");
  c->add_option("--variant", a.variant,
                "sup_point, sup_nbhd, ball_sup, ball_avg, ball_ravg, point_ctr, hajlasz");
  c->add_option("--c", a.k.c, "neighbourhood radius factor");
  c->add_option("--C", a.k.C, "dilation inside f - B_{Ct} f");
  c->add_option("--Ctilde", a.k.Ctilde, "right-hand constant");
  c->add_option("--r", a.r, "inner exponent for ball_ravg / point_ctr ('inf' = sup)");
  c->add_option("--k-min", a.k_min);
  c->add_option("--q", a.q, "exponent of the q-mean and maximal majorants");
  c->add_option("--out", a.out, "write the candidate (header + GF1)");
  c->add_option("--import", a.import_path, "check a candidate file instead of extracting");
  c->add_flag("--verify", a.verify, "also check the implied inequalities");
}

int run_gradient(GradientArgs& a) {
  const auto f = load_input(a.input);
  const auto ladder = make_ladder(f.samples_per_axis(), a.k_min);
  a.k.r = parse_exponent(a.r);
  GradientCandidate cand = [&] {
    if (!a.import_path.empty()) {
      std::ifstream is(a.import_path);
      if (!is) throw DomainError("cannot open '" + a.import_path + "'");
      return import_gradient(is, f, ladder);
    }
    return extract_gradient(f, a.alpha, ladder, parse_variant(a.variant), a.k);
  }();
  auto kv = cand.header();
  kv.set("g_norm", lp_norm(cand.g, a.p));
  kv.set("f_norm", lp_norm(f, a.p));
  kv.set("norm", lp_norm(f, a.p) + lp_norm(cand.g, a.p));
  kv.write(std::cout);
  bool ok = true;
  if (a.verify) {
    const auto rep = verify_implications(f, cand, ladder, a.q);
    std::cout << rep.to_text();
    ok = rep.passed();
  }
  if (!a.out.empty()) {
    std::ofstream os(a.out);
    if (!os) throw DomainError("cannot open '" + a.out + "' for writing");
    io::write_annotated(os, cand.header(), cand.g);
  }
  return ok ? 0 : kNumerical;
}

// -- maximal ----------------------------------------------------------------

struct MaximalArgs {
  std::string input;
  int k_min = 2;
  double p = 2.0;
  std::string out;
};

void add_maximal(CLI::App& app, MaximalArgs& a) {
  auto* c = app.add_subcommand("maximal", "discrete Hardy-Littlewood maximal function");
  c->add_option("--input", a.input)->required();
  c->add_option("--k-min", a.k_min);
  c->add_option("--p", a.p);
  c->add_option("--out", a.out, "write Mf as GF1");
}

int run_maximal(const MaximalArgs& a) {
  const auto f = load_input(a.input);
  const auto m = hl_maximal(f, make_ladder(f.samples_per_axis(), a.k_min));
  io::KeyValues kv;
  kv.set("windows", static_cast<long>(m.radii.size() + 2));
  kv.set("f_norm", lp_norm(f, a.p));
  kv.set("Mf_norm", lp_norm(m.values, a.p));
  kv.set("ratio", lp_norm(m.values, a.p) / lp_norm(f, a.p));
  kv.write(std::cout);
  if (!a.out.empty()) io::save_gf1(a.out, m.values);
  return 0;
}

// -- check ------------------------------------------------------------------

struct CheckArgs {
  std::vector<std::string> suites;
  checks::CheckOptions options;
};

void add_check(CLI::App& app, CheckArgs& a) {
  auto* c = app.add_subcommand("check", "run the invariant suites");
  c->add_option("--suite", a.suites, "suite name (repeatable); all when omitted");
  c->add_option("--trials", a.options.trials, "random fields for lemma23");
  c->add_option("--seed", a.options.seed);
  c->add_flag("--inject-fault", a.options.inject_fault, "perturb the ball multiplier (harness self-test)");
}

int run_check(const CheckArgs& a) {
  const auto& names = a.suites.empty() ? checks::suite_names() : a.suites;
  bool all = true;
  for (const auto& n : names) {
    const auto res = checks::run_suite(n, a.options);
    std::cout << res.to_text();
    all = all && res.passed;
  }
  std::cout << (all ? "all suites passed\n" : "some suites failed\n");
  return all ? 0 : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ball-average difference functionals on periodic grids"};
  app.require_subcommand(1);
  SynthArgs synth_args;
  NormArgs norm_args;
  EquivArgs equiv_args;
  SlopeArgs slope_args;
  GradientArgs gradient_args;
  MaximalArgs maximal_args;
  CheckArgs check_args;
  add_synth(app, synth_args);
  add_norm(app, norm_args);
  add_equiv(app, equiv_args);
  add_slope(app, slope_args);
  add_gradient(app, gradient_args);
  add_maximal(app, maximal_args);
  add_check(app, check_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "synth") return run_synth(synth_args);
    if (cmd == "norm") return run_norm(norm_args);
    if (cmd == "equiv") return run_equiv(equiv_args);
    if (cmd == "slope") return run_slope(slope_args);
    if (cmd == "gradient") return run_gradient(gradient_args);
    if (cmd == "maximal") return run_maximal(maximal_args);
    if (cmd == "check") return run_check(check_args);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
