#include "ballavg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "ballavg/kernels.hpp"

namespace ballavg::analysis {

std::string to_string(Statistic s) {
  switch (s) {
    case Statistic::BallAverage: return "ball";
    case Statistic::HigherOrder: return "higher";
    case Statistic::FirstDifference: return "first_difference";
  }
  return "unknown";
}

Statistic parse_statistic(const std::string& text) {
  if (text == "ball") return Statistic::BallAverage;
  if (text == "higher") return Statistic::HigherOrder;
  if (text == "first_difference" || text == "diff") return Statistic::FirstDifference;
  throw DomainError("unknown slope statistic '" + text + "' (ball, higher, first_difference)");
}

namespace {

double aggregate(const GridFunction& v, const SlopeOptions& o) {
  if (o.mask.empty()) return lp_norm(v, o.p);
  std::vector<double> picked;
  picked.reserve(o.mask.size());
  for (std::size_t i : o.mask) picked.push_back(v[i]);
  if (o.p == kInf) return lp_norm(picked, 1.0, kInf);
  // Normalized so that the mask carries unit mass.
  return lp_norm(picked, 1.0 / static_cast<double>(picked.size()), o.p);
}

GridFunction first_difference_sup(const GridFunction& f, double t) {
  const BallNeighbourhood ball(f.dim(), f.samples_per_axis(), t);
  std::vector<double> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    double m = 0.0;
    ball.for_each(x, [&](std::size_t y) { m = std::max(m, std::abs(f[x] - f[y])); });
    out[x] = m;
  }
  return GridFunction(f.dim(), f.samples_per_axis(), std::move(out));
}

}  // namespace

SlopeFit estimate_alpha(const GridFunction& f, const ScaleLadder& ladder,
                        const SlopeOptions& options) {
  if (ladder.rung_count() < 4) throw DomainError("slope fit needs at least 4 rungs");
  if (!(options.p >= 1.0)) throw DomainError("slope aggregate needs p >= 1");
  for (std::size_t i : options.mask) {
    if (i >= f.size()) throw DomainError("slope mask index outside the grid");
  }
  const double factor = options.statistic == Statistic::HigherOrder ? options.ell : 1.0;
  ladder.require_admissible(f.samples_per_axis(), factor);

  SlopeFit fit;
  fit.statistic = to_string(options.statistic);
  if (options.statistic == Statistic::HigherOrder) fit.statistic += std::to_string(options.ell);
  for (int k : ladder.rungs()) {
    const double t = ScaleLadder::scale(k);
    GridFunction v = GridFunction::constant(f.dim(), f.samples_per_axis(), 0.0);
    switch (options.statistic) {
      case Statistic::BallAverage:
        v = kernels::ball_difference(f, t);
        break;
      case Statistic::HigherOrder:
        v = kernels::higher_difference(f, t, options.ell);
        break;
      case Statistic::FirstDifference:
        v = first_difference_sup(f, t);
        break;
    }
    fit.rungs.push_back(k);
    fit.scales.push_back(t);
    fit.values.push_back(aggregate(v, options));
  }

  const bool any_zero =
      std::any_of(fit.values.begin(), fit.values.end(), [](double v) { return v == 0.0; });
  const double peak = *std::max_element(fit.values.begin(), fit.values.end());
  // Spectral rounding leaves ~1e−16·‖f‖ on constants; treat that as zero.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(lp_norm(f, kInf), std::numeric_limits<double>::min());
  if (any_zero || peak <= floor) {
    fit.flat = true;
    return fit;
  }

  const std::size_t m = fit.rungs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = -static_cast<double>(fit.rungs[i]);
    const double y = std::log2(fit.values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dm = static_cast<double>(m);
  fit.alpha_hat = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
  fit.intercept = (sy - fit.alpha_hat * sx) / dm;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = std::log2(fit.values[i]) -
                     (fit.intercept - fit.alpha_hat * static_cast<double>(fit.rungs[i]));
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / dm);
  return fit;
}

std::string SlopeFit::to_text() const {
  std::ostringstream os;
  os << "statistic=" << statistic << '\n';
  if (flat) {
    os << "result=flat\n";
  } else {
    os << "alpha_hat=" << io::format_number(alpha_hat) << '\n'
       << "residual=" << io::format_number(residual) << '\n';
  }
  os << "# k t value\n";
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    os << rungs[i] << ' ' << io::format_number(scales[i]) << ' ' << io::format_number(values[i])
       << '\n';
  }
  return os.str();
}

std::vector<CorpusMember> standard_corpus() {
  using synth::Kind;
  std::vector<CorpusMember> out;
  auto add = [&out](std::string name, synth::GeneratorSpec s) {
    s.samples_per_axis = 512;
    out.push_back({std::move(name), s});
  };
  synth::GeneratorSpec s;
  s.kind = Kind::Weierstrass;
  s.alpha0 = 0.9;
  s.terms = 7;
  add("weierstrass_0.9", s);
  s.alpha0 = 1.5;
  add("weierstrass_1.5", s);
  s = {};
  s.kind = Kind::Bandlimited;
  s.max_mode = 32;
  add("bandlimited_32", s);
  s = {};
  s.kind = Kind::Cusp;
  s.alpha0 = 0.9;
  add("cusp_0.9", s);
  s = {};
  s.kind = Kind::Gaussian;
  s.width = 0.05;
  add("gaussian_0.05", s);
  s = {};
  s.kind = Kind::PolyPatch;
  s.degree = 2;
  add("poly_2", s);
  return out;
}

std::vector<CorpusMember> parse_manifest(const std::string& text) {
  std::vector<CorpusMember> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto kv = io::KeyValues::parse(line);
    if (kv.empty()) continue;
    io::KeyValues spec;
    for (const auto& [k, v] : kv.entries()) {
      if (k != "name") spec.set(k, v);
    }
    if (!spec.contains("N")) spec.set("N", 512);
    const auto gs = synth::GeneratorSpec::from_key_values(spec);
    out.push_back({kv.get_or("name", synth::to_string(gs.kind) + std::to_string(out.size())), gs});
  }
  if (out.empty()) throw DomainError("corpus manifest is empty");
  return out;
}

namespace {

struct Functional {
  std::string name;
  std::function<double(const GridFunction&, int)> eval;  // (f, N) -> norm
};

std::vector<Functional> study_functionals(const StudyOptions& o) {
  const auto& P = o.params;
  std::vector<Functional> out;
  auto ladder = [&o](int n, int extra = 0) { return make_ladder(n, o.k_min + extra); };
  out.push_back({"g", [=](const GridFunction& f, int n) { return g_functional(f, P, ladder(n)).norm; }});
  out.push_back({"area", [=](const GridFunction& f, int n) {
                   return area_functional(f, P, ladder(n), P.q, 1.0).norm;
                 }});
  if (!P.q_is_infinite() && o.r_inner < P.q) {
    out.push_back({"area_r", [=](const GridFunction& f, int n) {
                     return area_functional(f, P, ladder(n), o.r_inner, 1.0).norm;
                   }});
  }
  if (o.beta > 1.0) {
    const int shift = static_cast<int>(std::ceil(std::log2(o.beta) - 1e-12));
    out.push_back({"area_dilated", [=](const GridFunction& f, int n) {
                     return area_functional(f, P, ladder(n, shift), P.q, o.beta).norm;
                   }});
  }
  if (!P.q_is_infinite()) {
    out.push_back({"gstar", [=](const GridFunction& f, int n) {
                     return gstar_functional(f, P, ladder(n), o.lambda).norm;
                   }});
  }
  if (P.alpha < 1.0) {
    out.push_back({"difference", [=](const GridFunction& f, int n) {
                     return difference_functional(f, P, ladder(n)).norm;
                   }});
  }
  out.push_back({"fourier_tl_alt", [=](const GridFunction& f, int n) {
                   return fourier_tl_norm(f, P, ladder(n), kernels::build_alternate_filter_bank()).norm;
                 }});
  return out;
}

}  // namespace

EquivalenceReport equivalence_study(const std::vector<CorpusMember>& corpus,
                                    const StudyOptions& options) {
  if (corpus.empty()) throw DomainError("equivalence study needs a nonempty corpus");
  if (options.resolutions.empty()) throw DomainError("equivalence study needs resolutions");
  options.params.validate();
  EquivalenceReport rep;
  rep.resolutions = options.resolutions;
  const auto functionals = study_functionals(options);
  for (const auto& fn : functionals) rep.functionals.push_back(fn.name);
  const auto bank = kernels::build_filter_bank();

  for (const auto& member : corpus) {
    bool vanishes = true;
    std::vector<StudyRow> rows;
    for (int n : options.resolutions) {
      const auto f = synth::generate(member.spec.at_resolution(n));
      const auto ladder = make_ladder(n, options.k_min);
      const auto ref = fourier_tl_norm(f, options.params, ladder, bank);
      // Constants have no difference term: every ratio degenerates to ‖f‖_p
      // over ‖Φ*f‖_p and carries no information.
      if (ref.field_norm > 1e-12 * std::max(ref.lp_term, 1e-300)) vanishes = false;
      for (const auto& fn : functionals) {
        const double v = fn.eval(f, n);
        rows.push_back({member.name, n, fn.name, v, ref.norm, v / ref.norm});
      }
    }
    if (vanishes) {
      rep.excluded.push_back(member.name);
      rep.notices.push_back("excluded '" + member.name +
                            "': difference terms vanish (constant function)");
      continue;
    }
    rep.rows.insert(rep.rows.end(), rows.begin(), rows.end());
  }

  for (const auto& fn : rep.functionals) {
    double lo = kInf, hi = 0.0, drift = 0.0;
    for (const auto& row : rep.rows) {
      if (row.functional != fn) continue;
      lo = std::min(lo, row.ratio);
      hi = std::max(hi, row.ratio);
    }
    std::vector<std::string> members;
    for (const auto& row : rep.rows) {
      if (std::find(members.begin(), members.end(), row.member) == members.end()) {
        members.push_back(row.member);
      }
    }
    for (const auto& m : members) {
      const double a = rep.ratio(m, rep.resolutions.front(), fn, "fourier_tl");
      const double b = rep.ratio(m, rep.resolutions.back(), fn, "fourier_tl");
      drift = std::max(drift, std::abs(b / a - 1.0));
    }
    if (!rep.rows.empty()) {
      rep.bracket[fn] = {lo, hi};
      rep.drift[fn] = drift;
    }
  }
  return rep;
}

bool EquivalenceReport::all_finite() const {
  return std::all_of(rows.begin(), rows.end(), [](const StudyRow& r) {
    return std::isfinite(r.ratio) && r.ratio > 0.0;
  });
}

double EquivalenceReport::max_drift() const {
  double m = 0.0;
  for (const auto& [k, v] : drift) m = std::max(m, v);
  return m;
}

double EquivalenceReport::ratio(const std::string& member, int n, const std::string& a,
                                const std::string& b) const {
  auto norm_of = [&](const std::string& fn) {
    for (const auto& r : rows) {
      if (r.member != member || r.samples_per_axis != n) continue;
      if (fn == "fourier_tl") return r.reference;
      if (r.functional == fn) return r.norm;
    }
    throw DomainError("no norm recorded for '" + member + "', N=" + std::to_string(n) +
                      ", functional '" + fn + "'");
  };
  return norm_of(a) / norm_of(b);
}

std::string EquivalenceReport::to_table() const {
  std::ostringstream os;
  os << std::left << std::setw(18) << "member" << std::setw(7) << "N";
  for (const auto& fn : functionals) os << std::setw(16) << fn;
  os << '\n';
  std::vector<std::pair<std::string, int>> keys;
  for (const auto& r : rows) {
    const std::pair<std::string, int> key{r.member, r.samples_per_axis};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  os << std::setprecision(5);
  for (const auto& [m, n] : keys) {
    os << std::setw(18) << m << std::setw(7) << n;
    for (const auto& fn : functionals) os << std::setw(16) << ratio(m, n, fn, "fourier_tl");
    os << '\n';
  }
  os << std::setw(25) << "bracket min";
  for (const auto& fn : functionals) os << std::setw(16) << (bracket.count(fn) ? bracket.at(fn).first : 0.0);
  os << '\n' << std::setw(25) << "bracket max";
  for (const auto& fn : functionals) os << std::setw(16) << (bracket.count(fn) ? bracket.at(fn).second : 0.0);
  os << '\n' << std::setw(25) << "drift";
  for (const auto& fn : functionals) os << std::setw(16) << (drift.count(fn) ? drift.at(fn) : 0.0);
  os << '\n';
  for (const auto& n : notices) os << "# " << n << '\n';
  return os.str();
}

std::string EquivalenceReport::to_csv() const {
  std::ostringstream os;
  os << "member,N,functional,norm,fourier_tl,ratio\n";
  for (const auto& r : rows) {
    os << r.member << ',' << r.samples_per_axis << ',' << r.functional << ','
       << io::format_number(r.norm) << ',' << io::format_number(r.reference) << ','
       << io::format_number(r.ratio) << '\n';
  }
  return os.str();
}

}  // namespace ballavg::analysis
