#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "ballavg/analysis.hpp"
#include "ballavg/checks.hpp"
#include "ballavg/functionals.hpp"
#include "ballavg/kernels.hpp"
#include "ballavg/pointwise.hpp"
#include "ballavg/synth.hpp"

namespace py = pybind11;
using namespace ballavg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

GridFunction to_grid(const Array& a) {
  const int dim = static_cast<int>(a.ndim());
  if (dim < 1 || dim > 3) throw DomainError("arrays must have 1, 2 or 3 axes");
  const auto n = a.shape(0);
  for (int i = 1; i < dim; ++i)
    if (a.shape(i) != n) throw DomainError("arrays must have the same length on every axis");
  return GridFunction(dim, static_cast<int>(n), std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const GridFunction& f) {
  std::vector<py::ssize_t> shape(f.dim(), f.samples_per_axis());
  Array out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

SpaceParams space(double alpha, double p, const py::object& q) {
  SpaceParams s;
  s.alpha = alpha;
  s.p = p;
  s.q = parse_exponent(py::str(q));  // float, int or "inf"
  return s;
}

py::dict report(const NormReport& r) {
  py::dict d;
  const auto kv = r.to_key_values();
  for (const auto& [k, v] : kv.entries()) d[py::str(k)] = v;
  d["norm"] = r.norm;
  d["lp_term"] = r.lp_term;
  d["field_norm"] = r.field_norm;
  d["field"] = to_array(r.field);
  return d;
}

synth::GeneratorSpec spec_from_kwargs(const std::string& kind, const py::kwargs& kw) {
  io::KeyValues kv;
  kv.set("kind", kind);
  for (const auto& item : kw) kv.set(py::str(item.first), std::string(py::str(item.second)));
  return synth::GeneratorSpec::from_key_values(kv);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ball-average smoothness functionals on periodic grids";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("ball_multiplier", &kernels::ball_multiplier, py::arg("dim"), py::arg("s"));
  m.def("a_function", &kernels::a_function, py::arg("dim"), py::arg("s"));
  m.def("higher_multiplier", &kernels::higher_multiplier, py::arg("dim"), py::arg("ell"), py::arg("s"));

  m.def("apply_ball_average", [](const Array& f, double t) { return to_array(kernels::apply_ball_average(to_grid(f), t)); },
        py::arg("f"), py::arg("t"));
  m.def("apply_higher_average",
        [](const Array& f, double t, int ell) { return to_array(kernels::apply_higher_average(to_grid(f), t, ell)); },
        py::arg("f"), py::arg("t"), py::arg("ell"));
  m.def("validate_direct", [](const Array& f, double t) { return to_array(kernels::validate_direct(to_grid(f), t)); },
        py::arg("f"), py::arg("t"));
  m.def("apply_filter",
        [](const Array& f, int rung, bool alternate) {
          const auto bank = alternate ? kernels::build_alternate_filter_bank() : kernels::build_filter_bank();
          const auto g = to_grid(f);
          return to_array(rung == 0 ? kernels::apply_base_filter(g, bank) : kernels::apply_filter(g, bank, rung));
        },
        py::arg("f"), py::arg("rung"), py::arg("alternate") = false,
        "Rung 0 is the base filter Phi.");
  m.def("lp_norm", [](const Array& f, const std::string& p) { return lp_norm(to_grid(f), parse_exponent(p)); },
        py::arg("f"), py::arg("p") = "2");

  m.def("generate", [](const std::string& kind, const py::kwargs& kw) { return to_array(synth::generate(spec_from_kwargs(kind, kw))); },
        py::arg("kind"), "Test function; keyword arguments as in the synth command (N, dim, alpha0, ...).");
  m.def("analytic_ball_average",
        [](const std::string& kind, double t, const py::kwargs& kw) {
          return to_array(synth::analytic_ball_average(spec_from_kwargs(kind, kw), t));
        },
        py::arg("kind"), py::arg("t"));

  m.def("norm",
        [](const Array& a, const std::string& functional, double alpha, double p, const py::object& q, int k_min,
           py::object r, double beta, double lambda) {
          const auto f = to_grid(a);
          const auto P = space(alpha, p, q);
          const auto ladder = make_ladder(f.samples_per_axis(), k_min);
          if (functional == "g") return report(g_functional(f, P, ladder));
          if (functional == "area")
            return report(area_functional(f, P, ladder, r.is_none() ? P.q : r.cast<double>(), beta));
          if (functional == "gstar") return report(gstar_functional(f, P, ladder, lambda));
          if (functional == "difference") return report(difference_functional(f, P, ladder));
          if (functional == "fourier_tl") return report(fourier_tl_norm(f, P, ladder, kernels::build_filter_bank()));
          throw DomainError("unknown functional '" + functional + "'");
        },
        py::arg("f"), py::arg("functional") = "g", py::arg("alpha") = 0.5, py::arg("p") = 2.0, py::arg("q") = 2.0,
        py::arg("k_min") = 2, py::arg("r") = py::none(), py::arg("beta") = 1.0, py::arg("lambda_") = 2.0);

  m.def("tail_check",
        [](const Array& f, double alpha) {
          SpaceParams P;
          P.alpha = alpha;
          return tail_check(to_grid(f), P);
        },
        py::arg("f"), py::arg("alpha") = 0.5);

  m.def("estimate_alpha",
        [](const Array& a, const std::string& statistic, int k_min, int ell) {
          const auto f = to_grid(a);
          analysis::SlopeOptions o;
          o.statistic = analysis::parse_statistic(statistic);
          o.ell = ell;
          const auto fit = analysis::estimate_alpha(f, make_ladder(f.samples_per_axis(), k_min), o);
          py::dict d;
          d["alpha_hat"] = fit.alpha_hat;
          d["intercept"] = fit.intercept;
          d["residual"] = fit.residual;
          d["flat"] = fit.flat;
          d["rungs"] = fit.rungs;
          d["values"] = fit.values;
          return d;
        },
        py::arg("f"), py::arg("statistic") = "ball", py::arg("k_min") = 2, py::arg("ell") = 2);

  m.def("hl_maximal",
        [](const Array& a, int k_min) {
          const auto f = to_grid(a);
          return to_array(hl_maximal(f, make_ladder(f.samples_per_axis(), k_min)).values);
        },
        py::arg("f"), py::arg("k_min") = 2);

  m.def("extract_gradient",
        [](const Array& a, double alpha, const std::string& variant, int k_min, bool verify) {
          const auto f = to_grid(a);
          const auto ladder = make_ladder(f.samples_per_axis(), k_min);
          const auto cand = extract_gradient(f, alpha, ladder, parse_variant(variant));
          py::dict d;
          d["g"] = to_array(cand.g);
          d["violations"] = check_defining_inequality(f, cand, ladder).violations;
          if (verify) d["implied_violations"] = verify_implications(f, cand, ladder).total_violations();
          return d;
        },
        py::arg("f"), py::arg("alpha"), py::arg("variant") = "sup_point", py::arg("k_min") = 2,
        py::arg("verify") = false);

  m.def("equivalence_study",
        [](double alpha, double p, const py::object& q, std::vector<int> resolutions) {
          analysis::StudyOptions o;
          o.params = space(alpha, p, q);
          o.resolutions = std::move(resolutions);
          const auto rep = analysis::equivalence_study(analysis::standard_corpus(), o);
          py::list rows;
          for (const auto& r : rep.rows) {
            py::dict d;
            d["member"] = r.member;
            d["N"] = r.samples_per_axis;
            d["functional"] = r.functional;
            d["norm"] = r.norm;
            d["reference"] = r.reference;
            d["ratio"] = r.ratio;
            rows.append(d);
          }
          py::dict d;
          d["rows"] = rows;
          d["drift"] = rep.drift;
          d["all_finite"] = rep.all_finite();
          return d;
        },
        py::arg("alpha") = 0.9, py::arg("p") = 2.0, py::arg("q") = 2.0,
        py::arg("resolutions") = std::vector<int>{512, 1024});

  m.def("suite_names", &checks::suite_names);
  m.def("run_suite",
        [](const std::string& name, int trials, bool inject_fault) {
          checks::CheckOptions o;
          o.trials = trials;
          o.inject_fault = inject_fault;
          const auto r = checks::run_suite(name, o);
          py::dict d;
          d["passed"] = r.passed;
          d["details"] = r.details;
          d["measured"] = r.measured;
          return d;
        },
        py::arg("name"), py::arg("trials") = 100, py::arg("inject_fault") = false);
}
