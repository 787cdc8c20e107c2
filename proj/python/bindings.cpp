#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgdm/config.hpp"
#include "sgdm/diagnostics.hpp"
#include "sgdm/errors.hpp"
#include "sgdm/experiment.hpp"
#include "sgdm/output.hpp"
#include "sgdm/partition.hpp"
#include "sgdm/rates.hpp"
#include "sgdm/selfcheck.hpp"
#include "sgdm/trajectory.hpp"

namespace py = pybind11;
using namespace sgdm;

namespace {

ProblemParams to_params(const py::dict& d) {
  ProblemParams p;
  for (auto [k, v] : d) {
    const auto key = py::cast<std::string>(k);
    if (key == "spectrum")
      p.spectrum = py::cast<Vector>(v);
    else
      p.values[key] = py::cast<double>(v);
  }
  return p;
}

Regime to_regime(const std::string& name, double r) {
  if (name == "global") return GlobalRegime{};
  if (name == "loja") return LojaRegime{r};
  if (name == "rate") return RateRegime{PowerGrowth{r}};
  throw InvalidArgument("regime must be global, loja or rate");
}

py::dict trajectory_dict(const Trajectory& tr) {
  const std::size_t n = tr.steps.size();
  py::array_t<std::size_t> k(n);
  py::array_t<double> alpha(n), f(n), g(n), dist(n), move(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = tr.steps[i];
    k.mutable_at(i) = s.k;
    alpha.mutable_at(i) = s.alpha;
    f.mutable_at(i) = s.f;
    g.mutable_at(i) = s.grad_norm;
    dist.mutable_at(i) = s.dist;
    move.mutable_at(i) = s.move;
  }
  py::dict out;
  out["k"] = k;
  out["alpha"] = alpha;
  out["f"] = f;
  out["grad_norm"] = g;
  out["dist"] = dist;
  out["move"] = move;
  out["x_last"] = tr.x_last;
  out["diverged"] = tr.diverged;
  out["last_index"] = tr.last_index;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stochastic gradient descent with momentum: runs, window diagnostics and rate formulas";

  auto base = py::register_exception<Error>(m, "SgdmError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<RegimeViolation>(m, "RegimeViolation", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  py::class_<Problem>(m, "Problem")
      .def_readonly("name", &Problem::name)
      .def_readonly("dim", &Problem::dim)
      .def_readonly("L", &Problem::L)
      .def_readonly("f_star", &Problem::f_star)
      .def_readonly("x_star", &Problem::x_star)
      .def_property_readonly("theta", [](const Problem& p) { return p.loja.theta; })
      .def_property_readonly("C_f", [](const Problem& p) { return p.loja.C_f; })
      .def("value", [](const Problem& p, const Vector& x) { return p.value(x); })
      .def("grad", [](const Problem& p, const Vector& x) { return problem_eval(p, x).grad; })
      .def("__repr__", [](const Problem& p) { return "<Problem " + p.name + "(" + p.parameters + ")>"; });

  m.def("make_problem", [](const std::string& name, std::size_t dim, const py::dict& params) {
        return make_problem(name, dim, to_params(params));
      }, py::arg("name"), py::arg("dim"), py::arg("params") = py::dict());

  py::class_<StepSchedule>(m, "StepSchedule")
      .def_static("polynomial", &StepSchedule::polynomial, py::arg("alpha"), py::arg("beta") = 0.0,
                  py::arg("gamma") = 1.0)
      .def_static("constant", &StepSchedule::constant)
      .def_static("explicit", &StepSchedule::explicit_list)
      .def("__call__", &StepSchedule::operator())
      .def("__repr__", &StepSchedule::describe);

  py::class_<MomentumParams>(m, "MomentumParams")
      .def(py::init<double, double>(), py::arg("lam") = 0.0, py::arg("nu") = 0.0)
      .def_static("sgd", &MomentumParams::sgd)
      .def_static("heavy_ball", &MomentumParams::heavy_ball)
      .def_static("nesterov", &MomentumParams::nesterov)
      .def_property_readonly("lam", &MomentumParams::lambda)
      .def_property_readonly("nu", &MomentumParams::nu);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def_static("none", &NoiseModel::none)
      .def_static("gaussian", &NoiseModel::gaussian)
      .def_static("axis_rademacher", &NoiseModel::axis_rademacher)
      .def_static("sphere", &NoiseModel::sphere)
      .def("__repr__", &NoiseModel::describe);

  m.def("sgdm_step",
        [](const Vector& x, const Vector& x_prev, std::size_t k, const MomentumParams& mp, double alpha,
           const Problem& p, const NoiseModel& noise, std::uint64_t seed) {
          auto [next, det] = sgdm_step(IterateState{k, x_prev, x}, mp, alpha, p, noise, NoiseStream(seed));
          return py::make_tuple(next.x_curr, det.noise);
        },
        py::arg("x"), py::arg("x_prev"), py::arg("k"), py::arg("params"), py::arg("alpha"),
        py::arg("problem"), py::arg("noise") = NoiseModel::none(), py::arg("seed") = 0,
        "One update; returns (x_next, noise).");
  m.def("auxiliary_z", [](const Vector& x, const Vector& x_prev, double lam) {
    return auxiliary_z(IterateState{1, x_prev, x}, lam);
  });
  m.def("merit_value", [](const Problem& p, const MomentumParams& mp, const Vector& x, const Vector& z) {
    return merit_value(p, mp, x, z);
  });

  m.def("run",
        [](const Problem& p, const MomentumParams& mp, const StepSchedule& sch, const NoiseModel& noise,
           std::uint64_t seed, std::size_t horizon, const Vector& x0, std::size_t stride) {
          RecordingPolicy pol;
          pol.stride = stride;
          Trajectory tr;
          {
            py::gil_scoped_release nogil;
            tr = run_trajectory(RunSpec{p, mp, sch, noise, seed, horizon, x0}, pol);
          }
          return trajectory_dict(tr);
        },
        py::arg("problem"), py::arg("params"), py::arg("schedule"), py::arg("noise") = NoiseModel::none(),
        py::arg("seed") = 0, py::arg("horizon") = 1000, py::arg("x0") = Vector{}, py::arg("stride") = 1);

  m.def("default_window", [](double L, const MomentumParams& mp) { return default_window(L, mp); });
  m.def("build_partition", [](const StepSchedule& sch, double T, std::size_t horizon) {
    const auto p = build_partition(sch, T, horizon);
    return py::make_tuple(p.gamma, p.delta);
  }, py::arg("schedule"), py::arg("T"), py::arg("horizon"), "Returns (gamma, Delta per window).");

  m.def("validate_schedule", [](const StepSchedule& sch, const std::string& regime, double r) {
    const auto rep = validate_schedule(sch, to_regime(regime, r));
    return py::make_tuple(std::string(to_string(rep.verdict)), rep.failed);
  }, py::arg("schedule"), py::arg("regime") = "global", py::arg("r") = 1.0);

  m.def("rate_psi_phi", [](double theta, double r) {
    const auto v = rate_psi_phi(theta, r);
    return py::make_tuple(v.psi, v.phi);
  });
  m.def("rate_Phi_Psi", [](double gamma, double theta) {
    const auto v = rate_Phi_Psi(gamma, theta);
    py::dict d;
    d["Phi"] = v.Phi;
    d["Psi"] = v.Psi;
    d["theta_c"] = v.theta_c;
    return d;
  });
  m.def("optimal_gamma", [](double theta) {
    const auto o = optimal_gamma(theta);
    py::dict d;
    d["gamma_star"] = o.gamma_star;
    d["Psi_at_star"] = o.Psi_at_star;
    d["Phi_at_star"] = o.Phi_at_star;
    d["tadic_gamma"] = o.tadic_gamma;
    d["tadic_rate"] = o.tadic_rate;
    return d;
  });
  m.def("log_rate_case", [](double alpha, double C) {
    const auto c = log_rate_case(alpha, C);
    return py::make_tuple(c.accepted, c.threshold);
  });
  m.def("estimate_exponent", [](const std::vector<double>& ks, const std::vector<double>& v, double tail) {
    return estimate_exponent(ks, v, tail).exponent;
  }, py::arg("ks"), py::arg("values"), py::arg("tail_fraction") = 0.5);
  m.def("chung_bound_check", [](double q, double p, double s, double t, double beta, std::size_t horizon) {
    const auto r = chung_bound_check({q, p, s, t, beta}, horizon);
    return py::make_tuple(r.passed, r.worst_ratio);
  }, py::arg("q"), py::arg("p"), py::arg("s"), py::arg("t"), py::arg("beta") = 0.0,
        py::arg("horizon") = 100000);

  m.def("run_config", [](const std::string& text, std::uint64_t seed_offset) {
    const auto cfg = parse_config(text);
    std::string js;
    {
      py::gil_scoped_release nogil;
      js = summary_json(run_experiment(cfg, seed_offset).summary);
    }
    return js;
  }, py::arg("text"), py::arg("seed_offset") = 0, "Runs a config document; returns the summary JSON text.");

  m.def("self_check", [] {
    std::vector<py::tuple> out;
    for (const auto& c : self_check()) out.push_back(py::make_tuple(c.name, c.passed, c.detail));
    return out;
  });
}
