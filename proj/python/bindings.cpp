#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stokes/bifurcation.hpp"
#include "stokes/cli.hpp"
#include "stokes/config.hpp"
#include "stokes/errors.hpp"
#include "stokes/selfcheck.hpp"
#include "stokes/wavefield.hpp"

namespace py = pybind11;
using namespace stokes;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Depth depth_arg(const py::object& d) {
  if (py::isinstance<py::str>(d)) return Depth::parse(d.cast<std::string>());
  return Depth::finite(d.cast<double>());
}

py::object depth_py(const Depth& d) {
  if (d.is_infinite()) return py::str("inf");
  return py::float_(d.value());
}

nlohmann::json record_json(const ClassificationRecord& r) {
  auto opt = [](const auto& o) { return o ? nlohmann::json(*o) : nlohmann::json(nullptr); };
  return {{"j_star", r.j_star},       {"c_star", r.c_star},   {"kernel_dim", r.kernel_dim},
          {"partner", opt(r.partner)}, {"bond_plus", opt(r.bond_plus)}, {"bond_minus", opt(r.bond_minus)},
          {"regime", std::string(to_string(r.regime))}};
}

DriverOptions driver(double tol, int threads, std::uint64_t seed) {
  DriverOptions o;
  o.tol = tol;
  o.threads = threads;
  o.seed = seed;
  return o;
}

}  // namespace

PYBIND11_MODULE(_stokes, m) {
  m.doc() = "Stokes waves with surface tension and constant vorticity";

  auto base = py::register_exception<Error>(m, "StokesError");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<MisuseError>(m, "MisuseError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init([](double g, const py::object& depth, double kappa, double gamma) {
             PhysicalParams p{g, depth_arg(depth), kappa, gamma};
             p.validate();
             return p;
           }),
           py::arg("g") = 1.0, py::arg("depth") = py::str("inf"), py::arg("kappa") = 0.0, py::arg("gamma") = 0.0)
      .def_readwrite("g", &PhysicalParams::g)
      .def_readwrite("kappa", &PhysicalParams::kappa)
      .def_readwrite("gamma", &PhysicalParams::gamma)
      .def_property(
          "depth", [](const PhysicalParams& p) { return depth_py(p.depth); },
          [](PhysicalParams& p, const py::object& d) { p.depth = depth_arg(d); })
      .def("__repr__", [](const PhysicalParams& p) {
        std::ostringstream os;
        os << p;
        return os.str();
      });

  py::class_<SpectralGrid>(m, "SpectralGrid")
      .def(py::init<int, int, int>(), py::arg("n_modes"), py::arg("n_collocation") = 0, py::arg("dno_order") = 6)
      .def_property_readonly("n_modes", &SpectralGrid::n_modes)
      .def_property_readonly("n_collocation", &SpectralGrid::n_collocation)
      .def_property_readonly("dno_order", &SpectralGrid::dno_order);

  m.def("omega", &omega, py::arg("params"), py::arg("xi"));
  m.def("phase_speed", &phase_speed, py::arg("params"), py::arg("xi"));
  m.def("bifurcation_speed", &bifurcation_speed, py::arg("params"), py::arg("j_star"));
  m.def("bond_numbers", [](const PhysicalParams& p) {
    const BondNumbers b = bond_numbers(p);
    return py::make_tuple(b.plus, b.minus);
  });
  m.def(
      "classify_kernel",
      [](const PhysicalParams& p, int j_star, int j_max, double tol) {
        return to_py(record_json(classify_kernel(p, j_star, j_max, tol)));
      },
      py::arg("params"), py::arg("j_star"), py::arg("j_max") = 256, py::arg("tol") = kDefaultResonanceTol);
  m.def(
      "find_resonant_kappa",
      [](double g, const py::object& depth, double gamma, int j_star, int j) {
        return find_resonant_kappa(g, depth_arg(depth), gamma, j_star, j).kappa;
      },
      py::arg("g"), py::arg("depth"), py::arg("gamma"), py::arg("j_star"), py::arg("j"));

  m.def(
      "dno_apply",
      [](const PhysicalParams& p, const SpectralGrid& grid, const Spectrum& eta, const Spectrum& psi) {
        return dno_apply(p, grid, eta, psi);
      },
      py::arg("params"), py::arg("grid"), py::arg("eta"), py::arg("psi"));
  m.def(
      "residual",
      [](const PhysicalParams& p, const SpectralGrid& grid, double c, const Spectrum& eta, const Spectrum& zeta) {
        const SurfaceState f = residual(p, grid, c, SurfaceState(eta, zeta));
        return py::make_tuple(f.eta, f.zeta);
      },
      py::arg("params"), py::arg("grid"), py::arg("c"), py::arg("eta"), py::arg("zeta"));
  m.def("momentum", [](const Spectrum& eta, const Spectrum& zeta) { return momentum(SurfaceState(eta, zeta)); });

  m.def(
      "nonresonant_branch",
      [](const PhysicalParams& p, const SpectralGrid& grid, int j_star, const std::vector<double>& eps, double tol,
         int threads) {
        py::list out;
        for (const auto& b : nonresonant_branch(p, grid, j_star, eps, driver(tol, threads, 20240917))) {
          out.append(to_py(to_json(b)));
        }
        return out;
      },
      py::arg("params"), py::arg("grid"), py::arg("j_star"), py::arg("epsilons"), py::arg("tol") = 1e-10,
      py::arg("threads") = 1);
  m.def(
      "resonant_fixed_speed",
      [](const PhysicalParams& p, const SpectralGrid& grid, int j_star, int partner, double c, int multistart,
         double tol, std::uint64_t seed) {
        py::list out;
        for (const auto& b : resonant_fixed_speed(p, grid, j_star, partner, c, multistart, driver(tol, 1, seed)).orbits) {
          out.append(to_py(to_json(b)));
        }
        return out;
      },
      py::arg("params"), py::arg("grid"), py::arg("j_star"), py::arg("partner"), py::arg("c"),
      py::arg("multistart") = 16, py::arg("tol") = 1e-10, py::arg("seed") = 20240917);
  m.def(
      "resonant_fixed_momentum",
      [](const PhysicalParams& p, const SpectralGrid& grid, int j_star, int partner, double a, int multistart,
         double tol, std::uint64_t seed) {
        const FixedMomentumResult r =
            resonant_fixed_momentum(p, grid, j_star, partner, a, multistart, driver(tol, 1, seed));
        return py::make_tuple(to_py(to_json(r.min_orbit)), to_py(to_json(r.max_orbit)), r.distinct);
      },
      py::arg("params"), py::arg("grid"), py::arg("j_star"), py::arg("partner"), py::arg("a"),
      py::arg("multistart") = 8, py::arg("tol") = 1e-10, py::arg("seed") = 20240917);

  m.def(
      "selfcheck",
      [](const PhysicalParams& p, const SpectralGrid& grid, int j_star, int trials) {
        return to_py(run_selfcheck(p, grid, j_star, trials).to_json());
      },
      py::arg("params"), py::arg("grid"), py::arg("j_star") = 1, py::arg("trials") = 8);

  m.def("normalize_config", [](const std::string& text) { return serialize_config(parse_config(text)); });
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    std::vector<std::string> full{"stokes"};
    full.insert(full.end(), args.begin(), args.end());
    const int code = run_cli(full, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
