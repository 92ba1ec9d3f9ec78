#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mnms/acceptance.hpp"
#include "mnms/frontier.hpp"

namespace py = pybind11;
using namespace mnms;

namespace {

py::array_t<std::complex<double>> matrix_to_numpy(const ComplexMatrix& m) {
  const auto n = static_cast<py::ssize_t>(m.dim());
  py::array_t<std::complex<double>> out({n, n});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i)
    for (py::ssize_t j = 0; j < n; ++j)
      view(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return out;
}

DensityMatrix density_from_numpy(const py::array_t<std::complex<double>>& array) {
  if (array.ndim() != 2 || array.shape(0) != array.shape(1))
    throw std::invalid_argument("density matrix must be a square 2-D array");
  const auto n = static_cast<std::size_t>(array.shape(0));
  ComplexMatrix m(n);
  auto view = array.unchecked<2>();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j));
  return density_from_matrix(std::move(m));
}

py::dict result_to_dict(const NonlocalityResult& r) {
  py::dict out;
  out["s_value"] = r.s_value;
  out["settings"] = r.settings;
  out["converged"] = r.converged;
  switch (r.method) {
    case MaxMethod::HorodeckiExact: out["method"] = "horodecki-exact"; break;
    case MaxMethod::Optimized: out["method"] = "optimized"; break;
    case MaxMethod::ClosedForm: out["method"] = "closed-form"; break;
  }
  return out;
}

py::dict game_result_to_dict(const GameResult& r) {
  py::dict out;
  out["win_probability"] = r.win_probability;
  switch (r.mode) {
    case GameMode::Exact: out["mode"] = "exact"; break;
    case GameMode::MonteCarlo: out["mode"] = "monte-carlo"; break;
    case GameMode::Enumerated: out["mode"] = "enumerated"; break;
  }
  if (r.mode != GameMode::Exact) {
    out["wins"] = r.wins;
    out["total"] = r.total;
  }
  if (r.mode == GameMode::MonteCarlo) out["stderr"] = r.std_error;
  if (r.bipartitions > 0) out["bipartitions"] = r.bipartitions;
  if (r.strategy) {
    py::dict strategy;
    strategy["group1"] = r.strategy->group1;
    strategy["group2"] = r.strategy->group2;
    out["strategy"] = strategy;
  }
  return out;
}

GameSpec spec_from_args(int parties, const std::optional<std::vector<int>>& group1) {
  if (group1) return GameSpec::with_groups(parties, *group1);
  return GameSpec::with_groups(parties, std::vector<int>{1});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal mixed states for the CHSH and Svetlichny games";

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def_readonly("qubits", &DensityMatrix::qubits)
      .def_property_readonly("matrix",
                             [](const DensityMatrix& rho) { return matrix_to_numpy(rho.mat); })
      .def("to_json", &density_to_json)
      .def("__repr__", [](const DensityMatrix& rho) {
        return "DensityMatrix(qubits=" + std::to_string(rho.qubits) + ")";
      });

  py::class_<SettingsTable>(m, "Settings")
      .def_static("planar",
                  [](const std::vector<std::array<double, 2>>& phis) {
                    SettingsTable t;
                    for (const auto& pair : phis)
                      t.parties.push_back({MeasurementSetting::planar(pair[0]),
                                           MeasurementSetting::planar(pair[1])});
                    return t;
                  },
                  py::arg("phis"), "Planar settings from per-party [phi1, phi2] pairs")
      .def_static("bloch",
                  [](const std::vector<std::array<std::array<double, 2>, 2>>& angles) {
                    SettingsTable t;
                    for (const auto& pair : angles)
                      t.parties.push_back({MeasurementSetting::bloch(pair[0][0], pair[0][1]),
                                           MeasurementSetting::bloch(pair[1][0], pair[1][1])});
                    return t;
                  },
                  py::arg("angles"), "Bloch settings from per-party [[theta, phi], ...] pairs")
      .def_static("from_json", &settings_from_json)
      .def_property_readonly("parties", &SettingsTable::n_parties)
      .def("to_json", &settings_to_json)
      .def("__repr__", [](const SettingsTable& t) {
        return "Settings(parties=" + std::to_string(t.n_parties()) + ")";
      });

  m.def(
      "make_state",
      [](const std::string& family, double parameter) {
        return make_state(parse_family(family, parameter));
      },
      py::arg("family"), py::arg("parameter") = 0.0);
  m.def("state_from_json", &density_from_json);
  m.def("state_from_matrix", &density_from_numpy, py::arg("matrix"));
  m.def("mix_white_noise", &mix_white_noise, py::arg("rho"), py::arg("visibility"));
  m.def("linear_entropy", &linear_entropy);
  m.def("purity", &purity);
  m.def(
      "validate",
      [](const DensityMatrix& rho) {
        const ValidationReport r = validate(rho);
        py::dict out;
        out["hermiticity_defect"] = r.hermiticity_defect;
        out["trace_defect"] = r.trace_defect;
        out["min_eigenvalue"] = r.min_eigenvalue;
        out["passed"] = r.passed();
        return out;
      },
      py::arg("rho"));

  m.def(
      "bloch_decompose",
      [](const DensityMatrix& rho) {
        const BlochDecomposition2Q d = bloch_decompose(rho);
        py::dict out;
        out["r"] = d.r;
        out["s"] = d.s;
        out["T"] = d.t;
        out["lambda_sq"] = d.lambda_sq;
        return out;
      },
      py::arg("rho"));
  m.def("chsh_max_horodecki",
        [](const DensityMatrix& rho) { return result_to_dict(chsh_max_horodecki(rho)); });
  m.def("game_operator",
        [](const SettingsTable& settings) { return matrix_to_numpy(game_operator(settings)); });
  m.def("expectation", &expectation, py::arg("rho"), py::arg("settings"));
  m.def(
      "maximize",
      [](const DensityMatrix& rho, const std::string& mode, int starts, std::uint64_t seed) {
        MaximizeOptions options;
        options.starts = starts;
        options.seed = seed;
        return result_to_dict(maximize(rho, parse_mode(mode), options));
      },
      py::arg("rho"), py::arg("mode") = "planar", py::arg("starts") = 64, py::arg("seed") = 0);
  m.def("mnms3_optimal_settings", &mnms3_optimal_settings, py::arg("f"));
  m.def(
      "critical_visibility",
      [](const DensityMatrix& rho, const std::string& mode, std::uint64_t seed) {
        MaximizeOptions options;
        options.seed = seed;
        return critical_visibility(rho, parse_mode(mode), options);
      },
      py::arg("rho"), py::arg("mode") = "planar", py::arg("seed") = 0);

  m.def(
      "win_predicate",
      [](const std::vector<int>& questions, const std::vector<int>& answers) {
        return win_predicate(questions, answers);
      },
      py::arg("questions"), py::arg("answers"));
  m.def(
      "enumerate_classical",
      [](int parties, const std::optional<std::vector<int>>& group1) {
        return game_result_to_dict(enumerate_classical(spec_from_args(parties, group1)));
      },
      py::arg("parties"), py::arg("group1") = std::nullopt,
      "Exact hybrid maximum for one grouping (group1 lists 1-based players)");
  m.def("classical_bound",
        [](int parties) { return game_result_to_dict(classical_bound(parties)); },
        py::arg("parties"));
  m.def(
      "quantum_win_exact",
      [](const DensityMatrix& rho, const SettingsTable& settings) {
        return game_result_to_dict(
            quantum_win_exact(rho, settings, spec_from_args(rho.qubits, std::nullopt)));
      },
      py::arg("rho"), py::arg("settings"));
  m.def(
      "simulate_rounds",
      [](const DensityMatrix& rho, const SettingsTable& settings, std::int64_t rounds,
         std::uint64_t seed) {
        return game_result_to_dict(
            simulate_rounds(rho, settings, spec_from_args(rho.qubits, std::nullopt), rounds, seed));
      },
      py::arg("rho"), py::arg("settings"), py::arg("rounds"), py::arg("seed") = 0);

  m.def(
      "curve_value",
      [](const std::string& family, double e_l) { return curve_value(parse_curve(family), e_l); },
      py::arg("family"), py::arg("e_l"));
  m.def(
      "curve_domain",
      [](const std::string& family) { return curve_domain(parse_curve(family)); },
      py::arg("family"));
  m.def(
      "family_point",
      [](const std::string& family, double parameter) {
        const FrontierPoint p = family_point(parse_curve(family), parameter);
        py::dict out;
        out["e_l"] = p.e_l;
        out["s"] = p.s;
        out["source"] = p.source;
        out["parameter"] = p.parameter;
        return out;
      },
      py::arg("family"), py::arg("parameter"));
  m.def(
      "sample_state",
      [](int qubits, std::uint64_t seed, std::uint64_t index, int rank) {
        return sample_state(qubits, seed, index, rank);
      },
      py::arg("qubits"), py::arg("seed"), py::arg("index") = 0, py::arg("rank") = 0);
  m.def(
      "scan",
      [](int qubits, std::int64_t samples, std::uint64_t seed, const std::string& mode,
         int starts) {
        ScanConfig config;
        config.qubits = qubits;
        config.samples = samples;
        config.seed = seed;
        config.mode = parse_mode(mode);
        config.optimizer_starts = starts;
        py::list out;
        for (const FrontierPoint& p : scan(config)) {
          py::dict d;
          d["e_l"] = p.e_l;
          d["s"] = p.s;
          d["source"] = p.source;
          d["parameter"] = p.parameter;
          d["converged"] = p.converged;
          out.append(d);
        }
        return out;
      },
      py::arg("qubits"), py::arg("samples"), py::arg("seed") = 0, py::arg("mode") = "planar",
      py::arg("starts") = 64);

  m.def("run_acceptance", []() {
    py::list out;
    for (const CriterionOutcome& o : run_acceptance(nullptr)) {
      py::dict d;
      d["id"] = o.id;
      d["name"] = o.name;
      d["passed"] = o.passed;
      d["detail"] = o.detail;
      out.append(d);
    }
    return out;
  });

  m.attr("__version__") = "0.1.0";
}
