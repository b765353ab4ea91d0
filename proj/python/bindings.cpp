// Copyright 2026 The qreduce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>

#include "qreduce/error.hpp"
#include "qreduce/linalg.hpp"
#include "qreduce/oracle.hpp"
#include "qreduce/protocol.hpp"
#include "qreduce/quantum.hpp"
#include "qreduce/report.hpp"
#include "qreduce/scenario_file.hpp"
#include "qreduce/scenarios.hpp"
#include "qreduce/spin.hpp"

namespace py = pybind11;
using namespace qreduce;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const ComplexArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw InvalidArgument("expected a square matrix");
  const auto n = static_cast<std::size_t>(a.shape(0));
  return ComplexMatrix(n, std::vector<Complex>(a.data(), a.data() + n * n));
}

ComplexArray to_array(const ComplexMatrix& m) {
  const auto n = static_cast<py::ssize_t>(m.dim());
  ComplexArray out({n, n});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

Scenario load(const std::optional<std::string>& builtin, const std::optional<std::string>& scenario_json) {
  if (builtin.has_value() == scenario_json.has_value()) {
    throw InvalidArgument("pass exactly one of builtin or scenario_json");
  }
  if (builtin) {
    auto s = find_builtin(*builtin);
    if (!s) throw InvalidArgument("unknown built-in scenario '" + *builtin + "'");
    return *s;
  }
  return parse_scenario_text(*scenario_json);
}

std::string run(const std::optional<std::string>& builtin, const std::optional<std::string>& scenario_json,
                const std::optional<std::string>& mode, std::optional<std::size_t> ensemble_size,
                std::optional<std::uint64_t> seed, std::optional<double> target_eigenvalue,
                bool transcript) {
  Scenario scenario = load(builtin, scenario_json);
  ProtocolConfig& cfg = scenario.protocol;
  if (mode) {
    if (*mode == "exact") cfg.mode = Mode::kExact;
    else if (*mode == "sampled") cfg.mode = Mode::kSampled;
    else throw InvalidArgument("mode must be 'exact' or 'sampled'");
  }
  if (ensemble_size) cfg.ensemble_size = *ensemble_size;
  if (seed) cfg.seed = *seed;
  if (target_eigenvalue) cfg.target_eigenvalue = *target_eigenvalue;
  BuiltScenario built = build_scenario(scenario);
  ReportInput report{scenario.name, cfg,
                     discriminate(built.initial, built.apparatus, built.observable, cfg), transcript,
                     std::nullopt};
  return report_json(report).dump();
}

}  // namespace

PYBIND11_MODULE(_qreduce, m) {
  m.doc() = "Projective measurement reduction rules and a black-box Lüders test";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def(
      "spin_operator",
      [](const std::string& expr, std::size_t sites) { return to_array(build_spin_operator(expr, sites)); },
      py::arg("expr"), py::arg("sites"));

  m.def(
      "spectrum",
      [](const ComplexArray& a, double grouping) {
        const auto d = spectral_decompose(to_matrix(a), grouping);
        py::list out;
        for (std::size_t k = 0; k < d.group_count(); ++k) {
          out.append(py::make_tuple(d.eigenvalues[k], d.multiplicities[k]));
        }
        return out;
      },
      py::arg("matrix"), py::arg("grouping") = kDefaultGroupingThreshold,
      "Distinct eigenvalues (descending) with multiplicities.");

  m.def(
      "apply_polynomial",
      [](const ComplexArray& a, std::vector<double> coeffs) {
        return to_array(apply_spectral_function(to_matrix(a), [&](double x) {
          double y = 0.0;
          for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) y = y * x + *it;
          return y;
        }));
      },
      py::arg("matrix"), py::arg("coeffs"), "f(A) for f(x) = c0 + c1 x + ...");

  m.def("required_ensemble_size", &required_ensemble_size, py::arg("min_disturbance"),
        py::arg("confidence"));

  m.def("builtin_names", [] {
    std::vector<std::string> names;
    for (const auto& s : builtin_scenarios()) names.push_back(s.name);
    return names;
  });

  m.def("_discriminate_json", &run, py::arg("builtin") = py::none(), py::arg("scenario_json") = py::none(),
        py::arg("mode") = py::none(), py::arg("ensemble_size") = py::none(), py::arg("seed") = py::none(),
        py::arg("target_eigenvalue") = py::none(), py::arg("transcript") = false);

  m.def(
      "oracle_verdict",
      [](const std::optional<std::string>& builtin, const std::optional<std::string>& scenario_json) {
        const BuiltScenario built = build_scenario(load(builtin, scenario_json));
        if (!built.target_group) return std::string(verdict_name(Verdict::kIndeterminate));
        return std::string(verdict_name(classify_refinement_oracle(built.refinement, *built.target_group)));
      },
      py::arg("builtin") = py::none(), py::arg("scenario_json") = py::none(),
      "Ground-truth verdict read from the hidden refinement.");
}
