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

#include "qreduce/scenario_file.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include "qreduce/error.hpp"

namespace qreduce {
namespace {

using nlohmann::json;

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(child(path, key), "unknown field");
    }
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw ParseError(child(path, key), "missing required field");
  return obj.at(key);
}

const json& expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  return j;
}

const json& expect_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

std::uint64_t as_unsigned(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ParseError(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

Complex as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(path, "expected a complex number [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ComplexVector as_vector(const json& j, const std::string& path) {
  expect_array(j, path);
  if (j.empty() || j.size() > kMaxDim) throw ParseError(path, "vector length outside 1..64");
  std::vector<Complex> entries;
  for (std::size_t i = 0; i < j.size(); ++i) entries.push_back(as_complex(j[i], child(path, i)));
  return ComplexVector(std::move(entries));
}

template <class F>
auto rethrow_at(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    if (!e.path().empty()) throw;
    throw ParseError(path, e.what());
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

ObservableSource parse_observable(const json& j, const std::string& path, std::size_t sites,
                                  double tol) {
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    return rethrow_at(path, [&] {
      SpinExpression expr = SpinExpression::parse(text, sites);
      build_spin_operator(expr, tol);
      return ObservableSource{std::move(expr)};
    });
  }
  expect_object(j, path);
  reject_unknown(j, path, {"matrix"});
  const std::string mpath = child(path, "matrix");
  const json& rows = expect_array(require(j, path, "matrix"), mpath);
  const std::size_t dim = rows.size();
  if (dim == 0 || dim > kMaxDim) throw ParseError(mpath, "matrix dimension outside 1..64");
  std::vector<Complex> entries;
  for (std::size_t r = 0; r < dim; ++r) {
    const json& row = expect_array(rows[r], child(mpath, r));
    if (row.size() != dim) throw ParseError(child(mpath, r), "matrix must be square");
    for (std::size_t c = 0; c < dim; ++c) entries.push_back(as_complex(row[c], child(child(mpath, r), c)));
  }
  ComplexMatrix m(dim, std::move(entries));
  if (!m.is_hermitian(tol)) throw ParseError(path, "observable not Hermitian");
  return m;
}

Partition parse_cells(const json& j, const std::string& path) {
  expect_array(j, path);
  Partition cells;
  std::set<std::size_t> seen;
  for (std::size_t b = 0; b < j.size(); ++b) {
    const std::string bpath = child(path, b);
    const json& block = expect_array(j[b], bpath);
    if (block.empty()) throw ParseError(bpath, "block is empty");
    auto& cell = cells.emplace_back();
    for (std::size_t i = 0; i < block.size(); ++i) {
      const auto idx = static_cast<std::size_t>(as_unsigned(block[i], child(bpath, i)));
      if (!seen.insert(idx).second) {
        throw ParseError(child(bpath, i),
                         "index " + std::to_string(idx) + " appears in more than one block");
      }
      cell.push_back(idx);
    }
  }
  if (cells.empty()) throw ParseError(path, "partition has no blocks");
  return cells;
}

ApparatusSpec parse_apparatus(const json& j, const std::string& path, std::size_t sites,
                              double tol) {
  expect_object(j, path);
  const std::string type = as_string(require(j, path, "type"), child(path, "type"));
  if (type == "luders") {
    reject_unknown(j, path, {"type"});
    return LudersSpec{};
  }
  if (type == "refined_observable") {
    reject_unknown(j, path, {"type", "observable", "output_polynomial"});
    RefinedObservableSpec spec{
        parse_observable(require(j, path, "observable"), child(path, "observable"), sites, tol), {}};
    if (j.contains("output_polynomial")) {
      const std::string ppath = child(path, "output_polynomial");
      const json& coeffs = expect_array(j.at("output_polynomial"), ppath);
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        spec.output_polynomial.push_back(as_number(coeffs[i], child(ppath, i)));
      }
    }
    return spec;
  }
  if (type == "full_von_neumann") {
    reject_unknown(j, path, {"type", "bases"});
    FullVonNeumannSpec spec;
    const std::string bpath = child(path, "bases");
    const json& bases = expect_array(require(j, path, "bases"), bpath);
    for (std::size_t i = 0; i < bases.size(); ++i) {
      const std::string lpath = child(bpath, i);
      reject_unknown(expect_object(bases[i], lpath), lpath, {"eigenvalue", "vectors"});
      LevelBasis level{as_number(require(bases[i], lpath, "eigenvalue"), child(lpath, "eigenvalue")), {}};
      const std::string vpath = child(lpath, "vectors");
      const json& vectors = expect_array(require(bases[i], lpath, "vectors"), vpath);
      for (std::size_t v = 0; v < vectors.size(); ++v) {
        level.vectors.push_back(as_vector(vectors[v], child(vpath, v)));
      }
      rethrow_at(vpath, [&] {
        require_orthonormal(level.vectors, tol);
        return 0;
      });
      spec.bases.push_back(std::move(level));
    }
    return spec;
  }
  if (type == "partial") {
    reject_unknown(j, path, {"type", "blocks"});
    PartialSpec spec;
    const std::string bpath = child(path, "blocks");
    const json& blocks = expect_array(require(j, path, "blocks"), bpath);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string lpath = child(bpath, i);
      reject_unknown(expect_object(blocks[i], lpath), lpath, {"eigenvalue", "cells"});
      spec.blocks.push_back(
          {as_number(require(blocks[i], lpath, "eigenvalue"), child(lpath, "eigenvalue")),
           parse_cells(require(blocks[i], lpath, "cells"), child(lpath, "cells"))});
    }
    return spec;
  }
  if (type == "consecutive") {
    reject_unknown(j, path, {"type", "observables"});
    ConsecutiveSpec spec;
    const std::string opath = child(path, "observables");
    const json& list = expect_array(require(j, path, "observables"), opath);
    if (list.empty()) throw ParseError(opath, "expected at least one observable");
    for (std::size_t i = 0; i < list.size(); ++i) {
      spec.observables.push_back(parse_observable(list[i], child(opath, i), sites, tol));
    }
    return spec;
  }
  throw ParseError(child(path, "type"), "unknown apparatus type '" + type + "'");
}

InitialStateSpec parse_initial(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "default") return DefaultStateSpec{};
    if (name.empty() || name.find_first_not_of("+-") != std::string::npos) {
      throw ParseError(path, "expected \"default\" or a string of '+'/'-' signs");
    }
    return ProductStateSpec{name};
  }
  expect_object(j, path);
  reject_unknown(j, path, {"amplitudes"});
  return AmplitudeStateSpec{
      as_vector(require(j, path, "amplitudes"), child(path, "amplitudes"))};
}

Verdict parse_verdict(const std::string& s, const std::string& path) {
  for (Verdict v : {Verdict::kLuders, Verdict::kNonLuders, Verdict::kIndeterminate}) {
    if (s == verdict_name(v)) return v;
  }
  throw ParseError(path, "unknown verdict '" + s + "'");
}

StageKind parse_stage_kind(const std::string& s, const std::string& path) {
  for (StageKind k : {StageKind::kSigma, StageKind::kSigmaPrime}) {
    if (s == stage_kind_name(k)) return k;
  }
  throw ParseError(path, "unknown stage '" + s + "'");
}

void parse_protocol(const json& j, const std::string& path, Scenario& out) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"mode", "ensemble_size", "target_eigenvalue", "min_disturbance", "confidence",
                  "tolerance", "grouping_threshold", "seed"});
  ProtocolConfig& cfg = out.protocol;
  if (j.contains("mode")) {
    const std::string mode = as_string(j.at("mode"), child(path, "mode"));
    if (mode == "exact") cfg.mode = Mode::kExact;
    else if (mode == "sampled") cfg.mode = Mode::kSampled;
    else throw ParseError(child(path, "mode"), "expected \"exact\" or \"sampled\"");
  }
  if (j.contains("ensemble_size")) {
    cfg.ensemble_size = as_unsigned(j.at("ensemble_size"), child(path, "ensemble_size"));
    if (cfg.ensemble_size == 0) throw ParseError(child(path, "ensemble_size"), "must be >= 1");
  }
  if (j.contains("target_eigenvalue")) {
    const json& t = j.at("target_eigenvalue");
    if (t.is_string() && t.get<std::string>() == "auto") cfg.target_eigenvalue.reset();
    else cfg.target_eigenvalue = as_number(t, child(path, "target_eigenvalue"));
  }
  auto unit_interval = [&](const char* key, double& field) {
    if (!j.contains(key)) return;
    field = as_number(j.at(key), child(path, key));
    if (!(field > 0.0 && field < 1.0)) throw ParseError(child(path, key), "must lie in (0, 1)");
  };
  unit_interval("min_disturbance", cfg.min_disturbance);
  unit_interval("confidence", cfg.confidence);
  auto positive = [&](const char* key, double& field) {
    if (!j.contains(key)) return;
    field = as_number(j.at(key), child(path, key));
    if (!(field > 0.0)) throw ParseError(child(path, key), "must be positive");
  };
  positive("tolerance", cfg.tolerances.tol);
  positive("grouping_threshold", cfg.tolerances.grouping);
  if (j.contains("seed")) {
    cfg.seed = as_unsigned(j.at("seed"), child(path, "seed"));
    out.seed_given = true;
  }
}

// ---------------------------------------------------------------------------

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (const auto& c : v.entries()) out.push_back(complex_to_json(c));
  return out;
}

json observable_to_json(const ObservableSource& source) {
  if (const auto* e = std::get_if<SpinExpression>(&source)) return e->to_string();
  const auto& m = std::get<ComplexMatrix>(source);
  json rows = json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"matrix", std::move(rows)}};
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Scenario parse_scenario(const json& doc) {
  const std::string root;
  expect_object(doc, root);
  reject_unknown(doc, root,
                 {"schema_version", "name", "description", "sites", "observable", "apparatus",
                  "initial_state", "protocol", "expected"});
  const auto version = as_unsigned(require(doc, root, "schema_version"), "/schema_version");
  if (version != kScenarioSchemaVersion) {
    throw ParseError("/schema_version", "unsupported schema version " + std::to_string(version));
  }

  Scenario out;
  if (doc.contains("name")) out.name = as_string(doc.at("name"), "/name");
  if (doc.contains("description")) out.description = as_string(doc.at("description"), "/description");
  out.sites = static_cast<std::size_t>(as_unsigned(require(doc, root, "sites"), "/sites"));
  if (out.sites == 0 || out.sites > 6) throw ParseError("/sites", "sites must lie in 1..6");
  if (doc.contains("protocol")) parse_protocol(doc.at("protocol"), "/protocol", out);

  const double tol = out.protocol.tolerances.tol;
  out.observable = parse_observable(require(doc, root, "observable"), "/observable", out.sites, tol);
  if (const auto* m = std::get_if<ComplexMatrix>(&out.observable);
      m && m->dim() != (std::size_t{1} << out.sites)) {
    throw ParseError("/observable", "matrix dimension does not match 2^sites");
  }
  out.apparatus = parse_apparatus(require(doc, root, "apparatus"), "/apparatus", out.sites, tol);
  out.initial_state = doc.contains("initial_state")
                          ? parse_initial(doc.at("initial_state"), "/initial_state")
                          : InitialStateSpec{DefaultStateSpec{}};

  if (doc.contains("expected")) {
    const json& e = expect_object(doc.at("expected"), "/expected");
    reject_unknown(e, "/expected", {"verdict", "detected_at"});
    out.expected_verdict =
        parse_verdict(as_string(require(e, "/expected", "verdict"), "/expected/verdict"),
                      "/expected/verdict");
    if (e.contains("detected_at") && !e.at("detected_at").is_null()) {
      out.expected_stage = parse_stage_kind(
          as_string(e.at("detected_at"), "/expected/detected_at"), "/expected/detected_at");
    }
  }
  return out;
}

Scenario parse_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str());
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["schema_version"] = kScenarioSchemaVersion;
  if (!s.name.empty()) doc["name"] = s.name;
  if (!s.description.empty()) doc["description"] = s.description;
  doc["sites"] = s.sites;
  doc["observable"] = observable_to_json(s.observable);

  doc["apparatus"] = std::visit(
      Overloaded{
          [](const LudersSpec&) { return json{{"type", "luders"}}; },
          [](const RefinedObservableSpec& a) {
            json j{{"type", "refined_observable"}, {"observable", observable_to_json(a.observable)}};
            if (!a.output_polynomial.empty()) j["output_polynomial"] = a.output_polynomial;
            return j;
          },
          [](const FullVonNeumannSpec& a) {
            json bases = json::array();
            for (const auto& lb : a.bases) {
              json vectors = json::array();
              for (const auto& v : lb.vectors) vectors.push_back(vector_to_json(v));
              bases.push_back({{"eigenvalue", lb.eigenvalue}, {"vectors", std::move(vectors)}});
            }
            return json{{"type", "full_von_neumann"}, {"bases", std::move(bases)}};
          },
          [](const PartialSpec& a) {
            json blocks = json::array();
            for (const auto& lp : a.blocks) {
              blocks.push_back({{"eigenvalue", lp.eigenvalue}, {"cells", lp.cells}});
            }
            return json{{"type", "partial"}, {"blocks", std::move(blocks)}};
          },
          [](const ConsecutiveSpec& a) {
            json list = json::array();
            for (const auto& o : a.observables) list.push_back(observable_to_json(o));
            return json{{"type", "consecutive"}, {"observables", std::move(list)}};
          },
      },
      s.apparatus);

  doc["initial_state"] = std::visit(
      Overloaded{
          [](const DefaultStateSpec&) { return json("default"); },
          [](const ProductStateSpec& p) { return json(p.signs); },
          [](const AmplitudeStateSpec& a) { return json{{"amplitudes", vector_to_json(a.amplitudes)}}; },
      },
      s.initial_state);

  const ProtocolConfig& cfg = s.protocol;
  json protocol{{"mode", cfg.mode == Mode::kExact ? "exact" : "sampled"},
                {"ensemble_size", cfg.ensemble_size},
                {"min_disturbance", cfg.min_disturbance},
                {"confidence", cfg.confidence},
                {"tolerance", cfg.tolerances.tol},
                {"grouping_threshold", cfg.tolerances.grouping}};
  protocol["target_eigenvalue"] =
      cfg.target_eigenvalue ? json(*cfg.target_eigenvalue) : json("auto");
  if (s.seed_given) protocol["seed"] = cfg.seed;
  doc["protocol"] = std::move(protocol);

  if (s.expected_verdict) {
    json expected{{"verdict", verdict_name(*s.expected_verdict)}};
    if (s.expected_stage) expected["detected_at"] = stage_kind_name(*s.expected_stage);
    doc["expected"] = std::move(expected);
  }
  return doc;
}

}  // namespace qreduce
