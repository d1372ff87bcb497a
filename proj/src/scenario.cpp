// Copyright 2026 the nmipe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nmipe/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "internal/parallel.hpp"
#include "nmipe/errors.hpp"
#include "nmipe/oracle.hpp"

namespace nmipe::scenario {

using nlohmann::json;

namespace {

constexpr const char* kColumns[] = {"point", "kind", "x",  "y", "a_dx",  "a_dy",   "x2",     "y2",
                                    "b_dx",  "b_dy", "z",  "t", "g",     "method", "value",  "valid",
                                    "status", "abs_delta_oracle"};
constexpr std::size_t kNumColumns = sizeof(kColumns) / sizeof(kColumns[0]);

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError("expected a number", path);
  return j.get<double>();
}

Vec2 get_vec2(const json& obj, const char* key, const std::string& path) {
  const std::string p = path + "." + key;
  if (!obj.contains(key)) throw ConfigError("missing field", p);
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2) throw ConfigError("expected a 2-element array", p);
  return {get_number(v[0], p + "[0]"), get_number(v[1], p + "[1]")};
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

json point_json(const EvalPoint& ep) {
  if (const auto* p = std::get_if<PhasePoint>(&ep)) {
    return {{"kind", "single"}, {"x", vec_json(p->x)}, {"a_d", vec_json(p->a_d)}};
  }
  const auto& t = std::get<TwoPhotonPoint>(ep);
  return {{"kind", "two_photon"}, {"x1", vec_json(t.x1)}, {"a_d", vec_json(t.a_d)},
          {"x2", vec_json(t.x2)},  {"b_d", vec_json(t.b_d)}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("malformed number '" + s + "'", "line " + std::to_string(line));
  }
}

struct PointResult {
  std::vector<ResultRow> rows;
  bool numerical_failure = false;
};

std::string error_status(const std::exception& e) {
  if (dynamic_cast<const DomainError*>(&e)) return std::string("domain_error: ") + e.what();
  if (dynamic_cast<const NonConvergenceError*>(&e)) return std::string("nonconvergence: ") + e.what();
  if (dynamic_cast<const StepSizeUnderflow*>(&e)) return std::string("step_underflow: ") + e.what();
  return std::string("error: ") + e.what();
}

bool is_numerical(const std::exception& e) {
  return dynamic_cast<const NonConvergenceError*>(&e) || dynamic_cast<const StepSizeUnderflow*>(&e);
}

PointResult evaluate_point(const Scenario& sc, std::size_t index) {
  PointResult res;
  const EvalPoint& ep = sc.points[index];
  const bool single = std::holds_alternative<PhasePoint>(ep);
  const auto& params = sc.params;

  std::vector<double> coords;
  if (single) {
    const auto& p = std::get<PhasePoint>(ep);
    coords = {p.x.x, p.x.y, p.a_d.x, p.a_d.y};
  } else {
    const auto& p = std::get<TwoPhotonPoint>(ep);
    coords = {p.x1.x, p.x1.y, p.a_d.x, p.a_d.y, p.x2.x, p.x2.y, p.b_d.x, p.b_d.y};
  }

  // Oracle first: one integration covers the whole z grid.
  const bool want_oracle = std::find(sc.methods.begin(), sc.methods.end(), Method::oracle) != sc.methods.end();
  std::vector<double> oracle_values;
  std::string oracle_status = "ok";
  bool oracle_ok = false;
  if (want_oracle) {
    try {
      const double z_max = sc.z_grid.back();
      oracle_values.assign(sc.z_grid.size(), 1.0);
      if (z_max > 0.0) {
        std::function<double(double)> k_of_z;
        if (single) {
          const auto p = std::get<PhasePoint>(ep);
          k_of_z = [p, params](double z) { return ipe::k_single(z, p, params); };
        } else {
          const auto p = std::get<TwoPhotonPoint>(ep);
          k_of_z = [p, params](double z) { return ipe::k_two(z, p, params); };
        }
        oracle::OdeOptions oo;
        oo.tol = sc.oracle_tol;
        oo.report_at = sc.z_grid;
        const auto sol = oracle::integrate_pointwise(k_of_z, z_max, oo);
        for (std::size_t i = 0; i < sc.z_grid.size(); ++i) {
          const auto it = std::find(sol.z_samples.begin(), sol.z_samples.end(), sc.z_grid[i]);
          oracle_values[i] = sol.values[static_cast<std::size_t>(it - sol.z_samples.begin())];
        }
      }
      oracle_ok = true;
    } catch (const std::exception& e) {
      oracle_status = sanitize(error_status(e));
      if (is_numerical(e)) res.numerical_failure = true;
    }
  }

  for (std::size_t iz = 0; iz < sc.z_grid.size(); ++iz) {
    const double z = sc.z_grid[iz];
    const NormalizedParams np = turbulence::normalize(params, z);
    for (Method m : sc.methods) {
      ResultRow row;
      row.point = index;
      row.kind = single ? "single" : "two_photon";
      row.coords = coords;
      row.z = z;
      row.t = np.t;
      row.g = np.g;
      row.method = m;
      row.value = std::numeric_limits<double>::quiet_NaN();
      row.status = "ok";
      try {
        KernelValue kv;
        switch (m) {
          case Method::perturbative:
            kv = single ? solutions::perturbative_kernel(z, std::get<PhasePoint>(ep), params)
                        : solutions::perturbative_kernel_two(z, std::get<TwoPhotonPoint>(ep), params);
            break;
          case Method::modified:
            if (!single) throw DomainError("no modified solution for two-photon points");
            kv = solutions::modified_solution(z, std::get<PhasePoint>(ep), params);
            break;
          case Method::oracle:
            if (!oracle_ok) {
              row.status = oracle_status;
              res.rows.push_back(row);
              continue;
            }
            kv = {oracle_values[iz], Method::oracle, true};
            break;
        }
        row.value = kv.value;
        row.valid = kv.valid;
        if (oracle_ok && m != Method::oracle) row.abs_delta_oracle = std::abs(kv.value - oracle_values[iz]);
      } catch (const std::exception& e) {
        row.status = sanitize(error_status(e));
        if (is_numerical(e)) res.numerical_failure = true;
      }
      res.rows.push_back(row);
    }
  }
  return res;
}

std::string header_json(const Scenario& sc) {
  json pts = json::array();
  for (const auto& p : sc.points) pts.push_back(point_json(p));
  json methods = json::array();
  for (Method m : sc.methods) methods.push_back(std::string(to_string(m)));
  const NormalizedParams np = turbulence::normalize(sc.params, 0.0);
  json cols = json::array();
  for (const char* c : kColumns) cols.push_back(c);
  json h = {
      {"format", "nmipe-results"},
      {"version", 1},
      {"scenario",
       {{"params", {{"cn2", sc.params.cn2}, {"wavelength", sc.params.lambda}, {"w0", sc.params.w0}}},
        {"z_grid", sc.z_grid},
        {"eval_points", pts},
        {"methods", methods},
        {"output", sc.output_path},
        {"oracle_tol", sc.oracle_tol}}},
      {"normalized",
       {{"theta", np.theta}, {"turb_T", np.turb_T}, {"beta", np.beta}, {"k", np.k}}},
      {"units",
       {{"z", "m"}, {"x", "m"}, {"a_d", "1/m"}, {"t", "1"}, {"g", "1"}, {"value", "1"}, {"cn2", "m^-2/3"},
        {"wavelength", "m"}, {"w0", "m"}, {"beta", "m^-7/3"}, {"k", "1/m"}}},
      {"columns", cols}};
  return h.dump();
}

}  // namespace

void Scenario::validate() const {
  try {
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), "params");
  }
  if (z_grid.empty()) throw ConfigError("must not be empty", "z_grid");
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    const std::string p = "z_grid[" + std::to_string(i) + "]";
    if (!std::isfinite(z_grid[i])) throw ConfigError("must be finite", p);
    if (i == 0 && z_grid[i] < 0.0) throw ConfigError("must start at z >= 0", p);
    if (i > 0 && !(z_grid[i] > z_grid[i - 1])) throw ConfigError("must be strictly increasing", p);
  }
  if (methods.empty()) throw ConfigError("at least one method is required", "methods");
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      std::visit([](const auto& p) { p.validate(); }, points[i]);
    } catch (const DomainError& e) {
      throw ConfigError(e.what(), "eval_points[" + std::to_string(i) + "]");
    }
  }
  if (!(oracle_tol > 0.0 && oracle_tol < 1.0)) throw ConfigError("must lie in (0, 1)", "oracle_tol");
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ConfigError(std::string("malformed JSON: ") + e.what(), "line " + std::to_string(line));
  }
  if (!doc.is_object()) throw ConfigError("scenario must be a JSON object", "$");

  Scenario sc;
  if (!doc.contains("params") || !doc["params"].is_object()) throw ConfigError("missing object", "params");
  const json& pj = doc["params"];
  for (const char* key : {"cn2", "wavelength", "w0"}) {
    if (!pj.contains(key)) throw ConfigError("missing field", std::string("params.") + key);
  }
  sc.params.cn2 = get_number(pj["cn2"], "params.cn2");
  sc.params.lambda = get_number(pj["wavelength"], "params.wavelength");
  sc.params.w0 = get_number(pj["w0"], "params.w0");

  if (!doc.contains("z_grid") || !doc["z_grid"].is_array()) throw ConfigError("missing array", "z_grid");
  for (std::size_t i = 0; i < doc["z_grid"].size(); ++i) {
    sc.z_grid.push_back(get_number(doc["z_grid"][i], "z_grid[" + std::to_string(i) + "]"));
  }

  if (doc.contains("eval_points")) {
    if (!doc["eval_points"].is_array()) throw ConfigError("expected an array", "eval_points");
    for (std::size_t i = 0; i < doc["eval_points"].size(); ++i) {
      const std::string path = "eval_points[" + std::to_string(i) + "]";
      const json& p = doc["eval_points"][i];
      if (!p.is_object()) throw ConfigError("expected an object", path);
      std::string kind = p.contains("x1") ? "two_photon" : "single";
      if (p.contains("kind")) {
        if (!p["kind"].is_string()) throw ConfigError("expected a string", path + ".kind");
        kind = p["kind"].get<std::string>();
      }
      if (kind == "single") {
        sc.points.emplace_back(PhasePoint{get_vec2(p, "x", path), get_vec2(p, "a_d", path)});
      } else if (kind == "two_photon") {
        sc.points.emplace_back(TwoPhotonPoint{get_vec2(p, "x1", path), get_vec2(p, "a_d", path),
                                              get_vec2(p, "x2", path), get_vec2(p, "b_d", path)});
      } else {
        throw ConfigError("unknown kind '" + kind + "'", path + ".kind");
      }
    }
  }

  if (!doc.contains("methods") || !doc["methods"].is_array()) throw ConfigError("missing array", "methods");
  for (std::size_t i = 0; i < doc["methods"].size(); ++i) {
    const std::string path = "methods[" + std::to_string(i) + "]";
    if (!doc["methods"][i].is_string()) throw ConfigError("expected a string", path);
    try {
      const Method m = method_from_string(doc["methods"][i].get<std::string>());
      if (std::find(sc.methods.begin(), sc.methods.end(), m) != sc.methods.end()) {
        throw ConfigError("duplicate method", path);
      }
      sc.methods.push_back(m);
    } catch (const ConfigError& e) {
      if (!e.field().empty()) throw;
      throw ConfigError(e.what(), path);
    }
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("expected a string", "output");
    sc.output_path = doc["output"].get<std::string>();
  }
  if (doc.contains("oracle_tol")) sc.oracle_tol = get_number(doc["oracle_tol"], "oracle_tol");
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

RunOutcome run_scenario(const Scenario& sc, const RunOptions& opt) {
  sc.validate();
  std::vector<PointResult> per_point(sc.points.size());
  internal::parallel_for(
      sc.points.size(), [&](std::size_t i) { per_point[i] = evaluate_point(sc, i); }, std::max(1u, opt.threads));
  RunOutcome out;
  out.table.header_json = header_json(sc);
  for (auto& pr : per_point) {
    out.numerical_failure = out.numerical_failure || pr.numerical_failure;
    for (auto& r : pr.rows) out.table.rows.push_back(std::move(r));
  }
  return out;
}

void write_results_csv(const ResultTable& table, std::ostream& os) {
  os << "# " << table.header_json << "\n";
  for (std::size_t i = 0; i < kNumColumns; ++i) os << (i ? "," : "") << kColumns[i];
  os << "\n";
  for (const auto& r : table.rows) {
    os << r.point << "," << r.kind;
    for (std::size_t c = 0; c < 8; ++c) os << "," << (c < r.coords.size() ? format_double(r.coords[c]) : "");
    os << "," << format_double(r.z) << "," << format_double(r.t) << "," << format_double(r.g) << ","
       << to_string(r.method) << "," << format_double(r.value) << "," << (r.valid ? 1 : 0) << ","
       << sanitize(r.status) << "," << (r.abs_delta_oracle ? format_double(*r.abs_delta_oracle) : "") << "\n";
  }
}

ResultTable read_results_csv(std::istream& is) {
  ResultTable table;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line)) throw ConfigError("empty results file", "line 1");
  ++lineno;
  if (line.rfind("# ", 0) != 0) throw ConfigError("missing '# ' JSON header", "line 1");
  table.header_json = line.substr(2);
  if (!json::accept(table.header_json)) throw ConfigError("header is not valid JSON", "line 1");
  if (!std::getline(is, line)) throw ConfigError("missing column header", "line 2");
  ++lineno;
  {
    const auto cols = split_csv(line);
    if (cols.size() != kNumColumns) throw ConfigError("unexpected column header", "line 2");
    for (std::size_t i = 0; i < kNumColumns; ++i) {
      if (cols[i] != kColumns[i]) throw ConfigError("unexpected column '" + cols[i] + "'", "line 2");
    }
  }
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    const std::string where = "line " + std::to_string(lineno);
    if (f.size() != kNumColumns) throw ConfigError("expected " + std::to_string(kNumColumns) + " fields", where);
    ResultRow r;
    try {
      r.point = static_cast<std::size_t>(std::stoull(f[0]));
    } catch (const std::exception&) {
      throw ConfigError("malformed point index", where);
    }
    r.kind = f[1];
    if (r.kind != "single" && r.kind != "two_photon") throw ConfigError("unknown kind '" + r.kind + "'", where);
    const std::size_t nc = r.kind == "single" ? 4 : 8;
    for (std::size_t c = 0; c < nc; ++c) r.coords.push_back(parse_double(f[2 + c], lineno));
    r.z = parse_double(f[10], lineno);
    r.t = parse_double(f[11], lineno);
    r.g = parse_double(f[12], lineno);
    try {
      r.method = method_from_string(f[13]);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), where);
    }
    r.value = parse_double(f[14], lineno);
    if (f[15] != "0" && f[15] != "1") throw ConfigError("valid must be 0 or 1", where);
    r.valid = f[15] == "1";
    r.status = f[16];
    if (!f[17].empty()) r.abs_delta_oracle = parse_double(f[17], lineno);
    table.rows.push_back(std::move(r));
  }
  return table;
}

std::string CompareSummary::to_json() const {
  json j;
  j["skipped_rows"] = skipped_rows;
  j["pairs"] = json::array();
  for (const auto& p : pairs) {
    json pj = {{"a", std::string(to_string(p.a))},
               {"b", std::string(to_string(p.b))},
               {"samples", p.samples},
               {"max_rel", p.max_rel},
               {"mean_rel", p.mean_rel}};
    pj["points"] = json::array();
    for (const auto& pp : p.points) {
      pj["points"].push_back(
          {{"point", pp.point}, {"samples", pp.samples}, {"max_rel", pp.max_rel}, {"mean_rel", pp.mean_rel}});
    }
    j["pairs"].push_back(pj);
  }
  return j.dump();
}

CompareSummary compare_report(const ResultTable& table) {
  std::vector<Method> methods;
  for (const auto& r : table.rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }
  if (methods.size() < 2) throw ConfigError("comparison needs at least two methods", "method");

  // (point, z) -> method -> value, ok rows only
  std::map<std::pair<std::size_t, double>, std::map<Method, double>> cells;
  CompareSummary s;
  for (const auto& r : table.rows) {
    if (r.status != "ok" || !std::isfinite(r.value)) {
      ++s.skipped_rows;
      continue;
    }
    cells[{r.point, r.z}][r.method] = r.value;
  }
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      PairDeviation pd{methods[i], methods[j], {}, 0.0, 0.0, 0};
      std::map<std::size_t, PairDeviation::PerPoint> per;
      double sum = 0.0;
      for (const auto& [key, vals] : cells) {
        const auto a = vals.find(methods[i]);
        const auto b = vals.find(methods[j]);
        if (a == vals.end() || b == vals.end()) continue;
        const double rel = std::abs(a->second - b->second) / std::max(std::abs(b->second), 1e-300);
        auto& pp = per.try_emplace(key.first, PairDeviation::PerPoint{key.first, 0, 0.0, 0.0}).first->second;
        pp.samples += 1;
        pp.max_rel = std::max(pp.max_rel, rel);
        pp.mean_rel += rel;
        pd.samples += 1;
        pd.max_rel = std::max(pd.max_rel, rel);
        sum += rel;
      }
      for (auto& [idx, pp] : per) {
        pp.mean_rel /= static_cast<double>(pp.samples);
        pd.points.push_back(pp);
      }
      pd.mean_rel = pd.samples ? sum / static_cast<double>(pd.samples) : 0.0;
      s.pairs.push_back(std::move(pd));
    }
  }
  return s;
}

}  // namespace nmipe::scenario
