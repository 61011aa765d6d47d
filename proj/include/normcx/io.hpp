// Copyright 2026 The Authors.
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

// JSON readers and writers for every file format the library exchanges.
// Rationals are always written as "p" or "p/q" strings; readers also accept
// JSON integers.

#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "normcx/error.hpp"
#include "normcx/fan.hpp"
#include "normcx/matroid.hpp"
#include "normcx/multipoly.hpp"
#include "normcx/normal.hpp"
#include "normcx/rational.hpp"

namespace normcx::io {

using json = nlohmann::ordered_json;

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInput, what + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInput, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json load_json(const std::string& path) {
  return parse_json(read_file(path), path);
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::kInput, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw Error(ErrorKind::kInput, "expected a rational, got " + j.dump());
}

inline json to_json(const Rational& r) { return r.str(); }

inline std::vector<std::string> string_list(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::kInput, "expected a list of ids");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw Error(ErrorKind::kInput, "ids must be strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

inline RatVector vector_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::kInput, "expected a vector");
  RatVector v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

inline json to_json(const RatVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

struct WeightedFan {
  Fan fan;
  WeightFunction weights;
};

/// {"ambient_dim": n, "rays": {...}, "max_cones": [...], "weights": {...}}.
/// Missing weights default to 1.
inline WeightedFan fan_from_json(const json& j) {
  const json& dim = field(j, "ambient_dim");
  if (!dim.is_number_unsigned()) {
    throw Error(ErrorKind::kInput, "ambient_dim must be a nonnegative integer");
  }
  std::map<std::string, RatVector> rays;
  const json& rj = field(j, "rays");
  if (!rj.is_object()) throw Error(ErrorKind::kInput, "rays must be an object");
  for (const auto& [id, gen] : rj.items()) rays.emplace(id, vector_from_json(gen));
  std::vector<std::vector<std::string>> cones;
  const json& cj = field(j, "max_cones");
  if (!cj.is_array()) throw Error(ErrorKind::kInput, "max_cones must be a list");
  for (const auto& c : cj) cones.push_back(string_list(c));
  Fan fan(dim.get<std::size_t>(), rays, cones);

  std::map<Cone, Rational> w;
  for (const auto& c : fan.max_cones()) w.emplace(c, Rational(1));
  if (j.contains("weights")) {
    const json& wj = j.at("weights");
    if (!wj.is_object()) throw Error(ErrorKind::kInput, "weights must be an object");
    for (const auto& [key, value] : wj.items()) {
      std::vector<std::string> ids;
      std::stringstream ss(key);
      for (std::string part; std::getline(ss, part, ',');) ids.push_back(part);
      std::optional<Cone> c;
      try {
        c = fan.cone_from_ids(ids);
      } catch (const Error&) {
      }
      auto it = c ? w.find(*c) : w.end();
      if (it == w.end()) {
        throw Error(ErrorKind::kInput, "weight on non-maximal cone {" + key + "}");
      }
      it->second = rational_from_json(value);
    }
  }
  return {std::move(fan), WeightFunction(std::move(w))};
}

inline json fan_to_json(const Fan& fan,
                        const std::optional<WeightFunction>& weights = {}) {
  json out;
  out["ambient_dim"] = fan.ambient_dim();
  json rays = json::object();
  for (RayIndex r = 0; r < fan.num_rays(); ++r) {
    rays[fan.ray_id(r)] = to_json(fan.generator(r));
  }
  out["rays"] = std::move(rays);
  json cones = json::array();
  for (const auto& c : fan.max_cones()) cones.push_back(fan.ids_of(c));
  out["max_cones"] = std::move(cones);
  if (weights) {
    json w = json::object();
    for (const auto& c : fan.max_cones()) w[fan.key(c)] = to_json(weights->at(fan, c));
    out["weights"] = std::move(w);
  }
  return out;
}

/// {"matrix": [["p/q", ...], ...]}.
inline InnerProduct inner_product_from_json(const json& j) {
  const json& mj = field(j, "matrix");
  if (!mj.is_array()) throw Error(ErrorKind::kInput, "matrix must be a list of rows");
  std::vector<RatVector> rows;
  for (const auto& row : mj) rows.push_back(vector_from_json(row));
  const std::size_t n = rows.size();
  for (const auto& row : rows) {
    if (row.size() != n) {
      throw Error(ErrorKind::kNonSquare, "inner product matrix is not square");
    }
  }
  return InnerProduct(n == 0 ? RatMatrix() : RatMatrix::from_rows(rows));
}

inline json to_json(const InnerProduct& ip) {
  json rows = json::array();
  for (std::size_t i = 0; i < ip.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < ip.dim(); ++k) row.push_back(to_json(ip.matrix()(i, k)));
    rows.push_back(std::move(row));
  }
  return json{{"matrix", std::move(rows)}};
}

/// {"<ray-id>": "p/q", ...}, total on the fan's rays.
inline ZValue z_from_json(const Fan& fan, const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kInput, "z must be an object");
  std::map<std::string, Rational> values;
  for (const auto& [id, v] : j.items()) values.emplace(id, rational_from_json(v));
  return ZValue::from_map(fan, values);
}

inline json z_to_json(const Fan& fan, const ZValue& z) {
  json out = json::object();
  for (RayIndex r = 0; r < fan.num_rays(); ++r) out[fan.ray_id(r)] = to_json(z[r]);
  return out;
}

inline json cone_ids(const Fan& fan, const Cone& c) { return fan.ids_of(c); }

inline json to_json(const Fan& fan, const CubicalityResult& res) {
  json out;
  out["verdict"] = std::string(to_string(res.verdict));
  if (res.witness) {
    out["witness"] = {{"tau", cone_ids(fan, res.witness->tau)},
                      {"rho", fan.ray_id(res.witness->rho)},
                      {"slack", to_json(res.witness->slack)}};
  }
  return out;
}

/// List of {"tau", "rho", "form", "strict"} records, each meaning
/// sum form[id] * z_id > 0 (or >= 0 when not strict).
inline json to_json(const Fan& fan, const CubicalCone& cone) {
  json out = json::array();
  for (const auto& ineq : cone.inequalities) {
    json form = json::object();
    for (RayIndex r = 0; r < fan.num_rays(); ++r) {
      if (!ineq.form[r].is_zero()) form[fan.ray_id(r)] = to_json(ineq.form[r]);
    }
    out.push_back({{"tau", cone_ids(fan, ineq.tau)},
                   {"rho", fan.ray_id(ineq.rho)},
                   {"form", std::move(form)},
                   {"strict", ineq.strict}});
  }
  return out;
}

/// {"degree": d, "terms": [{"monomial": [...], "coeff": "p/q"}, ...]} with
/// terms in lexicographic order of their sorted monomials.
inline json to_json(const MultiPoly& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) {
    terms.push_back({{"monomial", m}, {"coeff", to_json(c)}});
  }
  return json{{"degree", p.degree()}, {"terms", std::move(terms)}};
}

inline MultiPoly multipoly_from_json(const json& j) {
  MultiPoly p;
  for (const auto& t : field(j, "terms")) {
    p.add_term(string_list(field(t, "monomial")), rational_from_json(field(t, "coeff")));
  }
  return p;
}

/// {"ground": [...], "flats": [[...], ...]} or
/// {"graph": {"vertices": [...], "edges": [["a", "b"], ...]}}.
inline Matroid matroid_from_json(const json& j) {
  if (j.is_object() && j.contains("graph")) {
    const json& g = j.at("graph");
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : field(g, "edges")) {
      const auto ends = string_list(e);
      if (ends.size() != 2) throw Error(ErrorKind::kInput, "edges have two ends");
      edges.emplace_back(ends[0], ends[1]);
    }
    return Matroid::graphic(string_list(field(g, "vertices")), edges);
  }
  std::vector<std::vector<std::string>> flats;
  for (const auto& f : field(j, "flats")) flats.push_back(string_list(f));
  return Matroid::from_flat_lists(string_list(field(j, "ground")), flats);
}

inline json matroid_to_json(const Matroid& m) {
  json flats = json::array();
  for (Flat f : m.flats()) flats.push_back(m.ids(f));
  return json{{"ground", m.ground()}, {"flats", std::move(flats)}};
}

/// A list of flats, or {"flats": [...]}.
inline std::vector<Flat> building_set_from_json(const Matroid& m, const json& j) {
  const json& list = j.is_object() ? field(j, "flats") : j;
  if (!list.is_array()) throw Error(ErrorKind::kInput, "building set must be a list");
  std::vector<Flat> out;
  for (const auto& f : list) out.push_back(m.parse(string_list(f)));
  return out;
}

inline json building_set_to_json(const Matroid& m, const std::vector<Flat>& b) {
  json out = json::array();
  for (Flat f : b) out.push_back(m.ids(f));
  return out;
}

inline json to_json(const Matroid& mat, const CubicalCertificate& cert) {
  const Fan& fan = cert.bergman.fan;
  json table = json::array();
  for (const auto& row : cert.table) {
    json coeffs = json::object();
    for (std::size_t i = 0; i < row.nested.size(); ++i) {
      coeffs[mat.name(row.nested[i])] = to_json(row.a[i]);
    }
    json names = json::array();
    for (Flat f : row.nested) names.push_back(mat.name(f));
    table.push_back({{"nested", std::move(names)}, {"a", std::move(coeffs)}});
  }
  return json{{"m", cert.m.get_str()},
              {"escalations", cert.escalations},
              {"z", z_to_json(fan, cert.z)},
              {"table", std::move(table)}};
}

}  // namespace normcx::io
