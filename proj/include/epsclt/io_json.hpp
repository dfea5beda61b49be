#pragma once

// JSON input schemas (graphs, step graphons, site laws, limit models, grid
// families) and table serialization. Exact values travel as "p/q" strings
// so golden files never pick up float drift; float mode parses the same
// files and converts.

#include "epsclt/cumulants.hpp"
#include "epsclt/finite_n.hpp"
#include "epsclt/graphon.hpp"
#include "epsclt/graphs.hpp"
#include "epsclt/limit_laws.hpp"
#include "epsclt/scalar.hpp"
#include "epsclt/subsets.hpp"

#include <json.hpp>

#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace epsclt {

using Json = nlohmann::json;

namespace io_detail {

inline const Json& member(const Json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) throw SchemaError(path, key, "expected an object around this field");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path, key, "missing required field");
  return *it;
}

inline int member_int(const Json& j, const std::string& path, const std::string& key) {
  const Json& v = member(j, path, key);
  if (!v.is_number_integer()) throw SchemaError(path, key, "expected an integer");
  return v.get<int>();
}

}  // namespace io_detail

// Accepts JSON integers and strings "p" or "p/q". Floats are rejected:
// exact inputs keep exact mode exact, and float mode converts on read.
inline Rational parse_rational(const Json& j, const std::string& path, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number())
    throw SchemaError(path, field, "floats not accepted; write rationals as \"p/q\" strings");
  if (!j.is_string()) throw SchemaError(path, field, "expected an integer or a \"p/q\" string");
  try {
    return rational_from_string(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, field, e.what());
  }
}

template <ScalarType S>
S parse_scalar(const Json& j, const std::string& path, const std::string& field) {
  return scalar_ops<S>::from_rational(parse_rational(j, path, field));
}

// {"n": vertices, "edges": [[u, v], ...]} with 1-based endpoints.
inline SimpleGraph parse_graph(const Json& j, const std::string& path) {
  int n = io_detail::member_int(j, path, "n");
  if (n < 1) throw SchemaError(path, "n", "need at least one vertex");
  SimpleGraph g(n);
  auto it = j.find("edges");
  if (it == j.end()) return g;
  if (!it->is_array()) throw SchemaError(path, "edges", "expected an array of [u, v] pairs");
  for (std::size_t k = 0; k < it->size(); ++k) {
    std::string field = "edges[" + std::to_string(k) + "]";
    const Json& e = (*it)[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw SchemaError(path, field, "expected [u, v] with integer endpoints");
    int u = e[0].get<int>(), v = e[1].get<int>();
    if (u < 1 || u > n || v < 1 || v > n) throw SchemaError(path, field, "endpoint out of range");
    if (u == v) throw SchemaError(path, field, "loops not allowed");
    g.add_edge(u, v);
  }
  return g;
}

// One of:
//   {"constant": value}
//   {"graph": graph}                     (the graph's step graphon)
//   {"breaks": [...], "values": [[...]]} (explicit cells)
template <ScalarType S>
StepGraphonT<S> parse_graphon(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "", "expected an object");
  if (j.contains("constant")) {
    S level = parse_scalar<S>(j["constant"], path, "constant");
    try {
      return StepGraphonT<S>::constant(std::move(level));
    } catch (const std::domain_error& e) {
      throw SchemaError(path, "constant", e.what());
    }
  }
  if (j.contains("graph")) return graphon_from_graph<S>(parse_graph(j["graph"], path + ".graph"));
  if (!j.contains("breaks") || !j.contains("values"))
    throw SchemaError(path, "", "expected one of: constant, graph, or breaks+values");
  const Json& jb = j["breaks"];
  const Json& jv = j["values"];
  if (!jb.is_array() || !jv.is_array())
    throw SchemaError(path, "breaks", "breaks and values must be arrays");
  std::vector<S> breaks;
  for (std::size_t k = 0; k < jb.size(); ++k)
    breaks.push_back(parse_scalar<S>(jb[k], path, "breaks[" + std::to_string(k) + "]"));
  std::vector<std::vector<S>> values;
  for (std::size_t r = 0; r < jv.size(); ++r) {
    std::string field = "values[" + std::to_string(r) + "]";
    if (!jv[r].is_array()) throw SchemaError(path, field, "expected a row array");
    std::vector<S> row;
    for (std::size_t c = 0; c < jv[r].size(); ++c)
      row.push_back(parse_scalar<S>(jv[r][c], path, field + "[" + std::to_string(c) + "]"));
    values.push_back(std::move(row));
  }
  try {
    return StepGraphonT<S>(std::move(breaks), std::move(values));
  } catch (const std::domain_error& e) {
    throw SchemaError(path, "values", e.what());
  }
}

// Site law: either {"lambda": r, "sigma2": r} (semicircular with that mean
// and variance) or {"moments": [m1, m2, ...]} (explicit; mean and variance
// are read off the list).
template <ScalarType S>
struct SiteLawSpecT {
  S lambda;
  S sigma2;
  std::optional<std::vector<S>> moments;
};

template <ScalarType S>
SiteLawSpecT<S> parse_law(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "", "expected an object");
  if (j.contains("moments")) {
    const Json& jm = j["moments"];
    if (!jm.is_array() || jm.size() < 2)
      throw SchemaError(path, "moments", "need at least moments m1 and m2");
    std::vector<S> m;
    for (std::size_t k = 0; k < jm.size(); ++k)
      m.push_back(parse_scalar<S>(jm[k], path, "moments[" + std::to_string(k) + "]"));
    ScalarLawT<S> law(m);
    return {law.mean(), law.variance(), std::move(m)};
  }
  if (!j.contains("lambda") || !j.contains("sigma2"))
    throw SchemaError(path, "", "expected either moments or lambda+sigma2");
  S lambda = parse_scalar<S>(j["lambda"], path, "lambda");
  S sigma2 = parse_scalar<S>(j["sigma2"], path, "sigma2");
  if (sigma2 < scalar_ops<S>::from_int(0)) throw SchemaError(path, "sigma2", "variance must be >= 0");
  return {std::move(lambda), std::move(sigma2), std::nullopt};
}

// {"L": layers, "g_L": graph on [L], "w": graphon, "law": law,
//  "p_max": highest word length (optional, default 8)}.
template <ScalarType S>
LimitModelT<S> parse_model(const Json& j, const std::string& path) {
  int L = io_detail::member_int(j, path, "L");
  if (L < 1 || L > kMaxLayers)
    throw SchemaError(path, "L", "layer count must be in [1," + std::to_string(kMaxLayers) + "]");
  SimpleGraph gL = parse_graph(io_detail::member(j, path, "g_L"), path + ".g_L");
  if (gL.vertex_count() != L) throw SchemaError(path, "g_L", "vertex count must equal L");
  StepGraphonT<S> w = parse_graphon<S>(io_detail::member(j, path, "w"), path + ".w");
  SiteLawSpecT<S> law = parse_law<S>(io_detail::member(j, path, "law"), path + ".law");
  int p_max = 8;
  if (j.contains("p_max")) {
    p_max = io_detail::member_int(j, path, "p_max");
    if (p_max < 1) throw SchemaError(path, "p_max", "p_max must be >= 1");
  }
  return LimitModelT<S>{std::move(gL), std::move(w), std::move(law.lambda), std::move(law.sigma2),
                        std::move(law.moments), p_max};
}

// {"kind": "complete" | "edgeless"} or
// {"kind": "blowup", "pattern": graph} or {"kind": "fixed", "graph": graph}.
inline GridFamily parse_family(const Json& j, const std::string& path) {
  const Json& jk = io_detail::member(j, path, "kind");
  if (!jk.is_string()) throw SchemaError(path, "kind", "expected a string");
  std::string kind = jk.get<std::string>();
  if (kind == "complete") return GridFamily::complete();
  if (kind == "edgeless") return GridFamily::edgeless();
  if (kind == "blowup")
    return GridFamily::blowup(parse_graph(io_detail::member(j, path, "pattern"), path + ".pattern"));
  if (kind == "fixed")
    return GridFamily::fixed(parse_graph(io_detail::member(j, path, "graph"), path + ".graph"));
  throw SchemaError(path, "kind", "unknown family kind \"" + kind + "\"");
}

// The family a model document names for its finite side, if any; falls back
// to the family realizing a constant 0/1 graphon exactly.
inline std::optional<GridFamily> family_of_document(const Json& doc, const StepGraphon& w) {
  if (doc.is_object() && doc.contains("family")) return parse_family(doc["family"], "$.family");
  if (w.is_identically(Rational(1))) return GridFamily::complete();
  if (w.is_identically(Rational(0))) return GridFamily::edgeless();
  return std::nullopt;
}

// ====== serialization ======

inline std::string scalar_to_string(const Rational& r) { return r.str(); }

inline std::string scalar_to_string(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline Json scalar_to_json(const Rational& r) { return Json(r.str()); }
inline Json scalar_to_json(double v) { return Json(v); }

template <ScalarType S>
Json rows_to_json(const std::vector<ConvergenceRowT<S>>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json o;
    o["p"] = r.p;
    o["n"] = r.n;
    o["finite"] = scalar_to_json(r.finite);
    o["limit"] = scalar_to_json(r.limit);
    o["abs_diff"] = scalar_to_json(r.abs_diff);
    arr.push_back(std::move(o));
  }
  return arr;
}

template <ScalarType S>
std::string rows_to_csv(const std::vector<ConvergenceRowT<S>>& rows) {
  std::ostringstream os;
  os << "p,n,finite,limit,abs_diff\n";
  for (const auto& r : rows)
    os << r.p << ',' << r.n << ',' << scalar_to_string(r.finite) << ',' << scalar_to_string(r.limit)
       << ',' << scalar_to_string(r.abs_diff) << '\n';
  return os.str();
}

}  // namespace epsclt
