#pragma once

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lmwishart/verification.hpp"

/// JSON input and output. Every document carries a "schema" tag matching a
/// file under schemas/.
namespace lmw::io {

using nlohmann::json;

inline constexpr const char* kGraphSchema = "lmw.graph/1";
inline constexpr const char* kParamsSchema = "lmw.dag_wishart_params/1";
inline constexpr const char* kAnalysisSchema = "lmw.analysis/1";
inline constexpr const char* kDecompositionSchema = "lmw.decomposition/1";
inline constexpr const char* kReportSchema = "lmw.report/1";
inline constexpr const char* kSearchSchema = "lmw.search/1";
inline constexpr const char* kSamplesSchema = "lmw.samples/1";
inline constexpr const char* kJacobianSchema = "lmw.jacobian/1";

/// Reads a file, or stdin for "-".
inline std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Parses JSON, reporting syntax errors with line and column.
inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

namespace detail {

[[noreturn]] inline void bad(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

inline int require_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<int>();
}

inline VertexSet vertex_set(const json& j, int p, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of vertices");
  VertexSet s;
  for (std::size_t i = 0; i < j.size(); ++i) {
    int v = require_int(j[i], where + "[" + std::to_string(i) + "]");
    if (v < 1 || v > p) bad(where, "vertex " + std::to_string(v) + " out of range 1.." + std::to_string(p));
    s.insert(v);
  }
  return s;
}

inline Eigen::MatrixXd matrix(const json& j, int p, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != p) bad(where, "expected a " + std::to_string(p) + "x" + std::to_string(p) + " matrix");
  Eigen::MatrixXd m(p, p);
  for (int i = 0; i < p; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != p) bad(where, "row " + std::to_string(i + 1) + " has the wrong length");
    for (int k = 0; k < p; ++k) {
      if (!j[i][k].is_number()) bad(where, "entry (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ") is not a number");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

}  // namespace detail

struct GraphInput {
  std::string name;
  UndirectedGraph graph;
  /// Clique order given in the file, validated.
  std::optional<PerfectOrder> order;
};

/// {"vertices": p, "edges": [[u, v], ...]} or {"vertices": p, "cliques": [[...], ...]},
/// optionally with "name" and an "order" (list of cliques).
inline GraphInput parse_graph(const json& j, const std::string& origin = "graph") {
  if (!j.is_object()) detail::bad(origin, "expected a JSON object");
  if (!j.contains("vertices")) detail::bad(origin, "missing \"vertices\"");
  const int p = detail::require_int(j["vertices"], origin + ".vertices");
  if (p < 1 || p > kMaxVertices) detail::bad(origin, "vertex count must be in 1.." + std::to_string(kMaxVertices));
  GraphInput out;
  out.name = j.value("name", "");
  out.graph = UndirectedGraph(p);
  if (j.contains("edges")) {
    const json& e = j["edges"];
    if (!e.is_array()) detail::bad(origin + ".edges", "expected an array");
    for (std::size_t i = 0; i < e.size(); ++i) {
      std::string where = origin + ".edges[" + std::to_string(i) + "]";
      VertexSet s = detail::vertex_set(e[i], p, where);
      if (e[i].size() != 2 || s.size() != 2) detail::bad(where, "an edge joins two distinct vertices");
      auto uv = s.to_vector();
      out.graph.add_edge(uv[0], uv[1]);
    }
  }
  if (j.contains("cliques")) {
    const json& c = j["cliques"];
    if (!c.is_array()) detail::bad(origin + ".cliques", "expected an array");
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto vs = detail::vertex_set(c[i], p, origin + ".cliques[" + std::to_string(i) + "]").to_vector();
      for (std::size_t a = 0; a < vs.size(); ++a)
        for (std::size_t b = a + 1; b < vs.size(); ++b) out.graph.add_edge(vs[a], vs[b]);
    }
  }
  if (!j.contains("edges") && !j.contains("cliques")) detail::bad(origin, "need \"edges\" or \"cliques\"");
  if (j.contains("order")) {
    const json& o = j["order"];
    if (!o.is_array()) detail::bad(origin + ".order", "expected an array of cliques");
    std::vector<VertexSet> seq;
    for (std::size_t i = 0; i < o.size(); ++i) seq.push_back(detail::vertex_set(o[i], p, origin + ".order[" + std::to_string(i) + "]"));
    try {
      out.order = derive_order(out.graph, seq);
    } catch (const Error& e) {
      detail::bad(origin + ".order", e.what());
    }
  }
  return out;
}

/// {"dag": {"vertices": p, "arcs": [[u, v], ...]}, "form": "eta"|"gamma", "shape": [...], "U": [[...]]}.
inline std::pair<Dag, DagWishartParams> parse_params(const json& j, const std::string& origin = "params") {
  if (!j.is_object()) detail::bad(origin, "expected a JSON object");
  for (const char* key : {"dag", "form", "shape", "U"})
    if (!j.contains(key)) detail::bad(origin, std::string("missing \"") + key + "\"");
  const json& dj = j["dag"];
  if (!dj.is_object() || !dj.contains("vertices") || !dj.contains("arcs")) detail::bad(origin + ".dag", "need \"vertices\" and \"arcs\"");
  const int p = detail::require_int(dj["vertices"], origin + ".dag.vertices");
  if (p < 1 || p > kMaxVertices) detail::bad(origin + ".dag", "vertex count out of range");
  if (!dj["arcs"].is_array()) detail::bad(origin + ".dag.arcs", "expected an array");
  std::vector<std::pair<int, int>> arcs;
  for (std::size_t i = 0; i < dj["arcs"].size(); ++i) {
    const json& a = dj["arcs"][i];
    std::string where = origin + ".dag.arcs[" + std::to_string(i) + "]";
    if (!a.is_array() || a.size() != 2) detail::bad(where, "an arc is [parent, child]");
    int u = detail::require_int(a[0], where), v = detail::require_int(a[1], where);
    if (u < 1 || u > p || v < 1 || v > p || u == v) detail::bad(where, "bad arc endpoints");
    arcs.emplace_back(u, v);
  }
  Dag d(1);
  try {
    d = Dag(p, arcs);
  } catch (const Error& e) {
    detail::bad(origin + ".dag", e.what());
  }
  DagWishartParams params;
  const std::string form = j["form"].is_string() ? j["form"].get<std::string>() : "";
  if (form == "eta")
    params.form = ShapeForm::Eta;
  else if (form == "gamma")
    params.form = ShapeForm::Gamma;
  else
    detail::bad(origin + ".form", "must be \"eta\" or \"gamma\"");
  const json& s = j["shape"];
  if (!s.is_array() || static_cast<int>(s.size()) != p) detail::bad(origin + ".shape", "expected " + std::to_string(p) + " numbers");
  params.shape = Eigen::VectorXd(p);
  for (int i = 0; i < p; ++i) {
    if (!s[i].is_number()) detail::bad(origin + ".shape", "entry " + std::to_string(i + 1) + " is not a number");
    params.shape(i) = s[i].get<double>();
  }
  params.U = detail::matrix(j["U"], p, origin + ".U");
  return {d, params};
}

inline json to_json(VertexSet s) { return s.to_vector(); }

inline json to_json(const std::vector<VertexSet>& sets) {
  json a = json::array();
  for (VertexSet s : sets) a.push_back(to_json(s));
  return a;
}

inline json to_json(const UndirectedGraph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"vertices", g.num_vertices()}, {"edges", edges}};
}

inline json to_json(const PerfectOrder& o) {
  json seps = json::array();
  for (int j = 2; j <= o.r(); ++j) seps.push_back(to_json(o.separator(j)));
  return {{"cliques", to_json(o.cliques())}, {"separators", seps}};
}

inline json to_json(const Dag& d) {
  json arcs = json::array();
  for (auto [u, v] : d.arcs()) arcs.push_back({u, v});
  json numbering = json::array();
  for (int v = 1; v <= d.num_vertices(); ++v) numbering.push_back(d.number_of(v));
  return {{"vertices", d.num_vertices()}, {"arcs", arcs}, {"numbering", numbering}};
}

inline json to_json(const LinearConstraintSet& cs) { return describe(cs); }

inline json to_json(const std::vector<ResidualTerm>& terms) {
  json a = json::array();
  for (const auto& t : terms) a.push_back({{"set", to_json(t.set)}, {"exponent", t.exponent.to_string()}});
  return a;
}

inline json to_json(const MarkovRatioDecomposition& dec) {
  json vx = json::object();
  for (const auto& [v, e] : dec.vertex_exponents) vx[std::to_string(v)] = e.to_string();
  return {{"convention", to_string(dec.convention)},
          {"grouping", to_string(dec.grouping)},
          {"induced_by_order", dec.induced_by_order},
          {"vertex_exponents", vx},
          {"residuals", to_json(dec.residuals)}};
}

/// Parameter point keyed by symbol name, values as exact rationals.
inline json point_to_json(const RationalVector& x, int r) {
  json o = json::object();
  for (int i = 0; i < static_cast<int>(x.size()); ++i) o[symbol_at(i, r).name()] = x[i].get_str();
  return o;
}

/// Non-finite numbers become null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const McEstimate& e) {
  return {{"log_estimate", number(e.log_estimate)}, {"log_se", number(e.log_se())}, {"ess", number(e.ess)}, {"n", e.n}, {"failures", e.failures}};
}

inline json to_json(const B1Check& b) {
  return {{"first", to_json(b.first)},           {"second", to_json(b.second)},
          {"analytic_in_domain", b.analytic_in_domain}, {"closed_form", number(b.closed_form)},
          {"finite", b.finite},                   {"matches_closed_form", b.matches_closed_form}};
}

inline json to_json(const B2Check& b) {
  json vals = json::array(), ses = json::array();
  for (double v : b.values) vals.push_back(number(v));
  for (double v : b.standard_errors) ses.push_back(number(v));
  return {{"values", vals}, {"standard_errors", ses}, {"closed_form", b.closed_form}, {"max_spread", number(b.max_spread)}, {"threshold", number(b.threshold)}, {"pass", b.pass}};
}

inline json to_json(const CounterexampleReport& rep, const VerifyOptions& opts) {
  json j;
  j["schema"] = kReportSchema;
  j["conjecture"] = rep.convention == Convention::TypeII ? "II" : "I";
  j["graph"] = to_json(rep.graph);
  j["order"] = to_json(rep.order);
  j["dag"] = to_json(rep.dag);
  j["r"] = rep.r;
  j["r_D"] = rep.ancestral.r_d;
  j["ancestral_separators"] = to_json(rep.ancestral.separators);
  j["conjectured_dimension"] = rep.conjectured_dimension;
  j["achieved_dimension"] = rep.achieved_dimension ? json(*rep.achieved_dimension) : json(nullptr);
  j["refined_dimension"] = rep.refined_dimension ? json(*rep.refined_dimension) : json(nullptr);
  if (rep.verdict != Verdict::Inapplicable) {
    j["decomposition"] = to_json(rep.decomposition);
    j["refined_decomposition"] = to_json(rep.refined_decomposition);
  } else {
    j["decomposition"] = nullptr;
    j["refined_decomposition"] = nullptr;
  }
  j["constraints"] = to_json(rep.constraints);
  j["refined_constraints"] = to_json(rep.refined_constraints);
  json w;
  w["set"] = rep.witness_set.empty() ? json(nullptr) : json(rep.witness_set);
  w["point"] = rep.witness ? point_to_json(*rep.witness, rep.r) : json(nullptr);
  w["outside_identified"] = rep.witness_outside_identified;
  w["orders_checked"] = rep.orders_checked;
  j["witness"] = w;
  j["closed_form_ratio"] = {{"residuals", to_json(rep.residuals)}, {"rendered", describe(rep.residuals)}, {"vanish_at_witness", rep.residuals_vanish}};
  j["numeric"] = {{"samples", opts.samples},
                  {"seed", opts.seed},
                  {"b1", rep.b1 ? to_json(*rep.b1) : json(nullptr)},
                  {"b2", rep.b2 ? to_json(*rep.b2) : json(nullptr)}};
  j["verdict"] = to_string(rep.verdict);
  j["refuted"] = rep.refuted();
  j["note"] = rep.note;
  return j;
}

inline json hasse_to_json(const HasseTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes) nodes.push_back({{"members", to_json(n.members)}, {"parent", n.parent}, {"children", n.children}});
  return nodes;
}

/// Structural report: cliques, homogeneity, and per-order induced DAGs with r_D.
inline json analyze(const UndirectedGraph& g) {
  json j;
  j["schema"] = kAnalysisSchema;
  j["graph"] = to_json(g);
  const bool chordal = is_decomposable(g).chordal;
  j["decomposable"] = chordal;
  if (!chordal) return j;
  auto cl = maximal_cliques(g);
  j["cliques"] = to_json(cl);
  j["r"] = static_cast<int>(cl.size());
  const bool hom = is_homogeneous(g);
  j["homogeneous"] = hom;
  j["hasse_tree"] = hom ? hasse_to_json(hasse_tree(g)) : json(nullptr);
  json orders = json::array();
  int max_rd = 0, index = 0;
  for (const auto& o : enumerate_perfect_orders(g)) {
    json oj = to_json(o);
    oj["index"] = index++;
    if (o.r() > 1) {
      Dag d = dag_induced_by_order(o, true);
      auto anc = ancestral_separators(o, d);
      oj["dag"] = to_json(d);
      oj["r_D"] = anc.r_d;
      oj["ancestral_separators"] = to_json(anc.separators);
      max_rd = std::max(max_rd, anc.r_d);
    } else {
      oj["dag"] = to_json(transitive_dag_version(g));
      oj["r_D"] = 0;
      oj["ancestral_separators"] = json::array();
    }
    orders.push_back(oj);
  }
  j["orders"] = orders;
  j["max_r_D"] = max_rd;
  return j;
}

inline json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lmw::io
