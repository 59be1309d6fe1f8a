// lmw: command-line front end for the lmwishart library.
//
// Exit codes: 0 ok or consistent, 10 refuted, 11 inconclusive, 12 a numeric
// check failed, 64 usage or malformed input, 65 invalid graph or order,
// 66 out of domain or not positive definite, 67 combinatorial limit, 70 other.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lmwishart/io.hpp"
#include "lmwishart/lmwishart.hpp"

namespace {

using lmw::io::json;

enum Exit : int {
  kOk = 0,
  kRefuted = 10,
  kInconclusive = 11,
  kCheckFailed = 12,
  kUsage = 64,
  kInvalidGraph = 65,
  kDomain = 66,
  kLimit = 67,
  kInternal = 70,
};

struct Common {
  std::string input = "-";
  std::string output;
  bool pretty = false;
};

void emit(const Common& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw lmw::ParseError("cannot write '" + c.output + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

lmw::Convention parse_convention(const std::string& s) {
  if (s == "I" || s == "typeI") return lmw::Convention::TypeI;
  return lmw::Convention::TypeII;
}

lmw::io::GraphInput load_graph(const std::string& path) {
  const std::string origin = path == "-" ? "<stdin>" : path;
  return lmw::io::parse_graph(lmw::io::parse_json(lmw::io::read_input(path), origin), origin);
}

/// --order-index wins, then an order given in the file, then the first enumerated order.
lmw::PerfectOrder pick_order(const lmw::io::GraphInput& in, int index) {
  if (index < 0 && in.order) return *in.order;
  if (!lmw::is_decomposable(in.graph).chordal) throw lmw::NotDecomposable("graph is not decomposable");
  auto orders = lmw::enumerate_perfect_orders(in.graph);
  const int i = index < 0 ? 0 : index;
  if (i >= static_cast<int>(orders.size()))
    throw lmw::ParseError("order index " + std::to_string(i) + " out of range (" + std::to_string(orders.size()) + " perfect orders)");
  return orders[static_cast<std::size_t>(i)];
}

std::string join(const std::vector<std::string>& lines, const std::string& indent) {
  std::string out;
  for (const auto& l : lines) out += indent + l + "\n";
  return out;
}

std::string set_text(const json& j) {
  std::string out = "{";
  for (std::size_t i = 0; i < j.size(); ++i) out += (i ? "," : "") + std::to_string(j[i].get<int>());
  return out + "}";
}

std::string sets_text(const json& j) {
  std::string out;
  for (std::size_t i = 0; i < j.size(); ++i) out += (i ? " " : "") + set_text(j[i]);
  return out;
}

std::string pretty_decomposition(const json& dec) {
  std::ostringstream s;
  s << "  vertex  exponent of D_jj\n";
  for (auto& [v, e] : dec["vertex_exponents"].items()) s << "  " << v << std::string(v.size() < 8 ? 8 - v.size() : 1, ' ') << e.get<std::string>() << "\n";
  if (!dec["residuals"].empty()) {
    s << "  residual minors\n";
    for (const auto& t : dec["residuals"]) s << "    det Sigma_" << set_text(t["set"]) << " ^ (" << t["exponent"].get<std::string>() << ")\n";
  }
  return s.str();
}

std::string pretty_analysis(const json& j) {
  std::ostringstream s;
  s << "vertices " << j["graph"]["vertices"] << ", decomposable " << (j["decomposable"].get<bool>() ? "yes" : "no") << "\n";
  if (!j["decomposable"].get<bool>()) return s.str();
  s << "cliques (" << j["r"] << "): " << sets_text(j["cliques"]) << "\n";
  s << "homogeneous: " << (j["homogeneous"].get<bool>() ? "yes" : "no") << "\n";
  s << "perfect orders: " << j["orders"].size() << ", max r_D " << j["max_r_D"] << "\n";
  for (const auto& o : j["orders"]) s << "  [" << o["index"] << "] " << sets_text(o["cliques"]) << "  r_D=" << o["r_D"] << "\n";
  return s.str();
}

std::string pretty_report(const json& j) {
  std::ostringstream s;
  s << "LM (" << j["conjecture"].get<std::string>() << ") on order " << sets_text(j["order"]["cliques"]) << "\n";
  s << "verdict: " << j["verdict"].get<std::string>() << "\n";
  if (!j["note"].get<std::string>().empty()) s << "note: " << j["note"].get<std::string>() << "\n";
  s << "r = " << j["r"] << ", r_D = " << j["r_D"] << ", conjectured dimension " << j["conjectured_dimension"] << ", achieved " << j["achieved_dimension"]
    << ", refined " << j["refined_dimension"] << "\n";
  s << "integrability set:\n" << join(j["constraints"].get<std::vector<std::string>>(), "  ");
  if (j["witness"]["point"].is_object()) {
    s << "witness (" << j["witness"]["set"].get<std::string>() << " set):";
    for (auto& [k, v] : j["witness"]["point"].items()) s << " " << k << "=" << v.get<std::string>();
    s << "\n";
  }
  s << "closed-form ratio: " << j["closed_form_ratio"]["rendered"].get<std::string>() << "\n";
  return s.str();
}

int verdict_exit(lmw::Verdict v) {
  switch (v) {
    case lmw::Verdict::Refuted:
      return kRefuted;
    case lmw::Verdict::Inconclusive:
      return kInconclusive;
    default:
      return kOk;
  }
}

int run_analyze(const Common& c) {
  auto in = load_graph(c.input);
  json j = lmw::io::analyze(in.graph);
  if (!in.name.empty()) j["name"] = in.name;
  emit(c, c.pretty ? pretty_analysis(j) : dump(j));
  return kOk;
}

int run_decompose(const Common& c, int order_index, const std::string& conv, const std::string& grouping) {
  auto in = load_graph(c.input);
  lmw::PerfectOrder o = pick_order(in, order_index);
  const lmw::Convention convention = parse_convention(conv);
  json j;
  j["schema"] = lmw::io::kDecompositionSchema;
  j["order"] = lmw::io::to_json(o);
  if (o.r() == 1) throw lmw::ParseError("the graph is complete; there is no Markov ratio to decompose");
  lmw::Dag d = lmw::dag_induced_by_order(o, true);
  auto dec = lmw::decompose_markov_ratio(o, d, convention, grouping == "reduced" ? lmw::Grouping::Reduced : lmw::Grouping::PerSeparator);
  auto anc = lmw::ancestral_separators(o, d);
  auto cs = lmw::integrability_set_from_decomposition(dec);
  j["dag"] = lmw::io::to_json(d);
  j["r_D"] = anc.r_d;
  j["ancestral_separators"] = lmw::io::to_json(anc.separators);
  j["decomposition"] = lmw::io::to_json(dec);
  j["closed_form_ratio"] = {{"residuals", lmw::io::to_json(lmw::closed_form_ratio_residuals(dec))},
                            {"rendered", lmw::describe(lmw::closed_form_ratio_residuals(dec))}};
  j["integrability_set"] = lmw::io::to_json(cs);
  auto dim = lmw::feasible_dimension(cs);
  j["dimension"] = dim ? json(*dim) : json(nullptr);
  j["identified_set"] = lmw::io::to_json(convention == lmw::Convention::TypeII ? lmw::set_BP(o) : lmw::set_AP(o));
  if (c.pretty) {
    std::string text = "order " + sets_text(j["order"]["cliques"]) + ", r_D = " + std::to_string(anc.r_d) + "\n";
    text += pretty_decomposition(j["decomposition"]);
    text += "closed-form ratio: " + j["closed_form_ratio"]["rendered"].get<std::string>() + "\n";
    text += "integrability set:\n" + join(j["integrability_set"].get<std::vector<std::string>>(), "  ");
    text += std::string(convention == lmw::Convention::TypeII ? "B_P" : "A_P") + ":\n" + join(j["identified_set"].get<std::vector<std::string>>(), "  ");
    emit(c, text);
  } else {
    emit(c, dump(j));
  }
  return kOk;
}

int run_verify(const Common& c, int order_index, const std::string& conj, const lmw::VerifyOptions& opts) {
  auto in = load_graph(c.input);
  lmw::PerfectOrder o = pick_order(in, order_index);
  auto rep = lmw::verify_counterexample(in.graph, o, parse_convention(conj), opts);
  json j = lmw::io::to_json(rep, opts);
  emit(c, c.pretty ? pretty_report(j) : dump(j));
  return verdict_exit(rep.verdict);
}

int run_search(const Common& c, int max_vertices, const std::string& conv, const lmw::VerifyOptions& opts) {
  auto res = lmw::search_counterexamples(max_vertices, parse_convention(conv), opts);
  json j;
  j["schema"] = lmw::io::kSearchSchema;
  j["max_vertices"] = max_vertices;
  j["conjecture"] = parse_convention(conv) == lmw::Convention::TypeII ? "II" : "I";
  j["graphs"] = res.graphs;
  j["homogeneous_skipped"] = res.homogeneous_skipped;
  j["orders"] = res.orders;
  j["candidates"] = res.candidates;
  json reports = json::array();
  for (const auto& r : res.reports) reports.push_back(lmw::io::to_json(r, opts));
  j["reports"] = reports;
  if (c.pretty) {
    std::ostringstream s;
    s << res.graphs << " graphs, " << res.homogeneous_skipped << " homogeneous skipped, " << res.orders << " orders, " << res.candidates
      << " with r_D >= 2, " << res.reports.size() << " refuted\n";
    for (const auto& r : reports)
      s << "  p=" << r["graph"]["vertices"] << " order " << sets_text(r["order"]["cliques"]) << "  dimension " << r["achieved_dimension"] << "/"
        << r["refined_dimension"] << " > " << r["conjectured_dimension"] << "\n";
    emit(c, s.str());
  } else {
    emit(c, dump(j));
  }
  return res.reports.empty() ? kOk : kRefuted;
}

int run_sample(const Common& c, int n, std::uint64_t seed) {
  const std::string origin = c.input == "-" ? "<stdin>" : c.input;
  auto [d, params] = lmw::io::parse_params(lmw::io::parse_json(lmw::io::read_input(c.input), origin), origin);
  auto draws = lmw::sample_dag_wishart(d, params, seed, n);
  json j;
  j["schema"] = lmw::io::kSamplesSchema;
  j["dag"] = lmw::io::to_json(d);
  j["seed"] = seed;
  j["n"] = n;
  j["log_normalizing_constant"] = lmw::log_z_dag_wishart(d, params);
  json samples = json::array();
  for (const auto& m : draws) samples.push_back(lmw::io::matrix_to_json(m));
  j["samples"] = samples;
  emit(c, dump(j));
  return kOk;
}

int run_jacobian(const Common& c, int count, int max_vertices, std::uint64_t seed) {
  constexpr double kTolerance = 1e-10;
  auto s = lmw::jacobian_sweep(count, max_vertices, seed);
  json j = {{"schema", lmw::io::kJacobianSchema},
            {"instances", s.instances},
            {"max_vertices", max_vertices},
            {"seed", seed},
            {"max_relative_error", s.max_relative_error},
            {"tolerance", kTolerance},
            {"pass", s.max_relative_error <= kTolerance}};
  if (c.pretty) {
    std::ostringstream o;
    o << s.instances << " instances, max relative error " << s.max_relative_error << (s.max_relative_error <= kTolerance ? " (pass)" : " (FAIL)") << "\n";
    emit(c, o.str());
  } else {
    emit(c, dump(j));
  }
  return s.max_relative_error <= kTolerance ? kOk : kCheckFailed;
}

void add_common(CLI::App* sub, Common& c, bool with_input = true) {
  if (with_input) sub->add_option("input", c.input, "input JSON file, '-' for stdin")->required();
  sub->add_option("-o,--output", c.output, "write to this file instead of stdout");
  sub->add_flag("--pretty", c.pretty, "human-readable text instead of JSON");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Letac-Massam Wishart analysis on decomposable graphs"};
  app.require_subcommand(1);
  app.allow_extras(false);

  Common common;
  int order_index = -1;
  std::string convention = "II";
  std::string grouping = "per-separator";
  lmw::VerifyOptions vopts;
  vopts.workers = lmw::default_workers();
  int max_vertices = 6;
  int count = 1;
  std::uint64_t seed = lmw::kDefaultSeed;
  int jac_count = 200;
  int jac_vertices = 8;

  auto* analyze = app.add_subcommand("analyze", "cliques, perfect orders, homogeneity, Hasse tree, induced DAGs and r_D");
  add_common(analyze, common);

  auto* decompose = app.add_subcommand("decompose", "Markov ratio in the D_jj of the induced DAG version, with the integrability set");
  add_common(decompose, common);
  decompose->add_option("--order-index", order_index, "index into the enumerated perfect orders")->check(CLI::NonNegativeNumber);
  decompose->add_option("--convention", convention, "I (Type I, A_P) or II (Type II, B_P)")->check(CLI::IsMember({"I", "II"}));
  decompose->add_option("--grouping", grouping, "residual grouping")->check(CLI::IsMember({"reduced", "per-separator"}));

  auto* verify = app.add_subcommand("verify", "run the counterexample pipeline; exit 10 when refuted");
  add_common(verify, common);
  verify->add_option("--order-index", order_index, "index into the enumerated perfect orders")->check(CLI::NonNegativeNumber);
  verify->add_option("--conjecture", convention, "I or II")->check(CLI::IsMember({"I", "II"}));
  verify->add_option("--samples", vopts.samples, "Monte Carlo samples per estimate; 0 skips the numeric checks")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", vopts.seed, "random seed");

  auto* search = app.add_subcommand("search", "exhaustive search over connected decomposable graphs; exit 10 when anything is refuted");
  add_common(search, common, false);
  search->add_option("--max-vertices", max_vertices, "largest vertex count")->check(CLI::Range(2, lmw::kDefaultSearchCap));
  search->add_option("--convention", convention, "I or II")->check(CLI::IsMember({"I", "II"}));
  search->add_option("--samples", vopts.samples, "Monte Carlo samples per candidate; 0 means symbolic checks only")->check(CLI::NonNegativeNumber);
  search->add_option("--seed", vopts.seed, "random seed");

  auto* sample = app.add_subcommand("sample", "draw from a DAG Wishart distribution");
  add_common(sample, common);
  sample->add_option("-n,--count", count, "number of draws")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "random seed");

  auto* jacobian = app.add_subcommand("jacobian-check", "clique/separator product against the parent-set form on random perfect DAGs");
  add_common(jacobian, common, false);
  jacobian->add_option("--count", jac_count, "number of instances")->check(CLI::PositiveNumber);
  jacobian->add_option("--max-vertices", jac_vertices, "largest vertex count")->check(CLI::Range(1, 12));
  jacobian->add_option("--seed", seed, "random seed");

  // Search defaults to symbolic checks only.
  search->preparse_callback([&](std::size_t) { vopts.samples = 0; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return run_analyze(common);
    if (*decompose) return run_decompose(common, order_index, convention, grouping);
    if (*verify) return run_verify(common, order_index, convention, vopts);
    if (*search) return run_search(common, max_vertices, convention, vopts);
    if (*sample) return run_sample(common, count, seed);
    if (*jacobian) return run_jacobian(common, jac_count, jac_vertices, seed);
  } catch (const lmw::ParseError& e) {
    std::cerr << "lmw: " << e.what() << "\n";
    return kUsage;
  } catch (const lmw::NotDecomposable& e) {
    std::cerr << "lmw: " << e.what() << "\n";
    return kInvalidGraph;
  } catch (const lmw::NotPerfectOrder& e) {
    std::cerr << "lmw: " << e.what() << "\n";
    return kInvalidGraph;
  } catch (const lmw::NotDagVersion& e) {
    std::cerr << "lmw: " << e.what() << "\n";
    return kInvalidGraph;
  } catch (const lmw::OutOfDomain& e) {
    std::cerr << "lmw: " << e.what() << "\n";
    return kDomain;
  } catch (const lmw::NotPositiveDefinite& e) {
    std::cerr << "lmw: " << e.what() << "\n";
    return kDomain;
  } catch (const lmw::CombinatorialLimit& e) {
    std::cerr << "lmw: " << e.what() << "\n";
    return kLimit;
  } catch (const std::exception& e) {
    std::cerr << "lmw: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
