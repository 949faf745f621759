#include "folio/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "folio/engine.hpp"
#include "folio/gadgets.hpp"
#include "folio/normalize.hpp"
#include "folio/parser.hpp"
#include "folio/random.hpp"
#include "folio/selftest.hpp"
#include "folio/structure_io.hpp"
#include "folio/thickness.hpp"

namespace folio {

namespace {

struct QueryInput {
  std::string file;
  std::string expr;

  void attach(CLI::App* app, bool positional = true) {
    if (positional) app->add_option("QUERY", file, "File holding the formula");
    app->add_option("--query", file, "File holding the formula");
    app->add_option("-e,--expr", expr, "Formula given inline");
  }

  std::string text() const {
    if (!expr.empty()) return expr;
    if (file.empty()) throw Error("no formula given; pass a file or --expr");
    return file == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_file(file);
  }
};

struct Limits {
  std::size_t max_nodes = 64;
  std::size_t tw_limit = kDefaultTreewidthLimit;

  void attach(CLI::App* app) {
    app->add_option("--max-nodes", max_nodes, "Largest accepted formula, in AST nodes")->check(CLI::PositiveNumber);
    app->add_option("--tw-limit", tw_limit, "Largest hypergraph handed to the exact treewidth search")
        ->check(CLI::PositiveNumber);
  }

  void check(const Formula& f) const {
    if (node_count(f) > max_nodes)
      throw LimitError("formula has " + std::to_string(node_count(f)) + " nodes, limit is " + std::to_string(max_nodes));
  }
};

Formula load_query(const QueryInput& q) { return parse_formula(q.text()); }

Structure load_db(const std::vector<std::string>& paths, const Signature* hint = nullptr) {
  if (paths.empty()) throw Error("no structure given; pass --db");
  bool csv = std::all_of(paths.begin(), paths.end(), [](const std::string& p) {
    return std::filesystem::path(p).extension() == ".csv";
  });
  if (csv) return load_structure_csv({paths.begin(), paths.end()});
  if (paths.size() != 1) throw Error("pass one JSON structure file or several CSV files");
  return load_structure_json(paths[0], hint);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FOLIO_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("FOLIO_SEED is not a number: ") + env);
    }
  }
  return kDefaultSeed;
}

Path parse_path(const std::string& text) {
  Path p;
  std::string t;
  for (char c : text) {
    if (c == '[' || c == ']' || c == ' ') continue;
    if (c == ',') {
      if (!t.empty()) p.push_back(std::stoul(t));
      t.clear();
    } else {
      t += c;
    }
  }
  if (!t.empty()) p.push_back(std::stoul(t));
  return p;
}

bool leaves_pass(const Formula& f, bool (*pred)(const Formula&)) {
  for (const auto& [path, leaf] : positively_combined_subformulas(f))
    if (!pred(leaf)) return false;
  return true;
}

bool layered_leaf(const Formula& f) { return is_layered(f); }

void emit_dot(const Formula& layered, std::size_t tw_limit, std::ostream& out) {
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Quant) {
      Block b = Block::from(g);
      Hypergraph h = block_hypergraph(b);
      VertexSet f;
      for (const auto& v : b.free()) f.insert(v.name);
      out << "// block " << print_formula(g) << "\n" << to_dot(h);
      out << to_dot(primal_graph(h), elimination_ordering_with_prefix(h, f, tw_limit));
      for (const auto& kid : b.children) rec(kid);
      return;
    }
    for (std::size_t i = 0; i < g.child_count(); ++i) rec(g.child_at(i));
  };
  rec(layered);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"folio: analysis, rewriting and model checking of first-order sentences"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // parse
  QueryInput parse_q;
  bool parse_json = false;
  auto* parse = app.add_subcommand("parse", "Parse a formula and print it back");
  parse_q.attach(parse);
  parse->add_flag("--json", parse_json, "Print measures as JSON");

  // normalize
  QueryInput norm_q;
  Limits norm_l;
  std::string form = "lay";
  bool norm_check = false, norm_trace = false;
  auto* normalize = app.add_subcommand("normalize", "Print the organized or layered form");
  norm_q.attach(normalize);
  norm_l.attach(normalize);
  normalize->add_option("--form", form, "nnf, org or lay")->check(CLI::IsMember({"nnf", "org", "lay"}));
  normalize->add_flag("--check", norm_check, "Verify that every leaf is organized or layered");
  normalize->add_flag("--trace", norm_trace, "Print each rewrite step as a JSON line on stderr");

  // thickness
  QueryInput thick_q;
  Limits thick_l;
  bool thick_json = false, thick_dot = false;
  auto* thick = app.add_subcommand("thickness", "Compute the thickness and the per-block measures");
  thick_q.attach(thick);
  thick_l.attach(thick);
  thick->add_flag("--json", thick_json, "Print the analysis report as JSON");
  thick->add_flag("--dot", thick_dot, "Print block hypergraphs and elimination orderings in DOT");

  // rewrite
  QueryInput rw_q;
  Limits rw_l;
  bool rw_json = false;
  auto* rewrite = app.add_subcommand("rewrite", "Rewrite into an equivalent formula with few variables");
  rw_q.attach(rewrite);
  rw_l.attach(rewrite);
  rewrite->add_flag("--json", rw_json, "Print the analysis report as JSON");

  // eval
  QueryInput ev_q;
  Limits ev_l;
  std::string engine = "fpt";
  std::vector<std::string> ev_db;
  bool ev_stats = false, ev_verify = false;
  auto* eval = app.add_subcommand("eval", "Model-check a sentence; exit 0 when true, 1 when false");
  ev_q.attach(eval);
  ev_l.attach(eval);
  eval->add_option("--engine", engine, "naive, bounded or fpt")->check(CLI::IsMember({"naive", "bounded", "fpt"}));
  eval->add_option("--db", ev_db, "Structure: one JSON file or several CSV files")->required();
  eval->add_flag("--stats", ev_stats, "Print evaluation statistics as JSON");
  eval->add_flag("--verify", ev_verify, "Cross-check the answer with naive evaluation");

  // gadget
  auto* gadget = app.add_subcommand("gadget", "Build hardness gadgets");
  gadget->require_subcommand(1);
  std::size_t clique_k = 3;
  QueryInput clique_q;
  std::string clique_graph;
  auto* clique = gadget->add_subcommand("clique", "Structure satisfying the query iff the graph has a k-clique");
  clique->add_option("--k", clique_k, "Clique size")->required()->check(CLI::PositiveNumber);
  clique_q.attach(clique, false);
  clique->add_option("--graph", clique_graph, "Edge list, one 'u v' per line")->required();

  std::string acc_psi, acc_phi;
  std::vector<std::string> acc_db;
  auto* accordion = gadget->add_subcommand("accordion", "Structure for phi from a structure for psi");
  accordion->add_option("--psi", acc_psi, "File holding psi")->required();
  accordion->add_option("--phi", acc_phi, "File holding phi")->required();
  accordion->add_option("--db", acc_db, "Structure for psi")->required();

  QueryInput pair_q;
  std::string pair_path;
  bool pair_based = false;
  auto* pair = gadget->add_subcommand("pair", "Print psi for phi: fresh atoms or the based sentence");
  pair_q.attach(pair);
  pair->add_option("--path", pair_path, "Path of the simple subformula, e.g. 0,1 (default: the first one)");
  pair->add_flag("--based", pair_based, "Print the sentence based on the simple subformula");

  // selftest
  SelftestOptions st;
  std::optional<std::uint64_t> st_seed;
  bool st_mutant = false;
  auto* selftest = app.add_subcommand("selftest", "Run the randomized invariant suites");
  selftest->add_option("--seed", st_seed, "Random seed (default: $FOLIO_SEED or a fixed value)");
  selftest->add_option("--cases", st.cases, "Cases per suite");
  selftest->add_flag("--mutant", st_mutant, "Inject a known bug to exercise the harness");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*parse) {
      Formula f = load_query(parse_q);
      if (!parse_json) {
        out << print_formula(f) << "\n";
        return kExitOk;
      }
      nlohmann::json j;
      j["formula"] = print_formula(f);
      j["free"] = nlohmann::json::array();
      for (const auto& v : free_vars(f)) j["free"].push_back(v.name);
      j["width"] = width(f);
      j["nodes"] = node_count(f);
      j["variable_loose"] = is_variable_loose(f);
      j["symbol_loose"] = is_symbol_loose(f);
      j["positive"] = is_positive(f);
      j["sentence"] = is_sentence(f);
      out << j.dump(2) << "\n";
      return kExitOk;
    }

    if (*normalize) {
      Formula f = load_query(norm_q);
      norm_l.check(f);
      std::vector<RewriteStep> trace;
      Formula g = form == "nnf" ? nnf(f, &trace) : form == "org" ? organize(f, &trace) : lay(f);
      if (form == "lay") organize(f, &trace);
      if (norm_trace)
        for (const auto& step : trace) err << to_json(step).dump() << "\n";
      out << print_formula(g) << "\n";
      if (norm_check) {
        bool ok = form == "org" ? leaves_pass(g, is_organized) : form == "lay" ? leaves_pass(g, layered_leaf) : true;
        out << "check: " << (ok ? "ok" : "failed") << "\n";
        if (!ok) return kExitViolation;
      }
      return kExitOk;
    }

    if (*thick) {
      Formula f = load_query(thick_q);
      thick_l.check(f);
      AnalysisReport r = analyze(f, thick_l.tw_limit);
      if (thick_json) {
        out << to_json(r).dump(2) << "\n";
      } else {
        out << "thickness: " << r.thickness << "\n";
        out << "layered: " << r.layered << "\n";
        for (const auto& [path, t] : r.per_node)
          out << "block " << path << ": local " << t.local << ", quantified " << t.quantified << "\n";
      }
      if (thick_dot) emit_dot(lay(f), thick_l.tw_limit, out);
      return kExitOk;
    }

    if (*rewrite) {
      Formula f = load_query(rw_q);
      rw_l.check(f);
      if (rw_json) {
        out << to_json(analyze(f, rw_l.tw_limit)).dump(2) << "\n";
      } else {
        out << print_formula(minimize_variables(f, rw_l.tw_limit)) << "\n";
      }
      return kExitOk;
    }

    if (*eval) {
      const std::string text = ev_q.text();
      const Signature wanted = infer_signature(parse_formula(text));
      Structure s = load_db(ev_db, &wanted);
      Formula f = parse_formula(text, s.signature());
      ev_l.check(f);
      if (!is_sentence(f)) throw PreconditionError("eval expects a sentence");
      bool value = false;
      EvalStats stats;
      if (engine == "naive") {
        auto start = std::chrono::steady_clock::now();
        value = naive_eval(s, f);
        stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        stats.node_count = node_count(f);
      } else if (engine == "bounded") {
        value = bounded_var_eval(s, f, &stats).truth();
      } else {
        FptResult r = fpt_model_check(s, f, ev_l.tw_limit);
        value = r.value;
        stats = r.stats;
      }
      out << (value ? "true" : "false") << "\n";
      if (ev_stats) out << to_json(stats).dump() << "\n";
      if (ev_verify && naive_eval(s, f) != value) {
        err << "error: engine '" << engine << "' disagrees with naive evaluation\n";
        return kExitViolation;
      }
      return value ? kExitTrue : kExitFalse;
    }

    if (*clique) {
      Formula theta = load_query(clique_q);
      Graph g = parse_edge_list(read_file(clique_graph));
      out << structure_to_json(clique_gadget(clique_k, theta, g)).dump(2) << "\n";
      return kExitOk;
    }

    if (*accordion) {
      Structure a = load_db(acc_db);
      Formula psi = parse_formula(read_file(acc_psi), a.signature());
      Formula phi = parse_formula(read_file(acc_phi));
      AccordionResult r = accordion_step(psi, phi, a);
      out << structure_to_json(r.structure).dump(2) << "\n";
      return kExitOk;
    }

    if (*pair) {
      Formula phi = load_query(pair_q);
      Path p;
      if (pair_path.empty()) {
        auto simple = simple_subformulas(phi);
        if (simple.empty()) throw PreconditionError("formula has no simple subformula");
        p = simple.front().path;
      } else {
        p = parse_path(pair_path);
      }
      out << print_formula(pair_based ? based_sentence(phi, p) : make_accordion_pair(phi, p)) << "\n";
      return kExitOk;
    }

    if (*selftest) {
      st.seed = st_seed ? *st_seed : default_seed();
      st.mutant = st_mutant;
      out << "seed: " << st.seed << "\n";
      SelftestReport r = run_selftest(st, out);
      if (!r.ok()) {
        out << "counterexample: " << *r.counterexample << "\n";
        return kExitViolation;
      }
      return kExitOk;
    }
  } catch (const LimitError& e) {
    err << "limit exceeded: " << e.what() << "\n";
    return kExitLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace folio
