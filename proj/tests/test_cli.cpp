#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "folio/cli.hpp"
#include "folio/parser.hpp"
#include "folio/random.hpp"
#include "folio/structure_io.hpp"

using namespace folio;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "folio");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  fs::path dir = fs::temp_directory_path() / "folio_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& content) {
  fs::path p = scratch() / name;
  std::ofstream(p) << content;
  return p.string();
}

}  // namespace

TEST_CASE("parse") {
  Run r = run({"parse", "-e", "forall y. exists x. E(y,x)"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "forall y. exists x. E(y,x)\n");
  Run j = run({"parse", "--json", "-e", "E(x,y)"});
  CHECK(nlohmann::json::parse(j.out)["width"] == 2);
  CHECK(run({"parse", "-e", "E(x"}).code == kExitError);
}

TEST_CASE("normalize") {
  std::string f2 = write("f2.txt", print_formula(f_k(2)));
  Run r = run({"normalize", "--form", "lay", f2});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "forall y1 y2. exists x. (E1(y1,x) & E2(y2,x))\n");
  CHECK(run({"normalize", "-e", "E(x,y)"}).out == "E(x,y)\n");
  CHECK(run({"normalize", write("bad.txt", "exists x. (R(x)")}).code == kExitError);
  CHECK(run({"normalize", scratch().string() + "/missing.txt"}).code == kExitError);

  Run check = run({"normalize", "--form", "org", "--check", "-e", "exists x. (R(x) & S(y))"});
  CHECK(check.out == "(exists x. R(x)) & S(y)\ncheck: ok\n");

  Run trace = run({"normalize", "--form", "nnf", "--trace", "-e", "!(exists x. R(x))"});
  CHECK(trace.out == "forall x. !R(x)\n");
  CHECK(nlohmann::json::parse(trace.err)["rule"] == "epsilon");
}

TEST_CASE("size limits") {
  Run r = run({"normalize", "--max-nodes", "3", "-e", "E(x,y) & E(y,z) & E(z,x)"});
  CHECK(r.code == kExitLimit);
  CHECK(run({"thickness", "--max-nodes", "0", "-e", "E(x,y)"}).code == kExitError);
}

TEST_CASE("thickness") {
  CHECK(run({"thickness", "-e", print_formula(f_k(3))}).out.rfind("thickness: 4\n", 0) == 0);
  CHECK(run({"thickness", "-e", "E(x,y)"}).out.rfind("thickness: 2\n", 0) == 0);
  CHECK(run({"thickness", "-e", "forall y. exists x. exists x2. (E(y,x) & E(x,x2))"}).out.rfind("thickness: 2\n", 0) ==
        0);
  Run j = run({"thickness", "--json", "-e", "forall y. exists x. E(y,x)"});
  CHECK(nlohmann::json::parse(j.out)["thickness"] == 2);
  Run dot = run({"thickness", "--dot", "-e", "exists x. E(x,x)"});
  CHECK(dot.out.find("graph hypergraph") != std::string::npos);
}

TEST_CASE("rewrite") {
  Run r = run({"rewrite", "-e", "forall y. exists x. exists x2. (E(y,x) & E(x,x2))"});
  CHECK(r.out == "forall y. exists x. (E(y,x) & (exists y. E(x,y)))\n");
}

TEST_CASE("eval exit codes") {
  std::string yes = write("yes.json", R"({"relations": {"E": [[1,1]]}})");
  std::string no = write("no.json", R"({"universes": {"U": [1]}, "relations": {"E": []}})");
  for (const char* engine : {"naive", "bounded", "fpt"}) {
    CHECK(run({"eval", "--engine", engine, "--db", yes, "-e", "exists x. E(x,x)"}).code == kExitTrue);
    CHECK(run({"eval", "--engine", engine, "--db", no, "-e", "exists x. E(x,x)"}).code == kExitFalse);
  }
  CHECK(run({"eval", "--db", yes, "-e", "exists x. E(x)"}).code == kExitError);
  CHECK(run({"eval", "--db", yes, "-e", "E(x,x)"}).code == kExitError);
  CHECK(run({"eval", "--db", yes, "-e", "exists x. R(x)"}).code == kExitError);

  Run stats = run({"eval", "--stats", "--verify", "--db", yes, "-e", "exists x. E(x,x)"});
  CHECK(stats.code == kExitTrue);
  std::istringstream lines(stats.out);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(first == "true");
  CHECK(nlohmann::json::parse(second).contains("max_table_rows"));
}

TEST_CASE("eval agrees across engines on the fixture") {
  std::string full = write("f2full.json", R"({"universes": {"U": [1,2]},
      "relations": {"E1": [[1,1],[1,2],[2,1],[2,2]], "E2": [[1,1],[1,2],[2,1],[2,2]]}})");
  std::string sparse = write("f2sparse.json", R"({"universes": {"U": [1,2]},
      "relations": {"E1": [[1,1]], "E2": [[2,2]]}})");
  const std::string f2 = print_formula(f_k(2));
  for (const auto& db : {full, sparse}) {
    int naive = run({"eval", "--engine", "naive", "--db", db, "-e", f2}).code;
    CHECK(run({"eval", "--engine", "fpt", "--verify", "--db", db, "-e", f2}).code == naive);
    CHECK(run({"eval", "--engine", "bounded", "--db", db, "-e", f2}).code == naive);
  }
}

TEST_CASE("eval reads CSV relations") {
  fs::path dir = scratch() / "csv";
  fs::create_directories(dir);
  std::ofstream(dir / "E.csv") << "U,U\n1,2\n2,1\n";
  std::string e = (dir / "E.csv").string();
  CHECK(run({"eval", "--db", e, "-e", "forall y. exists x. E(y,x)"}).code == kExitTrue);
  CHECK(run({"eval", "--db", e, "-e", "exists x. E(x,x)"}).code == kExitFalse);
}

TEST_CASE("gadgets") {
  std::string theta = write("theta.txt", "exists x1 x2 x3. (F1(x1,x2) & F2(x1,x3) & F3(x2,x3))");
  std::string tri = write("tri.txt", "a b\nb c\nc a\n");
  Run r = run({"gadget", "clique", "--k", "3", "--query", theta, "--graph", tri});
  REQUIRE(r.code == kExitOk);
  std::string db = write("clique.json", r.out);
  CHECK(run({"eval", "--engine", "naive", "--db", db, "--query", theta}).code == kExitTrue);

  std::string phi = write("phi.txt", "forall w. ((exists v. (R(w,v) & S(w,v))) | T(w))");
  Run pair = run({"gadget", "pair", "--based", phi});
  CHECK(pair.out == "exists v. (__acc_base_R(v) & __acc_base_S(v))\n");
  std::string psi = write("psi.txt", pair.out);
  std::string a = write("a.json", R"({"universes": {"U": [1,2]},
      "relations": {"__acc_base_R": [[1]], "__acc_base_S": [[1]]}})");
  Run acc = run({"gadget", "accordion", "--psi", psi, "--phi", phi, "--db", a});
  REQUIRE(acc.code == kExitOk);
  std::string b = write("b.json", acc.out);
  CHECK(run({"eval", "--engine", "naive", "--db", b, "--query", phi}).code == kExitTrue);

  CHECK(run({"gadget"}).code == kExitError);
}

TEST_CASE("selftest") {
  Run ok = run({"selftest", "--cases", "20", "--seed", "1"});
  CHECK(ok.code == kExitOk);
  Run mutant = run({"selftest", "--cases", "20", "--seed", "1", "--mutant"});
  CHECK(mutant.code == kExitViolation);
  CHECK(mutant.out.find("counterexample: ") != std::string::npos);
  CHECK(mutant.out.find("on structure") != std::string::npos);
  Run none = run({"selftest", "--cases", "0"});
  CHECK(none.code == kExitOk);
  CHECK(none.out.find("warning") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitError);
  CHECK(run({"frobnicate"}).code == kExitError);
  CHECK(run({"eval", "--engine", "magic", "-e", "E(x,x)"}).code == kExitError);
  CHECK(run({"--help"}).code == kExitOk);
}
