#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "folio/cli.hpp"
#include "folio/parser.hpp"
#include "folio/structure_io.hpp"
#include "oracles.hpp"

using namespace folio;
namespace fs = std::filesystem;

namespace {

std::string run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"folio"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  REQUIRE_MESSAGE(code == kExitOk, err.str());
  return out.str();
}

// Each <name>.query has frozen <name>.lay and <name>.thickness outputs.
std::vector<fs::path> fixtures() {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(FOLIO_GOLDEN_DIR))
    if (entry.path().extension() == ".query") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("golden normalize and thickness outputs") {
  const auto queries = fixtures();
  REQUIRE(queries.size() == 11);
  for (const auto& q : queries) {
    CAPTURE(q.stem().string());
    fs::path base = q;
    CHECK(run({"normalize", "--form", "lay", q.string()}) == read_file(base.replace_extension(".lay")));
    CHECK(run({"thickness", q.string()}) == read_file(base.replace_extension(".thickness")));
    Formula laid = parse_formula(read_file(base.replace_extension(".lay")));
    CHECK(run({"thickness", q.string()}).rfind("thickness: " + std::to_string(oracle::thickness_of_laid(laid)) + "\n", 0) == 0);
  }
}
