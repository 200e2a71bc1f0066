#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "flagsurge/cli.hpp"
#include "flagsurge/io.hpp"

using namespace flagsurge;
namespace fs = std::filesystem;

namespace {

const fs::path scenes = FLAGSURGE_SCENES;

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  static const std::string tag = std::to_string(std::random_device{}());
  const fs::path p = fs::temp_directory_path() / ("flagsurge_cli_" + tag) / name;
  fs::create_directories(p);
  return p;
}

fs::path write_scene(const std::string& name, const std::string& text) {
  const fs::path p = scratch("scenes") / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> report(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(": ");
    if (colon != std::string::npos) out[line.substr(0, colon)] = line.substr(colon + 2);
  }
  return out;
}

std::string scene(const std::string& name) { return (scenes / name).string(); }

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitInput);
  CHECK(run({"no-such-verb"}).code == kExitInput);
  CHECK(run({"classify"}).code == kExitInput);
  CHECK(run({"classify", "/nonexistent/scene.json", "--out", scratch("none").string()}).code == kExitInput);
}

TEST_CASE("scene diagnostics") {
  const fs::path out = scratch("diag");
  auto err_of = [&](const std::string& text) {
    const Run r = run({"classify", write_scene("bad.json", text).string(), "--out", out.string()});
    CHECK(r.code == kExitInput);
    return r.err;
  };
  CHECK(err_of("{\n  \"matrices\": {\"g\": [1, 0, 0,\n}").find("line 3") != std::string::npos);
  CHECK(err_of(R"({"matrices": {"g": [1, 0, 0, 0, 1, 0, 0, 0]}})").find("field 'matrices.g'") != std::string::npos);
  CHECK(err_of(R"({"matrices": {"g": [1, 2, 3, 2, 4, 6, 0, 0, 1]}})").find("matrices.g") != std::string::npos);
  CHECK(err_of(R"({"matrices": {"g": [1, 0, 0, 0, 1, 0, 0, 0, 1]}, "bogus": 1})").find("bogus") != std::string::npos);
  CHECK(err_of(R"({"flags": {"x": [1, 0, 0, 1, 0, 0]}})").find("flags.x") != std::string::npos);
  CHECK(err_of(R"({"matrices": {"g": [1, 0, 0, 0, 1, 0, 0, 0, 1], "g": [2, 0, 0, 0, 1, 0, 0, 0, 1]}})")
            .find("g") != std::string::npos);
  CHECK(err_of(R"({"flags": {"x": [0, 0, 1, 1, 0, 0]}, "tubes": {"P": {"center": "y", "radius": 0.3}}})")
            .find("tubes.P") != std::string::npos);
  CHECK(err_of(R"({"flags": {"x": [0, 0, 1, 1, 0, 0]}, "tubes": {"P": {"center": "x", "radius": 2.0}}})")
            .find("tubes.P") != std::string::npos);
}

TEST_CASE("classify") {
  const fs::path out = scratch("classify");
  const Run r = run({"classify", scene("diag421.json"), "--out", out.string()});
  REQUIRE(r.code == kExitOk);
  const auto rep = report(r.out);
  CHECK(rep.count("X_PLUS") == 1);
  CHECK(fs::exists(out / "fixed_flags.csv"));
  CHECK(fs::exists(out / "resolved.json"));
  CHECK(slurp(out / "report.txt") == r.out);
  const std::vector<Flag> fixed = read_csv(out / "fixed_flags.csv");
  REQUIRE(fixed.size() == 2);
  CHECK(same_flag(fixed[0], make_flag({1, 0, 0}, {0, 0, 1}), 1e-12));
  CHECK(same_flag(fixed[1], make_flag({0, 0, 1}, {1, 0, 0}), 1e-12));
}

TEST_CASE("sampling verbs") {
  const std::string s = scene("diag421.json");
  const fs::path out = scratch("sampling");
  CHECK(run({"bouquet", s, "--out", out.string(), "-m", "16"}).code == kExitOk);
  CHECK(read_csv(out / "bouquet.csv").size() == 32);
  CHECK(slurp(out / "bouquet.ply").find("element vertex 32") != std::string::npos);

  CHECK(run({"iterate", s, "--out", out.string(), "--n", "5", "-m", "50"}).code == kExitOk);
  CHECK(read_csv(out / "iterate.csv").size() == 50);

  const Run a = run({"attract", s, "--out", out.string()});
  CHECK(a.code == kExitOk);
  CHECK(slurp(out / "residual.csv").rfind("n,residual\n", 0) == 0);

  const Run c = run({"coverage", s, "--out", out.string()});
  CHECK(c.code == kExitOk);
  const Run c0 = run({"coverage", s, "--out", out.string(), "--n-max", "1"});
  CHECK(c0.code == kExitViolation);
  CHECK(read_csv(out / "failures.csv").size() > 0);
}

TEST_CASE("schottky verbs") {
  const std::string s = scene("schottky_rank1.json");
  const fs::path out = scratch("schottky");
  const Run r = run({"certify-schottky", s, "--out", out.string(), "--depth", "2"});
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(out / "tube_centers.csv"));
  CHECK(run({"limit-set", s, "--out", out.string(), "--depth", "2", "-m", "200"}).code == kExitOk);
  CHECK(read_csv(out / "limit_set.csv").size() <= 200);

  const std::string weak = R"({
    "seed": 1,
    "matrices": {"g": [16, 0, 0, 0, 4, 0, 0, 0, 1]},
    "flags": {"a": [0, 0, 1, 1, 0, 0], "b": [1, 0, 0, 0, 0, 1]},
    "tubes": {"A": {"center": "a", "radius": 0.4}, "B": {"center": "b", "radius": 0.4}},
    "schottky": {"generators": ["g"], "pairs": [{"minus": "A", "plus": "B"}], "margin": 0.05}
  })";
  const Run v = run({"certify-schottky", write_scene("weak.json", weak).string(), "--out", out.string()});
  CHECK(v.code == kExitViolation);
  CHECK(run({"limit-set", write_scene("weak.json", weak).string(), "--out", out.string()}).code != kExitOk);
}

TEST_CASE("surgery and combine") {
  const fs::path out = scratch("surgery");
  const Run r = run({"surgery-search", scene("surgery.json"), "--out", out.string()});
  CHECK(r.code == kExitOk);
  CHECK(report(r.out)["EXPONENT"] == "3");
  CHECK(read_csv(out / "h1_boundary.csv").size() > 0);

  const Run low = run({"surgery-search", scene("surgery.json"), "--out", out.string(), "--n-max", "1"});
  CHECK(low.code == kExitViolation);

  const Run c = run({"combine", scene("combine.json"), "--out", out.string()});
  CHECK(c.code == kExitOk);
  CHECK(report(c.out)["DISJOINT"] == "pass");
  CHECK(fs::exists(out / "combined.txt"));
}

TEST_CASE("deform-check and parity") {
  const fs::path out = scratch("deform");
  const Run r = run({"deform-check", scene("deform.json"), "--out", out.string()});
  REQUIRE(r.code == kExitOk);
  const auto rep = report(r.out);
  CHECK(rep.at("DENSE_AT_SCALE") == "1");
  CHECK(rep.at("TRACES_DISTINCT_FROM_ALT") == "yes");
  CHECK(slurp(out / "traces.csv").rfind("trace\n", 0) == 0);

  Run p = run({"parity", "a1", "a2"});
  CHECK(p.code == kExitOk);
  CHECK(p.out == "0\n");
  p = run({"parity", "b1"});
  CHECK(p.out == "1\n");
  CHECK(run({"parity", "z9"}).code == kExitInput);
}

TEST_CASE("export round trip and resolved scene") {
  const fs::path out = scratch("export");
  REQUIRE(run({"export", scene("schottky_rank1.json"), "--out", out.string(), "-m", "100"}).code == kExitOk);
  const std::vector<Flag> flags = read_csv(out / "flags.csv");
  REQUIRE(flags.size() == 2);
  CHECK(format_csv(flags) == slurp(out / "flags.csv"));
  CHECK(read_csv(out / "tube_H_plus.csv").size() == 100);
  const std::string resolved = slurp(out / "resolved.json");
  CHECK(resolved.find("\"command\"") != std::string::npos);
  CHECK(resolved.find("\"export\"") != std::string::npos);

  // Sampling without a seed is an input error.
  const std::string unseeded = R"({"flags": {"x": [0, 0, 1, 1, 0, 0]}, "tubes": {"P": {"center": "x", "radius": 0.3}}})";
  const Run r = run({"export", write_scene("unseeded.json", unseeded).string(), "--out", out.string()});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("seed") != std::string::npos);
}
