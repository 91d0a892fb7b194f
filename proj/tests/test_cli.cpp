#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chaoskit/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = chaoskit::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("chaoskit_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("systems list", "[cli]") {
  const auto r = run({"systems", "list"});
  CHECK(r.code == 0);
  CHECK(r.out.find("example1") != std::string::npos);
  CHECK(r.out.find("shift2") != std::string::npos);
}

TEST_CASE("analyze example1 happy path", "[cli]") {
  const auto dir = fresh_dir("analyze");
  const auto r = run({"analyze", "--system", "example1", "--pair", "0.25,0.75", "--horizon", "1000000", "--out",
                      dir.string()});
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "estimate.csv");
  CHECK(csv.rfind("t,F_lower,F_upper\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 33);
  CHECK(csv.find('\r') == std::string::npos);
  const auto v = json::parse(slurp(dir / "verdict.json"));
  CHECK(v["verdict"]["dc2prime"]["set"] == true);
  CHECK(v["verdict"]["dc1"]["set"] == false);
  CHECK(v["config"]["system"]["horizon_cap"] == 1000000);
  CHECK(v["config"]["thresholds"]["zero_tol"] == 0.05);
  CHECK(v["config"]["seed"] == 0);
}

TEST_CASE("analyze equal points is all clear", "[cli]") {
  const auto dir = fresh_dir("equal");
  const auto r =
      run({"analyze", "--system", "example1", "--pair", "0.25,0.25", "--horizon", "100000", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto v = json::parse(slurp(dir / "verdict.json"))["verdict"];
  for (const char* f : {"dc1", "dc2", "dc2prime", "dc3"}) CHECK(v[f]["set"] == false);
  CHECK(v["liyorke"]["set"] == false);
}

TEST_CASE("configuration errors exit 2 and name the field", "[cli][errors]") {
  const auto dir = fresh_dir("errors");
  auto missing = run({"analyze", "--system", "example1", "--pair", "0.25,0.75", "--out", dir.string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("horizon") != std::string::npos);

  auto bad_system = run({"analyze", "--system", "henon", "--pair", "0.1,0.2", "--horizon", "10"});
  CHECK(bad_system.code == 2);
  CHECK(bad_system.err.find("system.kind") != std::string::npos);

  auto bad_pair = run({"analyze", "--system", "tent", "--pair", "0.1", "--horizon", "10"});
  CHECK(bad_pair.code == 2);
  CHECK(bad_pair.err.find("pairs") != std::string::npos);

  auto out_of_space = run({"analyze", "--system", "tent", "--pair", "0.1,1.5", "--horizon", "10"});
  CHECK(out_of_space.code == 2);

  auto too_long = run({"analyze", "--system", "tent", "--horizon-cap", "10", "--pair", "0.1,0.2", "--horizon", "20"});
  CHECK(too_long.code == 2);
  CHECK(too_long.err.find("horizon") != std::string::npos);

  auto harness = run({"suite", "--harness", "theorem9", "--out", dir.string()});
  CHECK(harness.code == 2);
  CHECK(harness.err.find("harness") != std::string::npos);

  auto seq = run({"analyze", "--system", "tent", "--pair", "0.1,0.2", "--horizon", "100", "--q", "geom:2"});
  CHECK(seq.code == 2);
  CHECK(seq.err.find("sequences") != std::string::npos);

  auto unknown_flag = run({"analyze", "--bogus"});
  CHECK(unknown_flag.code == 2);
}

TEST_CASE("insufficient data exits 3", "[cli][errors]") {
  const auto dir = fresh_dir("insufficient");
  const auto r = run({"analyze", "--system", "tent", "--pair", "0.1,0.2", "--horizon", "1000", "--q",
                      "explicit:5,9,17", "--out", dir.string()});
  CHECK(r.code == 3);
}

TEST_CASE("config file with flag overrides", "[cli]") {
  const auto dir = fresh_dir("config");
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"system": {"kind": "rotation", "alpha": 0.25}, "horizon": 500, "pairs": ["0.1,0.3"],
              "thresholds": {"gap_tol": 0.2}})";
  }
  const auto r = run({"analyze", "--config", (dir / "run.json").string(), "--horizon", "400", "--out",
                      (dir / "o").string()});
  REQUIRE(r.code == 0);
  const auto v = json::parse(slurp(dir / "o" / "verdict.json"));
  CHECK(v["config"]["horizon"] == 400);
  CHECK(v["config"]["system"]["alpha"] == 0.25);
  CHECK(v["config"]["thresholds"]["gap_tol"] == 0.2);
  CHECK(v["verdict"]["horizon"] == 400);

  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"horizon": 10, "colour": "blue"})";
  }
  const auto bad = run({"analyze", "--config", (dir / "bad.json").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("colour") != std::string::npos);

  {
    std::ofstream cfg(dir / "badth.json");
    cfg << R"({"system": "tent", "horizon": 10, "pairs": ["0.1,0.2"], "thresholds": {"zero_tol": 2}})";
  }
  const auto badth = run({"analyze", "--config", (dir / "badth.json").string()});
  CHECK(badth.code == 2);
  CHECK(badth.err.find("thresholds.zero_tol") != std::string::npos);
}

TEST_CASE("identical runs give byte-identical files", "[cli]") {
  // The output path is part of the recorded config, so both runs write to the same directory.
  const auto dir = fresh_dir("det");
  const std::vector<std::string> files{"estimate.csv", "verdict.json", "lemma3.json",
                                       "theorem2.json", "theorem2.csv", "summary.json"};
  std::vector<std::vector<std::string>> contents;
  for (int k = 0; k < 2; ++k) {
    REQUIRE(run({"analyze", "--system", "shift2", "--pair", "010,110", "--horizon", "50000", "--out", dir.string()})
                .code == 0);
    REQUIRE(run({"suite", "--harness", "lemma3", "--harness", "theorem2", "--horizon", "20000", "--seed", "9",
                 "--out", dir.string()})
                .code == 0);
    contents.emplace_back();
    for (const auto& f : files) contents.back().push_back(slurp(dir / f));
    fs::remove_all(dir);
  }
  for (std::size_t k = 0; k < files.size(); ++k) {
    INFO(files[k]);
    CHECK(!contents[0][k].empty());
    CHECK(contents[0][k] == contents[1][k]);
  }
}

TEST_CASE("json output is canonical", "[cli]") {
  json j{{"b", 0.1 + 0.2}, {"a", {1.0 / 3.0, 2}}};
  const auto text = chaoskit::canonical_dump(j);
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  CHECK(text.find("0.333333333") != std::string::npos);
  CHECK(text.find("0.3333333333") == std::string::npos);
  CHECK(text.find("0.3,") == std::string::npos);
  CHECK(text.find("0.3\n") != std::string::npos);
}

TEST_CASE("suite example1", "[cli][suite]") {
  const auto dir = fresh_dir("suite_ex1");
  const auto r = run({"suite", "--harness", "example1", "--horizon", "1000000", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto s = json::parse(slurp(dir / "summary.json"));
  CHECK(s["passed"] == true);
  const auto& checks = s["harnesses"]["example1"]["checks"];
  for (const char* k : {"A_parity_law", "B_upper_density", "C_lower_density", "D_dc2prime_not_dc1"})
    CHECK(checks[k] == true);
}

TEST_CASE("suite lattice on the shift2 family", "[cli][suite]") {
  const auto dir = fresh_dir("suite_lattice");
  const auto r = run({"suite", "--harness", "lattice", "--system", "shift2", "--family", "8", "--horizon", "100000",
                      "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto rep = json::parse(slurp(dir / "lattice.json"));
  CHECK(rep["cases"].size() == 28);
  CHECK(rep["counterexamples"].empty());
}

TEST_CASE("suite theorem2 writes the agreement CSV", "[cli][suite]") {
  const auto dir = fresh_dir("suite_t2");
  const auto r = run({"suite", "--harness", "theorem2", "--N", "3", "--horizon", "60000", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "theorem2.csv");
  CHECK(csv.rfind("case_id,flag_f,flag_fN,agree\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
  CHECK(csv.find(",0\n") == std::string::npos);
}

TEST_CASE("classify family search", "[cli]") {
  const auto dir = fresh_dir("classify");
  const auto r = run({"classify", "--system", "shift2", "--family", "6", "--horizon", "100000", "--flag", "dc1",
                      "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(slurp(dir / "classify.json"));
  CHECK(doc["scrambled_set"]["size"] == 6);
  CHECK(doc["pairs"].size() == 15);
}

TEST_CASE("the built binary maps exit codes", "[cli]") {
  const std::string exe = CHAOSKIT_CLI_PATH;
  const auto dir = fresh_dir("binary");
  const std::string quiet = " >/dev/null 2>&1";
  auto code = [&](const std::string& args) {
    const int status = std::system((exe + " " + args + quiet).c_str());
    return WEXITSTATUS(status);
  };
  CHECK(code("systems list") == 0);
  CHECK(code("analyze --system tent --pair 0.1,0.2 --horizon 1000 --out " + dir.string()) == 0);
  CHECK(code("analyze --system tent --pair 0.1,0.2") == 2);
  CHECK(code("suite --harness nope") == 2);
  CHECK(fs::exists(dir / "verdict.json"));
}
