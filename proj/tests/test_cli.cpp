#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrf/cli.hpp"
#include "mrf/model_io.hpp"
#include "models.hpp"

using namespace mrf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mrf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Scratch directory removed at scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mrf_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == kExitInput);
  CHECK(run({"bogus"}).code == kExitInput);
  CHECK(run({"sample", "--model", "/nonexistent/model.json"}).code == kExitInput);
}

TEST_CASE("generate writes a valid model") {
  TempDir tmp;
  Run r = run({"generate", "--generator", "cycle", "--n", "4", "--beta", "1", "--out", tmp.file("c4.json")});
  REQUIRE(r.code == kExitOk);
  Model m = read_model(tmp.file("c4.json"));
  CHECK(m.graph() == cycle_graph(4));
  CHECK(run({"generate", "--generator", "nope", "--n", "4"}).code == kExitInput);
}

TEST_CASE("sample is deterministic per seed") {
  TempDir tmp;
  write_model(testmodels::two_node(1.0), tmp.file("m.json"));
  Run a = run({"sample", "--model", tmp.file("m.json"), "--k", "10", "--mode", "exact", "--seed", "7"});
  Run b = run({"sample", "--model", tmp.file("m.json"), "--k", "10", "--mode", "exact", "--seed", "7"});
  Run c = run({"sample", "--model", tmp.file("m.json"), "--k", "10", "--mode", "exact", "--seed", "8"});
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 11);
  CHECK(a.out.rfind("#mrf-samples n=2 A=2 k=10 seed=7 provenance=exact\n", 0) == 0);
}

TEST_CASE("exact sampling past the enumeration cap exits with 2; Gibbs succeeds") {
  TempDir tmp;
  REQUIRE(run({"generate", "--generator", "cycle", "--n", "30", "--beta", "0.3", "--out", tmp.file("big.json")}).code ==
          kExitOk);
  Run exact = run({"sample", "--model", tmp.file("big.json"), "--k", "5", "--mode", "exact"});
  CHECK(exact.code == kExitCap);
  CHECK_FALSE(exact.err.empty());
  Run gibbs = run({"sample", "--model", tmp.file("big.json"), "--k", "5", "--mode", "gibbs", "--burn-in", "10",
                   "--thinning", "1"});
  CHECK(gibbs.code == kExitOk);
}

TEST_CASE("reconstruct from the exact model and from samples") {
  TempDir tmp;
  write_model(ising_on_graph(cycle_graph(4), 1.0), tmp.file("c4.json"));

  Run exact = run({"reconstruct", "--model", tmp.file("c4.json"), "--algo", "ctp", "--d", "2"});
  REQUIRE(exact.code == kExitOk);
  json j = json::parse(exact.out);
  CHECK(j["edges"] == json::array({{0, 1}, {0, 3}, {1, 2}, {2, 3}}));
  CHECK(j["success"] == true);

  Run decay = run({"reconstruct", "--model", tmp.file("c4.json"), "--d", "2", "--kappa", "0.1"});
  REQUIRE(decay.code == kExitOk);
  CHECK(json::parse(decay.out)["algorithm"] == "decay");

  REQUIRE(run({"sample", "--model", tmp.file("c4.json"), "--k", "10", "--seed", "3", "--out", tmp.file("few.csv")})
              .code == kExitOk);
  Run under = run({"reconstruct", "--samples", tmp.file("few.csv"), "--d", "2", "--epsilon", "0.4", "--delta", "0.1",
                   "--out", tmp.file("under.json")});
  CHECK(under.code == kExitReconstruct);
  json diag = json::parse(slurp(tmp.file("under.json")));
  CHECK(diag["success"] == false);
  CHECK(diag["per_vertex"].size() == 4);

  CHECK(run({"reconstruct", "--d", "2"}).code == kExitInput);
}

TEST_CASE("round trip: sample then reconstruct with measured thresholds") {
  TempDir tmp;
  write_model(ising_on_graph(cycle_graph(4), 1.0), tmp.file("c4.json"));
  REQUIRE(run({"sample", "--model", tmp.file("c4.json"), "--k", "100000", "--seed", "11", "--out", tmp.file("s.csv")})
              .code == kExitOk);
  Run r = run({"reconstruct", "--samples", tmp.file("s.csv"), "--model", tmp.file("c4.json"), "--d", "2",
               "--edges-csv", tmp.file("edges.csv")});
  CHECK(r.code == kExitOk);
  CHECK(slurp(tmp.file("edges.csv")) == "u,v\n0,1\n0,3\n1,2\n2,3\n");
}

TEST_CASE("verify reports") {
  TempDir tmp;
  write_model(testmodels::two_node(1.0), tmp.file("two.json"));
  Run r = run({"verify", "--model", tmp.file("two.json"), "--d", "1", "--theorem", "2"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["holds"] == true);
  CHECK(j["epsilon_star"].get<double>() == doctest::Approx(std::tanh(1.0)).epsilon(1e-9));

  write_model(ising_on_graph(hypercube_graph(3), 0.9), tmp.file("q3.json"));
  Run h = run({"verify", "--model", tmp.file("q3.json"), "--d", "3", "--theorem", "hidden"});
  CHECK(h.code == kExitOk);
  CHECK(json::parse(h.out)["holds"] == true);
  CHECK(run({"verify", "--model", tmp.file("two.json"), "--d", "1", "--theorem", "5"}).code == kExitInput);
}

TEST_CASE("bounds table") {
  Run r = run({"bounds", "--n", "100", "--d", "3", "--epsilon", "0.1", "--delta", "0.1", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["required_samples_thm2"].get<double>() == doctest::Approx(9.326e8).epsilon(1e-3));
  Run small = run({"bounds", "--n", "8", "--d", "2", "--format", "json"});
  json s = json::parse(small.out);
  CHECK(s["graph_count_log_lower_bound"].get<double>() == doctest::Approx(2 * std::log(3.0)).epsilon(1e-12));
  CHECK(s["error_lower_bound_k0"].get<double>() == doctest::Approx(0.889).epsilon(1e-3));
  Run text = run({"bounds", "--n", "8", "--d", "2"});
  CHECK(text.code == kExitOk);
  CHECK_FALSE(text.out.empty());
}

TEST_CASE("hidden subcommand recovers the cube") {
  TempDir tmp;
  write_model(ising_on_graph(hypercube_graph(3), 0.9), tmp.file("q3.json"));
  Run r = run({"hidden", "--model", tmp.file("q3.json"), "--hidden", "0", "--dprime", "3"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["n"] == 8);
  CHECK(j["hidden_cliques"].size() == 1);
}

TEST_CASE("experiment reports are reproducible") {
  TempDir tmp;
  json config = {{"model", {{"generator", "cycle"}, {"n", 4}, {"beta", 1.0}}},
                 {"k", {1000, 10000}},
                 {"d", 2},
                 {"trials", 3},
                 {"seed", 5}};
  std::ofstream(tmp.file("exp.json")) << config.dump();
  Run a = run({"experiment", tmp.file("exp.json"), "--no-timing", "--out", tmp.file("a.json")});
  Run b = run({"experiment", tmp.file("exp.json"), "--no-timing", "--jobs", "2", "--out", tmp.file("b.json")});
  REQUIRE(a.code == kExitOk);
  REQUIRE(b.code == kExitOk);
  CHECK(slurp(tmp.file("a.json")) == slurp(tmp.file("b.json")));
  json report = json::parse(slurp(tmp.file("a.json")));
  CHECK(report["cells"].size() == 6);
  CHECK(report["curve"].size() == 2);
  bool found_csv = false;
  for (const auto& entry : fs::directory_iterator(tmp.path)) found_csv |= entry.path().extension() == ".csv";
  CHECK(found_csv);

  json exact_cfg = {{"model", {{"generator", "cycle"}, {"n", 4}, {"beta", 1.0}}}, {"estimator", "exact"}, {"d", 2}};
  std::ofstream(tmp.file("exact.json")) << exact_cfg.dump();
  Run e = run({"experiment", tmp.file("exact.json"), "--no-timing"});
  REQUIRE(e.code == kExitOk);
  json er = json::parse(e.out);
  REQUIRE(er["curve"].size() == 1);
  CHECK(er["curve"][0]["success_rate"] == 1.0);

  json bad = {{"model", {{"generator", "cycle"}, {"n", 4}}}, {"estimator", "exact"}, {"d", 2}, {"noise_q", 0.1}};
  std::ofstream(tmp.file("bad.json")) << bad.dump();
  CHECK(run({"experiment", tmp.file("bad.json")}).code == kExitInput);
}
