#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "nmjet/errors.hpp"
#include "nmjet/io.hpp"
#include "nmjet/scenario.hpp"

using namespace nmjet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nmjet_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string(NMJET_CLI) + " " + args + " > " + (dir / "stdout").string() + " 2> " +
                          (dir / "stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("monomial generator parsing") {
  const Jet g = parse_monomial("x1*x2^2*x3", 3, 6);
  const std::array<int, 3> a{1, 2, 1};
  CHECK(g.coeff(a) == 1.0);
  CHECK_THROWS_AS(parse_monomial("x4", 3, 6), Error);
  CHECK_THROWS_AS(parse_monomial("y1", 3, 6), Error);
}

TEST_CASE("scenario generation") {
  RunConfig c;
  const Scenario a = generate_scenario(c), b = generate_scenario(c);
  for (int i = 0; i < 3; ++i) {
    const auto ca = a.problem.mu.components[i].coeffs(), cb = b.problem.mu.components[i].coeffs();
    CHECK(std::equal(ca.begin(), ca.end(), cb.begin()));
  }
  CHECK(jet_to_json(a.generator).dump() == jet_to_json(b.generator).dump());
  RunConfig other = c;
  other.seed = 43;
  CHECK(jet_to_json(generate_scenario(other).generator).dump() != jet_to_json(a.generator).dump());

  RunConfig x = c;
  x.generator = "x1*x2*x3";
  const Scenario sx = generate_scenario(x);
  CHECK(sx.ground_truth > 0.0);
  CHECK(sx.ground_truth < 0.1);
  CHECK(equivariance_residual(sx.problem.mu, sx.problem.pi) <= 1e-9);

  RunConfig zero = c;
  zero.epsilon = 0.0;
  const Scenario sz = generate_scenario(zero);
  CHECK(sz.psi_true.is_identity());
  CHECK(sz.ground_truth == 0.0);

  RunConfig low = c;
  low.degcap = 2;
  CHECK_THROWS_AS(generate_scenario(low), Error);
  RunConfig neg = c;
  neg.epsilon = -1.0;
  CHECK_THROWS_AS(generate_scenario(neg), Error);
  RunConfig linear = c;
  linear.generator = "x1";
  CHECK_THROWS_AS(generate_scenario(linear), Error);
}

TEST_CASE("json round trips") {
  RunConfig c;
  c.generator = "x1*x3^2";
  c.engine.t0 = 1.2;
  c.seed = 7;
  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back).dump() == config_to_json(c).dump());
  json bad = config_to_json(c);
  bad["surprise"] = 1;
  CHECK_THROWS_AS(config_from_json(bad), Error);

  const Scenario sc = generate_scenario(c);
  const Jet g2 = jet_from_json(jet_to_json(sc.generator));
  CHECK((g2 - sc.generator).is_zero());
  const JetMap m2 = jetmap_from_json(jetmap_to_json(sc.psi_true));
  CHECK(map_distance(m2, sc.psi_true, c.degcap) == 0.0);
  const MomentumMap mu2 = momentum_map_from_json(momentum_map_to_json(sc.problem.mu), sc.problem.mu.algebra);
  CHECK(equivariance_residual(mu2, sc.problem.pi) <= 1e-9);
  const LieAlgebra a2 = algebra_from_json(algebra_to_json(*sc.problem.mu.algebra));
  CHECK(a2.constants() == sc.problem.mu.algebra->constants());
}

TEST_CASE("csv table has one row per iterate") {
  RunConfig c;
  const Scenario sc = generate_scenario(c);
  const Report r = run(sc.problem, c.engine);
  std::istringstream csv(report_to_csv(r));
  std::string line;
  std::getline(csv, line);
  CHECK(line == kCsvHeader);
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == r.steps.size());
}

TEST_CASE("cli run writes reports and is reproducible") {
  const fs::path d1 = scratch("run1"), d2 = scratch("run2");
  REQUIRE(cli("run --seed 42 --out " + (d1 / "out").string(), d1) == 0);
  REQUIRE(cli("run --seed 42 --out " + (d2 / "out").string(), d2) == 0);
  const json r1 = json::parse(slurp(d1 / "out" / "report.json"));
  json r2 = json::parse(slurp(d2 / "out" / "report.json"));
  CHECK(r1.at("converged").get<bool>());
  CHECK(r1.at("final_residual").get<double>() < 1e-9);
  r2["config"]["out_dir"] = r1["config"]["out_dir"];
  CHECK(r1.dump() == r2.dump());
  CHECK(slurp(d1 / "out" / "steps.csv") == slurp(d2 / "out" / "steps.csv"));
  CHECK(slurp(d1 / "out" / "steps.csv").rfind(kCsvHeader, 0) == 0);
  CHECK(cli("report " + (d1 / "out" / "steps.csv").string(), d1) == 0);
  CHECK(slurp(d1 / "stdout").find("radius_shrink") != std::string::npos);
  CHECK(cli("report " + (d1 / "out" / "report.json").string(), d1) == 0);
  CHECK(slurp(d1 / "stdout").find("converged true") != std::string::npos);
}

TEST_CASE("cli config file") {
  const fs::path d = scratch("config");
  RunConfig c;
  c.generator = "x1*x2*x3";
  c.out_dir = (d / "out").string();
  write_text_file((d / "cfg.json").string(), config_to_json(c).dump());
  REQUIRE(cli("run --config " + (d / "cfg.json").string(), d) == 0);
  const json r = json::parse(slurp(d / "out" / "report.json"));
  CHECK(r.at("config").at("generator") == "x1*x2*x3");
  CHECK(r.at("scenario").at("ground_truth").get<double>() > 0.0);
}

TEST_CASE("cli errors are machine readable") {
  const fs::path d = scratch("errors");
  CHECK(cli("run --algebra so17 --out " + (d / "out").string(), d) == 2);
  const json e = json::parse(slurp(d / "stderr"));
  CHECK(e.at("error") == "UnknownAlgebra");
  CHECK(e.contains("message"));
  CHECK(cli("verify --suite nosuch", d) == 2);
  CHECK(json::parse(slurp(d / "stderr")).at("error") == "BadInput");
  CHECK(cli("run --config " + (d / "missing.json").string(), d) == 2);
  CHECK(cli("report " + (d / "missing.csv").string(), d) == 2);
  CHECK(cli("frobnicate", d) == 2);
}

TEST_CASE("cli verify exit status follows the suite outcome") {
  const fs::path d = scratch("verify");
  CHECK(cli("verify --suite group --out " + (d / "out").string(), d) == 0);
  const json v = json::parse(slurp(d / "out" / "verify.json"));
  CHECK(v.at("suites").at(0).at("suite") == "group");
  CHECK(v.at("suites").at(0).at("passed").get<bool>());
  // The explicit n(n-1) constant is exceeded at k = 2, so this suite reports a failure.
  CHECK(cli("verify --suite poisson --out " + (d / "out2").string(), d) == 1);
  const json w = json::parse(slurp(d / "out2" / "verify.json"));
  CHECK_FALSE(w.at("suites").at(0).at("passed").get<bool>());
}
