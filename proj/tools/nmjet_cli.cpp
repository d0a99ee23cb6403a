// nmjet: batch front-end for the rigidity iteration.
//   nmjet run    [--config cfg.json] [--seed N] [--out dir] [--parallel bool]
//   nmjet verify [--suite name|all] [--seed N] [--out dir] [--parallel bool]
//   nmjet report <report.json | steps.csv>
// Failures print {"error": code, "message": ...} on stderr and exit with 2.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nmjet/errors.hpp"
#include "nmjet/io.hpp"
#include "nmjet/nashmoser.hpp"
#include "nmjet/scenario.hpp"
#include "nmjet/verify.hpp"

namespace fs = std::filesystem;
using nmjet::json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

int fail(const std::string& code, const std::string& message) {
  std::cerr << nmjet::error_to_json(code, message).dump() << std::endl;
  return kExitError;
}

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  bool parallel = false;
  bool parallel_set = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Random seed (u64)")->each([&c](const std::string&) { c.seed_set = true; });
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--parallel", c.parallel, "Enable OpenMP kernels (true/false)")
      ->each([&c](const std::string&) { c.parallel_set = true; });
}

int cmd_run(const Common& c, const std::string& algebra, const std::string& generator, double epsilon,
            bool eps_set) {
  nmjet::RunConfig cfg;
  if (!c.config.empty()) cfg = nmjet::config_from_json(nmjet::read_json_file(c.config));
  if (c.seed_set) cfg.seed = c.seed;
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.parallel_set) cfg.parallel = c.parallel;
  if (!algebra.empty()) cfg.algebra = algebra;
  if (!generator.empty()) cfg.generator = generator;
  if (eps_set) cfg.epsilon = epsilon;
  cfg.engine.exec = cfg.parallel ? nmjet::Exec::parallel : nmjet::Exec::serial;

  const nmjet::Scenario sc = nmjet::generate_scenario(cfg);
  const nmjet::Report rep = nmjet::run(sc.problem, cfg.engine);

  json out = nmjet::report_to_json(rep, cfg);
  out["scenario"] = {{"ground_truth", sc.ground_truth},
                     {"generator", nmjet::jet_to_json(sc.generator)},
                     {"psi_true", nmjet::jetmap_to_json(sc.psi_true)}};
  fs::create_directories(cfg.out_dir);
  nmjet::write_text_file((fs::path(cfg.out_dir) / "report.json").string(), out.dump(2) + "\n");
  nmjet::write_text_file((fs::path(cfg.out_dir) / "steps.csv").string(), nmjet::report_to_csv(rep));

  std::cout << json{{"converged", rep.converged},
                    {"steps_taken", rep.steps_taken},
                    {"final_residual", rep.final_residual},
                    {"final_radius", rep.final_radius},
                    {"ground_truth", sc.ground_truth},
                    {"out", cfg.out_dir}}
                   .dump()
            << std::endl;
  return rep.converged ? 0 : kExitFail;
}

int cmd_verify(const Common& c, const std::string& suite, int trials) {
  nmjet::VerifyOptions opts;
  if (c.seed_set) opts.seed = c.seed;
  opts.exec = c.parallel ? nmjet::Exec::parallel : nmjet::Exec::serial;
  if (trials > 0) opts.trials = trials;
  const auto& names = nmjet::suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    return fail("BadInput", "unknown suite '" + suite + "'");

  bool all_passed = true;
  json report = json::array();
  for (const std::string& name : suite == "all" ? names : std::vector<std::string>{suite}) {
    const nmjet::SuiteResult r = nmjet::run_suite(name, opts);
    for (const nmjet::Check& ch : r.checks)
      std::cout << (ch.passed ? "PASS " : "FAIL ") << r.name << ": " << ch.name << " [" << ch.detail << "]\n";
    std::cout << "suite " << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << " (" << r.checks.size() - r.failures()
              << "/" << r.checks.size() << " checks, " << std::fixed << std::setprecision(2) << r.seconds << " s)\n"
              << std::defaultfloat;
    all_passed = all_passed && r.passed();
    report.push_back(nmjet::suite_to_json(r));
  }
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    nmjet::write_text_file((fs::path(c.out) / "verify.json").string(),
                           json{{"seed", opts.seed}, {"trials", opts.trials}, {"suites", report}}.dump(2) + "\n");
  }
  return all_passed ? 0 : kExitFail;
}

std::vector<std::vector<std::string>> rows_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nmjet::Error(nmjet::ErrorCode::BadInput, "cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  if (rows.empty() || rows.front().size() != 8)
    throw nmjet::Error(nmjet::ErrorCode::BadInput, path + " is not a step table");
  return rows;
}

std::vector<std::vector<std::string>> rows_from_json(const json& j) {
  if (!j.contains("steps")) throw nmjet::Error(nmjet::ErrorCode::BadInput, "report has no steps");
  std::vector<std::vector<std::string>> rows{{"d", "t_d", "r_d", "rho_d", "res_l", "res_hi", "equiv_drift",
                                              "radius_shrink", "smoothing", "monitors"}};
  const auto str = [](double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
  };
  for (const json& s : j.at("steps")) {
    std::string mon;
    for (const json& m : s.at("monitors")) mon += m.at("ok").get<bool>() ? '+' : '-';
    rows.push_back({std::to_string(s.at("d").get<int>()), str(s.at("t")), str(s.at("r")), str(s.at("rho")),
                    str(s.at("res_l")), str(s.at("res_hi")), str(s.at("equiv_drift")), str(s.at("radius")),
                    s.at("smoothing_active").get<bool>() ? "deg<=" + std::to_string(s.at("smoothing_degree").get<int>())
                                                         : "off",
                    mon});
  }
  return rows;
}

void print_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], r[i].size());
    }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < rows[k].size(); ++i)
      std::cout << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << rows[k][i];
    std::cout << "\n";
    if (k == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w + 2;
      std::cout << std::string(total - 2, '-') << "\n";
    }
  }
}

int cmd_report(const std::string& path) {
  if (fs::path(path).extension() == ".csv") {
    print_table(rows_from_csv(path));
    return 0;
  }
  const json j = nmjet::read_json_file(path);
  print_table(rows_from_json(j));
  if (j.contains("converged"))
    std::cout << "\nconverged " << std::boolalpha << j.at("converged").get<bool>() << " after "
              << j.at("steps_taken").get<int>() << " steps; final residual "
              << j.at("final_residual").get<double>() << ", final radius " << j.at("final_radius").get<double>()
              << ", psi Poisson defect " << j.at("psi_poisson_defect").get<double>() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash-Moser rigidity of momentum maps on truncated jets"};
  app.require_subcommand(1);

  Common common;
  std::string algebra, generator, suite = "all", report_path;
  double epsilon = 0.0;
  bool eps_set = false;
  int trials = 0;

  CLI::App* run = app.add_subcommand("run", "Generate a scenario and run the iteration");
  run->add_option("--config", common.config, "Run configuration JSON");
  add_common(run, common);
  run->add_option("--algebra", algebra, "Builtin algebra or structure-constants file");
  run->add_option("--generator", generator, "\"random\" or a monomial such as x1*x2*x3");
  run->add_option("--epsilon", epsilon, "Perturbation magnitude")->each([&](const std::string&) { eps_set = true; });

  CLI::App* verify = app.add_subcommand("verify", "Run property suites");
  add_common(verify, common);
  verify->add_option("--suite", suite, "algebra, jetspace, poisson, ce, group, estimates, contraction or all");
  verify->add_option("--trials", trials, "Trials per randomized sweep");

  CLI::App* report = app.add_subcommand("report", "Render a report or step table");
  report->add_option("path", report_path, "report.json or steps.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("BadInput", e.what());
  }

  try {
    if (run->parsed()) return cmd_run(common, algebra, generator, epsilon, eps_set);
    if (verify->parsed()) return cmd_verify(common, suite, trials);
    return cmd_report(report_path);
  } catch (const nmjet::Error& e) {
    return fail(std::string(nmjet::to_string(e.code())), e.message());
  } catch (const json::exception& e) {
    return fail("BadInput", e.what());
  } catch (const std::exception& e) {
    return fail("BadInput", e.what());
  }
}
