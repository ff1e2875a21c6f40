#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(POLARLAM_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  std::array<char, 1024> buf;
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = ::pclose(pipe);
  return {WEXITSTATUS(status), out};
}

fs::path data_dir() { return fs::path(POLARLAM_SOURCE_DIR) / "data"; }

}  // namespace

TEST_CASE("analyze reports panel variables as json") {
  const RunResult r = run("analyze --stack 0/0/0/0 --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("N") == 4);
  CHECK(j.at("panel").at("rho0K").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("panel").at("rho1").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("analyze with a residual target") {
  const RunResult r =
      run("analyze --stack 45/45/45 --target --target-rho0k 1 --target-rho1 1 "
          "--target-phi1 0.5 --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("residual").at("total").get<double>() < 1e-12);
}

TEST_CASE("polar prints the material parameters") {
  const RunResult r = run("polar --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("Q_from_engineering").at("polar").at("T0").get<double>() ==
        doctest::Approx(26898.96).epsilon(1e-4));
}

TEST_CASE("feasibility passes on the bundled panel design") {
  const RunResult r =
      run("feasibility --panels " + (data_dir() / "boxwing" / "panels.json").string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
}

TEST_CASE("meso blend-check on explicit stacks") {
  CHECK(run("blend-check --parent 0/45/90 --child 45/90").exit_code == 0);
  CHECK(run("blend-check --parent 0/45/90 --child 90/45").exit_code == 1);
  CHECK(run("blend-check --parent 0/45/90 --child 0/90 --mode general").exit_code ==
        0);
}

TEST_CASE("discretize and verify round trip through files") {
  const fs::path tmp =
      fs::temp_directory_path() / ("polarlam_cli_" + std::to_string(std::rand()));
  fs::create_directories(tmp);
  std::ofstream(tmp / "panels.json") << R"({
    "N_ref": 10,
    "panels": [
      {"id": "a", "n0": 0.55, "rho0K": 0.3, "rho1": 0.1},
      {"id": "b", "n0": 0.42, "rho0K": 0.3, "rho1": 0.1}
    ]})";
  std::ofstream(tmp / "edges.json") << R"({"edges": [["a", "b"]]})";

  const RunResult r = run("discretize --input " + (tmp / "panels.json").string() +
                          " --adjacency " + (tmp / "edges.json").string() +
                          " --dnmin 4 --seed 1 --budget 500 --out " +
                          (tmp / "out.json").string() + " --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("feasible").get<bool>());
  CHECK(j.at("objective").get<double>() == doctest::Approx(0.0089).epsilon(1e-6));
  CHECK(fs::exists(tmp / "out.json"));
  fs::remove_all(tmp);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("analyze").exit_code == 2);                       // missing --stack
  CHECK(run("feasibility --panels /nonexistent").exit_code == 2);
  CHECK(run("nonsense-command").exit_code == 2);
  CHECK(run("analyze --stack 0/bad/0").exit_code == 2);
}

TEST_CASE("verify-paper material selector") {
  const RunResult r = run("verify-paper --dataset material");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("[PASS]") != std::string::npos);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("recover a tiny bundled-free subproblem end to end") {
  const fs::path tmp =
      fs::temp_directory_path() / ("polarlam_cli_" + std::to_string(std::rand()));
  fs::create_directories(tmp);
  std::ofstream(tmp / "target.json") << R"({
    "N_ref": 10,
    "panels": [{"id": "a", "N": 4, "rho0K": 1.0, "rho1": 1.0, "phi1": 0.5}]})";
  const RunResult r = run("recover --targets " + (tmp / "target.json").string() +
                          " --step 45 --budget 3000 --seed 2 --format json --out " +
                          (tmp / "stacks.json").string());
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("total").get<double>() < 1e-12);
  CHECK(j.at("panels").at(0).at("stack").get<std::string>() == "45/45/45/45");
  fs::remove_all(tmp);
}

TEST_CASE("pipeline on a three-panel toy project") {
  const fs::path tmp =
      fs::temp_directory_path() / ("polarlam_cli_" + std::to_string(std::rand()));
  fs::create_directories(tmp);
  std::ofstream(tmp / "panels.json") << R"({
    "N_ref": 12,
    "panels": [
      {"id": "a", "n0": 0.70, "rho0K": 0.4, "rho1": 0.2, "area": 1000},
      {"id": "b", "n0": 0.55, "rho0K": 0.3, "rho1": 0.2, "area": 1000},
      {"id": "c", "n0": 0.40, "rho0K": 0.3, "rho1": 0.1, "area": 1000}
    ]})";
  std::ofstream(tmp / "edges.json") << R"({"edges": [["a","b"], ["b","c"]]})";
  std::ofstream(tmp / "mat.json").close();
  // reuse the bundled material file
  fs::copy_file(data_dir() / "t300_5208.json", tmp / "mat.json",
                fs::copy_options::overwrite_existing);
  std::ofstream(tmp / "cfg.json") << R"({
    "material": "mat.json",
    "panels": "panels.json",
    "adjacency": "edges.json",
    "output": "out",
    "seed": 5,
    "budget": 6000,
    "discrete_budget": 2000,
    "grid_step": 15,
    "dnmin": 3
  })";
  const RunResult r = run("pipeline --config " + (tmp / "cfg.json").string());
  INFO(r.out);
  CHECK(fs::exists(tmp / "out" / "discrete_panels.json"));
  CHECK(fs::exists(tmp / "out" / "report.json"));
  CHECK(r.out.find("meso ok") != std::string::npos);

  // a different seed changes the stacks but not the checked status
  const RunResult r2 = run("pipeline --config " + (tmp / "cfg.json").string() +
                           " --seed 6");
  INFO(r2.out);
  CHECK((r2.out.find("meso ok") != std::string::npos));
  CHECK(r2.exit_code == r.exit_code);

  // budget 0 degrades to an initial-point report
  const RunResult r0 = run("pipeline --config " + (tmp / "cfg.json").string() +
                           " --budget 0");
  INFO(r0.out);
  CHECK(r0.out.find("recheck:") != std::string::npos);
  CHECK(fs::exists(tmp / "out" / "report.json"));
  fs::remove_all(tmp);
}
