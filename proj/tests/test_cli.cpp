#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string output;
};

Result run(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "heraldq_cli_test.log";
  const std::string cmd = std::string(HERALDQ_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(status), ss.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("heraldq_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("wigner --grid-n abc").code == 2);
}

TEST_CASE("config errors exit with 2 and name the line") {
  const fs::path dir = scratch("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << "{\n  \"case\": \"bdag_U\",\n  \"window\": -1\n}\n";
  const auto r = run("wigner --config " + (dir / "c.json").string());
  CHECK(r.code == 2);
  CHECK(r.output.find("line 3") != std::string::npos);
  CHECK(run("wigner --case nope").code == 2);
  CHECK(run("validate --fault-inject nope").code == 2);
  CHECK(run("wigner --herald-p 1e-4 --window 0.1").code == 2);
}

TEST_CASE("wigner cell with flags overriding the config") {
  const fs::path dir = scratch("wig");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"case": "S_bdag", "nbar": 0, "grid_n": 21})";
  const auto r = run("wigner --config " + (dir / "c.json").string() + " --nbar 1 --r 0.7 --grid-n 31 --out " +
                     (dir / "out").string());
  REQUIRE(r.code == 0);
  const fs::path side = dir / "out" / "wigner_S_bdag_nbar1_r0.69999999999999996.json";
  REQUIRE(fs::exists(side));
  std::ifstream in(side);
  const auto meta = nlohmann::json::parse(in);
  CHECK(meta["nx"] == 31);
  CHECK(meta["parameters"]["nbar"] == 1.0);
}

TEST_CASE("sweep and surface commands") {
  const fs::path dir = scratch("sweep");
  CHECK(run("sweep-metrics --case bdag_S --r 0.5 --out " + dir.string()).code == 0);
  CHECK(fs::exists(dir / "sweep_metrics.csv"));
  CHECK(run("cat-surface --case bdag_U --nbar 1 --r 0.9 --out " + dir.string()).code == 0);
  std::ifstream in(dir / "cat_surface.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "case,nbar,r,chi,F_cat,P_cat,F_FS1,FS1_overlap,degenerate,is_max");
  CHECK(row.rfind("bdag_U,1,0.90000000000000002,", 0) == 0);
}

TEST_CASE("validate exits 1 under fault injection") {
  const fs::path dir = scratch("val");
  const std::string base = "validate --case b_U --nbar 1 --grid-n 31 --out " + dir.string();
  CHECK(run(base).code == 0);
  const auto r = run(base + " --fault-inject mu");
  CHECK(r.code == 1);
  CHECK(r.output.find("FAIL oracle_wigner/b_U") != std::string::npos);
}
