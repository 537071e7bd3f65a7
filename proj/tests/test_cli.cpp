#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(MATELAB_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("matelab_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("exponents subcommand emits the cut-point row") {
  TempDir dir("exponents");
  REQUIRE(run("exponents --gamma2 8/3 --n-max 3 --out " + dir.path.string()) ==
          0);
  std::string csv = slurp(dir.path / "exponents.csv");
  CHECK(csv.find("name,locus,n,rho,Delta,Delta_dual,x,dim") !=
        std::string::npos);
  CHECK(csv.find("cut_points,bulk,2,0,0.75") != std::string::npos);
  CHECK(fs::exists(dir.path / "manifest.cfg"));
}

TEST_CASE("fk subcommand") {
  TempDir dir("fk");
  REQUIRE(run("fk --q 1 --out " + dir.path.string()) == 0);
  std::string j = slurp(dir.path / "fk.json");
  CHECK(j.find("\"kappa_prime\": 6.0") != std::string::npos);
  CHECK(j.find("0.333333") != std::string::npos);
}

TEST_CASE("determinism: identical seeds give identical bytes") {
  TempDir a("bm_a"), b("bm_b");
  REQUIRE(run("bm --seed 77 --n 5000 --dt 0.001 --out " + a.path.string()) ==
          0);
  REQUIRE(run("bm --seed 77 --n 5000 --dt 0.001 --out " + b.path.string()) ==
          0);
  CHECK(slurp(a.path / "bm.csv") == slurp(b.path / "bm.csv"));
  CHECK(slurp(a.path / "manifest.cfg") == slurp(b.path / "manifest.cfg"));
}

TEST_CASE("manifest round trip reproduces outputs") {
  TempDir a("mrt_a"), b("mrt_b");
  REQUIRE(run("stable --seed 9 --alpha 1.5 --n 20000 --dt 0.001 --out " +
              a.path.string()) == 0);
  REQUIRE(run("stable --config " + (a.path / "manifest.cfg").string() +
              " --seed 9 --out " + b.path.string()) == 0);
  CHECK(slurp(a.path / "stable.csv") == slurp(b.path / "stable.csv"));
  CHECK(slurp(a.path / "stable_jumps.csv") ==
        slurp(b.path / "stable_jumps.csv"));
}

TEST_CASE("config and usage errors exit with 2") {
  TempDir dir("err");
  CHECK(run("bm --dt 0 --out " + dir.path.string()) == 2);
  CHECK(run("verify --suite nosuch --out " + dir.path.string()) == 2);
  CHECK(run("nosuchcommand") == 2);
  // Unknown key in a config file.
  std::ofstream cfg(dir.path / "bad.cfg");
  cfg << "command = bm\nnot_a_key = 3\n";
  cfg.close();
  CHECK(run("bm --config " + (dir.path / "bad.cfg").string() + " --out " +
            dir.path.string()) == 2);
}

TEST_CASE("verify algebra passes quickly and writes a report") {
  TempDir dir("verify");
  REQUIRE(run("verify --suite algebra --out " + dir.path.string()) == 0);
  std::string j = slurp(dir.path / "algebra.json");
  CHECK(j.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("report consolidates suites") {
  TempDir dir("report");
  CHECK(run("report --dir " + dir.path.string()) == 2);  // no manifest
  REQUIRE(run("verify --suite algebra --out " + dir.path.string()) == 0);
  REQUIRE(run("report --dir " + dir.path.string()) == 0);
  std::string j = slurp(dir.path / "report.json");
  CHECK(j.find("\"pass\": true") != std::string::npos);

  // A failing suite report flips the overall flag and is listed.
  std::ofstream bad(dir.path / "fake.json");
  bad << "{\"suite\":\"fake\",\"pass\":false,\"checks\":[{\"name\":"
         "\"broken-check\",\"pass\":false}]}\n";
  bad.close();
  CHECK(run("report --dir " + dir.path.string()) == 1);
  std::string j2 = slurp(dir.path / "report.json");
  CHECK(j2.find("\"pass\": false") != std::string::npos);
  CHECK(j2.find("broken-check") != std::string::npos);
}

TEST_CASE("mate subcommand writes the map and census") {
  TempDir dir("mate");
  REQUIRE(run("mate --n 256 --kind pm1 --seed 3 --out " + dir.path.string()) ==
          0);
  std::string j = slurp(dir.path / "mate.json");
  CHECK(j.find("\"euler_characteristic\": 2") != std::string::npos);
  std::string m = slurp(dir.path / "mated_map.txt");
  CHECK(m.find("glue") != std::string::npos);
  CHECK(m.find("dual") != std::string::npos);
}
