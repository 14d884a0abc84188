#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <opcouple/json_io.hpp>

using namespace opcouple;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args, bool raw = false) {
  const std::string cmd =
      raw ? args + " 2>/dev/null"
          : std::string(OPCOUPLE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) res.out.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("opcouple-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string write(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string write_matrix(const std::string& name, const RatMatrix& m) const {
    return write(name, matrix_to_json(m).dump());
  }
};

Json strip_elapsed(Json j) {
  j.erase("elapsed_ms");
  return j;
}

}  // namespace

TEST_CASE("eae-check exit codes") {
  TempDir dir;
  const std::string u = dir.write_matrix("u.json", RatMatrix{{1, 0}, {0, 0}});
  const std::string v = dir.write_matrix("v.json", RatMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}});
  CHECK(run_cli("eae-check " + u + " " + v).exit_code == 0);

  const std::string z2 = dir.write_matrix("z2.json", RatMatrix(2, 2));
  const std::string z3 = dir.write_matrix("z3.json", RatMatrix(3, 3));
  CHECK(run_cli("eae-check " + z2 + " " + z3).exit_code == 1);

  const auto json_run = run_cli("--json eae-check " + u + " " + v);
  const Json report = Json::parse(json_run.out);
  CHECK(report["schema"] == "opcouple/1");
  CHECK(report["command"] == "eae-check");
  CHECK(report["pass"] == true);
  CHECK(report["result"]["nullity_u"] == 1);
  CHECK(report["result"]["corank_v"] == 1);
}

TEST_CASE("usage and I/O errors exit with 2") {
  TempDir dir;
  const std::string bad = dir.write("bad.json", "{not json");
  const std::string u = dir.write_matrix("u.json", RatMatrix::identity(2));
  CHECK(run_cli("eae-check " + bad + " " + u).exit_code == 2);
  CHECK(run_cli("eae-check " + dir.path.string() + "/missing.json " + u).exit_code == 2);
  CHECK(run_cli("no-such-command").exit_code == 2);
  CHECK(run_cli("eae-check").exit_code == 2);

  const std::string schema_bad =
      dir.write("schema.json", R"({"rows":1,"cols":2,"entries":[["1"]]})");
  CHECK(run_cli("decompose " + schema_bad).exit_code == 2);
}

TEST_CASE("decompose emits a re-checkable decomposition") {
  TempDir dir;
  const RatMatrix u{{0, 1}, {0, 0}};
  const std::string u_path = dir.write_matrix("u.json", u);
  const auto run = run_cli("--json decompose " + u_path);
  REQUIRE(run.exit_code == 0);
  const Json report = Json::parse(run.out);
  CHECK(report["checks"][0]["name"] == "decomposition_valid");
  CHECK(report["checks"][0]["pass"] == true);
  CHECK(report["result"]["rank"] == 1);
  const RatMatrix core = matrix_from_json(report["result"]["core"]);
  const RatMatrix r = matrix_from_json(report["result"]["r"]);
  const RatMatrix s = matrix_from_json(report["result"]["s"]);
  CHECK(inverse(s) * u * r == block_diag(core, RatMatrix(1, 1)));
}

TEST_CASE("eae-witness bundle can be re-verified from the report alone") {
  TempDir dir;
  const std::string u = dir.write_matrix("u.json", RatMatrix{{1, 0}, {0, 0}});
  const std::string v = dir.write_matrix("v.json", RatMatrix{{2, 0}, {0, 0}});
  const auto run = run_cli("--json eae-witness --random-params --seed 5 " + u + " " + v);
  REQUIRE(run.exit_code == 0);
  const Json report = Json::parse(run.out);
  CHECK(report["pass"] == true);
  const RatMatrix e = matrix_from_json(report["result"]["e"]);
  const RatMatrix f = matrix_from_json(report["result"]["f"]);
  CHECK(verify_eae(RatMatrix{{1, 0}, {0, 0}}, RatMatrix{{2, 0}, {0, 0}}, e, f));

  // mismatched defect dimensions: the relation does not hold
  const std::string z3 = dir.write_matrix("z3.json", RatMatrix(3, 3));
  CHECK(run_cli("eae-witness " + u + " " + z3).exit_code == 1);
}

TEST_CASE("sc-build and sc-verify round trip through files") {
  TempDir dir;
  const std::string u = dir.write_matrix("u.json", RatMatrix{{1, 0}, {0, 0}});
  const std::string v = dir.write_matrix("v.json", RatMatrix{{3, 0}, {0, 0}});
  const std::string m = (dir.path / "m.json").string();
  REQUIRE(run_cli("sc-build -o " + m + " " + u + " " + v).exit_code == 0);
  CHECK(run_cli("sc-verify " + u + " " + v + " " + m).exit_code == 0);

  const auto checked = run_cli("--json sc-verify --check " + u + " " + v + " " + m);
  CHECK(checked.exit_code == 0);
  const Json report = Json::parse(checked.out);
  REQUIRE(report["checks"].size() == 5);
  CHECK(report["checks"][0]["name"] == "a_invertible");

  // corrupt one entry of the witness: verification must fail with exit 1
  Json witness = Json::parse(std::ifstream(m));
  witness["a"]["entries"][0][0] = "17";
  const std::string bad = dir.write("bad_m.json", witness.dump());
  CHECK(run_cli("sc-verify " + u + " " + v + " " + bad).exit_code == 1);
}

TEST_CASE("bsop solves exactly the balanced instances") {
  CHECK(run_cli("bsop --dim-v 2 --dim-w 3 --dim-z1 1 --dim-z2 1").exit_code == 0);
  CHECK(run_cli("bsop --dim-v 2 --dim-w 3 --dim-z1 1 --dim-z2 2").exit_code == 1);

  const auto run = run_cli("--json bsop --dim-v 2 --dim-w 3 --dim-z1 1 --dim-z2 1");
  const Json report = Json::parse(run.out);
  CHECK(report["pass"] == true);
  const RatMatrix t = matrix_from_json(report["result"]["solution"]["t"]);
  CHECK(t == RatMatrix::identity(3));
}

TEST_CASE("fuzz runs green and reports deterministically") {
  const auto a = run_cli("--json fuzz --seed 7 --trials 8 --max-dim 4");
  const auto b = run_cli("--json fuzz --seed 7 --trials 8 --max-dim 4");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(strip_elapsed(Json::parse(a.out)).dump() == strip_elapsed(Json::parse(b.out)).dump());

  const auto c = run_cli("--json fuzz --seed 8 --trials 8 --max-dim 4");
  CHECK(strip_elapsed(Json::parse(a.out)).dump() != strip_elapsed(Json::parse(c.out)).dump());

  const auto human = run_cli("fuzz --seed 3 --trials 5 --max-dim 4 --kind eae-pair");
  CHECK(human.exit_code == 0);
  CHECK(human.out.find("trial-4: PASS") != std::string::npos);
}

TEST_CASE("entry bound environment override changes the instances") {
  const std::string args = "--json fuzz --seed 4 --trials 3 --max-dim 3 --kind sc-witness";
  const auto plain = run_cli(args);
  const auto widened = run_cli("env OPCOUPLE_ENTRY_BOUND=9 " + std::string(OPCOUPLE_CLI_PATH) +
                                   " " + args,
                               /*raw=*/true);
  REQUIRE(plain.exit_code == 0);
  REQUIRE(widened.exit_code == 0);
  CHECK(Json::parse(plain.out)["inputs"]["config"]["entry_bound"] == kDefaultEntryBound);
  CHECK(Json::parse(widened.out)["inputs"]["config"]["entry_bound"] == 9);
}
