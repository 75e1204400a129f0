#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "rvlab_test_cli";

int run(const std::string& args) {
  const std::string cmd = std::string(RVLAB_CLI) + " " + args + " > " + (kDir / "stdout.txt").string() +
                          " 2> " + (kDir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fresh {
  Fresh() {
    fs::remove_all(kDir);
    fs::create_directories(kDir);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Fresh, "tail example from the docs") {
  const fs::path out = kDir / "tail.csv";
  CHECK(run("tail --n 8 --d uniform:1:2 --ensemble unitary --t-grid log:1e-6:1e-1:25 --trials 500 "
            "--seed 42 --out " + out.string()) == 0);
  const std::string csv = slurp(out);
  CHECK(csv.starts_with("# rvlab "));
  CHECK(csv.find(" seed=42\n") != std::string::npos);
  CHECK(fs::exists(kDir / "tail.fit.json"));
  CHECK(slurp(kDir / "stdout.txt").find("\"config_hash\"") != std::string::npos);
}

TEST_CASE_FIXTURE(Fresh, "flags override the config file") {
  std::ofstream(kDir / "run.cfg") << "n = 3\ntrials = 50\nseed = 5\nd = diag:1,2\n";
  const fs::path out = kDir / "tail.csv";
  // The file's d has 2 entries for n = 3; the flag fixes it.
  CHECK(run("tail --config " + (kDir / "run.cfg").string() + " --d uniform:1:2 --t-grid list:0.5,1 --out " +
            out.string()) == 0);
  CHECK(slurp(out).find(" seed=5\n") != std::string::npos);
  CHECK(run("tail --config " + (kDir / "run.cfg").string() + " --out " + out.string()) == 2);
  CHECK(slurp(kDir / "stderr.txt").find("expected 3 entries, got 2") != std::string::npos);
}

TEST_CASE_FIXTURE(Fresh, "usage errors exit with 2") {
  CHECK(run("tail --bogus 1") == 2);
  CHECK(run("") == 2);
  CHECK(run("tail --trials 0") == 2);
  CHECK(run("tail --t-grid list:0.2,0.1") == 2);
  CHECK(run("lemma --lemma no-such-lemma") == 2);
  CHECK(run("single-ring --n 2 --d diag:1,-1 --out " + (kDir / "x.csv").string()) == 2);
}

TEST_CASE_FIXTURE(Fresh, "lemma subcommand prints one line and passes") {
  const fs::path out = kDir / "q.json";
  CHECK(run("lemma --lemma quadratic-form --instances 50 --out " + out.string() + " --manifest " +
            (kDir / "m.json").string()) == 0);
  CHECK(slurp(kDir / "stdout.txt") == "PASS quadratic-form instances=50 skipped=0 violations=0\n");
  CHECK(slurp(kDir / "m.json").find("\"passed\": true") != std::string::npos);
}

TEST_CASE_FIXTURE(Fresh, "failed assertions exit with 1") {
  // Half of the Haar O(2) draws are reflections, where det(B + U) != 1.
  CHECK(run("counterexample --M 100 --trials 20 --out " + (kDir / "ce.csv").string()) == 1);
  CHECK(slurp(kDir / "stdout.txt").find("FAIL") != std::string::npos);
  CHECK(run("counterexample --M 100 --trials 20 --ensemble special_orthogonal --out " +
            (kDir / "ce.csv").string()) == 0);
  CHECK(run("single-ring --n 16 --d uniform:1:2 --trials 2 --margin 0 --min-inside 1.0 --out " +
            (kDir / "r.csv").string()) == 1);
}
