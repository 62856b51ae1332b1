#include "coadapt/io.hpp"

#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

using namespace coadapt;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "coadapt_cli_test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd = std::string(COADAPT_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                          (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, io::read_text(out.string())};
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

}  // namespace

TEST_CASE("exact and tv reproduce closed forms") {
  const Run e = run("exact --d 2 --m 1 --t 0.5");
  REQUIRE(e.code == 0);
  const io::TailGrid g = io::parse_tail_table_csv(e.out);
  REQUIRE(g.values.size() == 1);
  CHECK(g.values[0][0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));

  const Run tv = run("tv --d 3 --n 1 --t 0");
  REQUIRE(tv.code == 0);
  CHECK(tv.out == "t,tv_exact\n0,0.6666666666666667\n");

  const Run lim = run("limit --n 1 --t 0,1");
  REQUIRE(lim.code == 0);
  CHECK(lim.out.rfind("t,limit_tail\n0,1\n", 0) == 0);
}

TEST_CASE("verify reports every cell as a match") {
  const Run v = run("verify --d 4 --mmax 10 --replicates 0");
  REQUIRE(v.code == 0);
  const io::json j = io::json::parse(v.out);
  CHECK(j["summary"]["match"] == 10 * 40);
  CHECK(j["summary"]["violation"] == 0);
  CHECK(j["summary"]["passed"] == true);
}

TEST_CASE("exit codes") {
  CHECK(run("simulate --replicates 5").code == 2);
  CHECK(run("exact --d 1").code == 2);
  CHECK(run("no-such-command").code == 2);
  CHECK(run("simulate --strategy nonsense").code == 2);
  CHECK(run("mean-tau --d 2 --n 100").code == 1);
  CHECK(run("mean-tau --d 4 --n 100").code == 0);
  CHECK(run("exact --d 3 --m 2 --t 1 --out /nonexistent/dir/x.csv").code == 2);
}

TEST_CASE("simulation output is deterministic across worker counts") {
  const std::string base = "simulate --d 3 --m 5 --t 0.25,0.5,1,2 --replicates 2000 --seed 11";
  const Run a = run("--workers 1 " + base), b = run("--workers 4 " + base), c = run(base);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const SurvivalCurve curve = io::parse_survival_csv(a.out);
  CHECK(curve.value.size() == 4);
  CHECK(io::survival_csv(curve) == a.out);
  CHECK(run("simulate --d 3 --m 5 --t 0.25,0.5,1,2 --replicates 2000 --seed 12").out != a.out);
  const Run full = run("simulate --d 3 --y0 1,2,0,1 --t 0.5,1 --replicates 500 --seed 2");
  CHECK(full.code == 0);
  CHECK(io::parse_survival_csv(full.out).replicates == 500);
}

TEST_CASE("files, metadata and plots") {
  const std::string csv = path("tail.csv");
  REQUIRE(run("exact --d 4 --mmax 6 --t-start 0.1 --t-stop 3 --t-points 5 --out " + csv + " --plot").code == 0);
  const std::string text = io::read_text(csv);
  CHECK(io::tail_table_csv(io::parse_tail_table_csv(text)) == text);
  CHECK(io::parse_tail_table_csv(text).levels.size() == 7);
  const io::json meta = io::json::parse(io::read_text(csv + ".meta.json"));
  CHECK(meta["command"] == "exact");
  CHECK(meta["parameters"]["d"] == 4);
  CHECK(fs::exists(csv + ".gp"));

  const std::string js = path("sim.json");
  REQUIRE(run("simulate --d 4 --m 3 --t 1,2 --replicates 300 --format json --out " + js).code == 0);
  const io::json j = io::json::parse(io::read_text(js));
  CHECK(io::survival_json(io::survival_from_json(j)) == j);

  const std::string cut = path("cut.csv");
  REQUIRE(run("cutoff --d 5 --n 1000 --out " + cut).code == 0);
  const std::string ct = io::read_text(cut);
  CHECK(io::parse_cutoff_csv(ct).size() == 3);
  CHECK(io::cutoff_csv(io::parse_cutoff_csv(ct)) == ct);
}

TEST_CASE("config files supply defaults and flags win") {
  const std::string cfg = path("run.toml");
  io::write_text(cfg, "[simulate]\nd = 5\nm0 = 2\nreplicates = 400\nseed = 9\nt = [0.5, 1.0]\n");
  const Run from_file = run("--config " + cfg + " simulate");
  const Run explicit_flags = run("simulate --d 5 --m0 2 --replicates 400 --seed 9 --t 0.5,1");
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out == explicit_flags.out);
  const Run overridden = run("--config " + cfg + " simulate --seed 10");
  const Run want = run("simulate --d 5 --m0 2 --replicates 400 --seed 10 --t 0.5,1");
  CHECK(overridden.out == want.out);
  CHECK(overridden.out != from_file.out);
  CHECK(run("--config " + path("missing.toml") + " simulate").code == 2);
}

TEST_CASE("laplace emits identities") {
  const Run l = run("laplace --d 5 --mmax 4");
  REQUIRE(l.code == 0);
  const io::json j = io::json::parse(l.out);
  CHECK(j.dump().find("(3)/(4*alpha^2 + 13*alpha + 10)") != std::string::npos);
  CHECK(run("laplace --mmax 3 --symbolic").code == 0);
}
