#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SWFDE_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path work(const std::string& name) {
  const fs::path dir = SWFDE_WORK_DIR;
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

const std::string ex1 = std::string(SWFDE_DATA_DIR) + "/ex1.json";
const std::string ex2 = std::string(SWFDE_DATA_DIR) + "/ex2.json";

}  // namespace

TEST_CASE("certify: nonlinear example") {
  const auto cert = work("ex1_cert.json");
  const auto r = run("certify " + ex1 + " --out " + cert.string());
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("tau* = 2.20"));
  CHECK_THAT(r.out, ContainsSubstring("GES over Σ_{τ_a,N_0}"));
  const auto json = slurp(cert);
  CHECK_THAT(json, ContainsSubstring("\"feasible\": true"));
  CHECK_THAT(json, ContainsSubstring("\"gamma\": 1.25"));
}

TEST_CASE("certify: sector example") {
  const auto r = run("certify " + ex2);
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("\"gamma\": 1.0"));
  CHECK_THAT(r.out, ContainsSubstring("AES over Σ_+"));
}

TEST_CASE("certify: exit codes for bad and infeasible input") {
  const auto empty = work("no_modes.json");
  write(empty, R"({"n": 2, "h": 1, "modes": []})");
  const auto r = run("certify " + empty.string());
  CHECK(r.code == 1);
  CHECK_THAT(r.out, ContainsSubstring("$.modes"));

  CHECK(run("certify /nonexistent/spec.json").code == 1);

  const auto unstable = work("unstable.json");
  write(unstable, R"({"n": 1, "h": 1, "modes": [{"kind": "linear", "A": [[0.5]], "delays": [{"B": [[0.1]], "lag": 1}]}]})");
  const auto u = run("certify " + unstable.string());
  CHECK(u.code == 2);
  CHECK_THAT(u.out, ContainsSubstring("\"feasible\": false"));
}

TEST_CASE("simulate: periodic run on the nonlinear example decays") {
  const auto traj = work("ex1_traj.csv");
  const auto plot = work("ex1_plot.csv");
  const auto r = run("simulate " + ex1 + " --periodic 3 --horizon 30 --phi ex1_phi --out " + traj.string() +
                     " --plot-data " + plot.string());
  REQUIRE(r.code == 0);
  std::ifstream in(traj);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x1,x2,mode");
  std::string first;
  std::string last;
  std::getline(in, first);
  while (std::getline(in, line)) last = line;
  auto norm = [](const std::string& row) {
    std::stringstream ss(row);
    std::string cell;
    std::getline(ss, cell, ',');
    double n = 0.0;
    for (int i = 0; i < 2; ++i) {
      std::getline(ss, cell, ',');
      n = std::max(n, std::abs(std::stod(cell)));
    }
    return n;
  };
  CHECK(norm(last) < 0.05 * norm(first));
  CHECK(fs::file_size(plot) < fs::file_size(traj));
}

TEST_CASE("simulate: zero history gives zeros") {
  const auto traj = work("zero.csv");
  REQUIRE(run("simulate " + ex2 + " --adt 1 --seed 7 --horizon 5 --phi zero --out " + traj.string()).code == 0);
  std::ifstream in(traj);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    for (int i = 0; i < 2; ++i) {
      std::getline(ss, cell, ',');
      CHECK(std::stod(cell) == 0.0);
    }
  }
}

TEST_CASE("simulate: divergence and argument errors") {
  const auto unstable = work("blowup.json");
  write(unstable, R"({"n": 1, "h": 1, "modes": [{"kind": "linear", "A": [[5]]}]})");
  const auto r = run("simulate " + unstable.string() + " --periodic 1 --phi ones --horizon 20 --dt 0.01 --out " +
                     work("blowup.csv").string());
  CHECK(r.code == 3);
  CHECK_THAT(r.out, ContainsSubstring("divergence at t = 5.5"));

  CHECK(run("simulate " + ex1 + " --phi ex1_phi --out " + work("x.csv").string()).code == 1);
  CHECK(run("simulate " + ex1 + " --periodic 3 --adt 3 --phi ex1_phi --out " + work("x.csv").string()).code == 1);
  CHECK(run("simulate " + ex1 + " --periodic 3 --phi nothing --out " + work("x.csv").string()).code == 1);
}

TEST_CASE("gen-signal: admissible, deterministic, round trip into simulate") {
  const auto a = work("sig_a.csv");
  const auto b = work("sig_b.csv");
  const std::string flags = "--tau-a 3 --n0 0 --modes 2 --horizon 30 --seed 42 --out ";
  REQUIRE(run("gen-signal " + flags + a.string()).code == 0);
  REQUIRE(run("gen-signal " + flags + b.string()).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_THAT(slurp(a), ContainsSubstring("t,mode\n0,"));

  const auto few = run("gen-signal --tau-a 1e9 --modes 3 --horizon 30 --seed 1");
  CHECK(few.code == 0);
  CHECK(std::count(few.out.begin(), few.out.end(), '\n') <= 3);

  const auto traj = work("sig_traj.csv");
  CHECK(run("simulate " + ex1 + " --signal " + a.string() + " --phi ex1_phi --horizon 30 --out " + traj.string()).code == 0);
  CHECK(run("gen-signal --tau-a 0 --modes 2").code == 1);
}

TEST_CASE("verify: certify then verify pipeline") {
  const auto cert = work("pipe_cert.json");
  REQUIRE(run("certify " + ex1 + " --out " + cert.string()).code == 0);
  const auto ok = run("verify " + ex1 + " --cert " + cert.string() + " --tau-a 4.4 --trials 4 --seed 1 --dt 0.01");
  CHECK(ok.code == 0);
  CHECK_THAT(ok.out, ContainsSubstring("\"passes\": 4"));

  const auto refuse = run("verify " + ex1 + " --cert " + cert.string() + " --tau-a 2.0 --trials 4 --seed 1");
  CHECK(refuse.code == 1);
  CHECK_THAT(refuse.out, ContainsSubstring("tau*"));

  CHECK(run("verify " + ex1 + " --cert " + cert.string() + " --tau-a 3 --trials 0").code == 1);

  const auto cert2 = work("pipe_cert2.json");
  REQUIRE(run("certify " + ex2 + " --out " + cert2.string()).code == 0);
  CHECK(run("verify " + ex2 + " --cert " + cert2.string() + " --tau-a 1 --trials 3 --seed 2 --dt 0.01 --horizon 20")
            .code == 0);
}

TEST_CASE("compare: sector table") {
  const auto r = run("compare " + ex2);
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("\"this_criterion\": true"));
  CHECK_THAT(r.out, ContainsSubstring("\"dual_max\": false"));
  CHECK_THAT(r.out, ContainsSubstring("\"dual_pairs\": false"));
  CHECK(run("compare " + ex1).code == 1);
}

TEST_CASE("usage errors") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("--help").code == 0);
}
