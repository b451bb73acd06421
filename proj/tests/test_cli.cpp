// End-to-end tests of the conic-forms binary: exit code contract and output
// shapes, driven through popen.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "conic/system_io.hpp"

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(CONIC_FORMS_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string data(const std::string& name) { return std::string(CONIC_TEST_DATA) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("bracket output") {
  const RunResult r = run("bracket " + data("sigma_e.json") + " --u f --v g");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "sin(w), -cos(w), 0\n");

  const RunResult same = run("bracket " + data("sigma_e.json") + " --u g --v g");
  CHECK(same.exit_code == 0);
  CHECK(same.out == "0, 0, 0\n");

  const RunResult bad = run("bracket " + data("sigma_e.json") + " --u q --v g");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("classify exit codes and summaries") {
  const RunResult e = run("classify " + data("sigma_e.json"));
  CHECK(e.exit_code == 0);
  CHECK(lines(e.out).at(0) == "Elliptic (feedback equivalent to Sigma_E)");

  const RunResult h = run("classify " + data("sigma_h.json"));
  CHECK(h.exit_code == 0);
  CHECK(lines(h.out).at(0) == "Hyperbolic (feedback equivalent to Sigma_H)");

  const RunResult p1 = run("classify " + data("sigma_p_noneq.json"));
  CHECK(p1.exit_code == 0);
  CHECK(lines(p1.out).at(0) == "ParabolicNonEq (feedback equivalent to Sigma_P around w0 != 0)");

  const RunResult p0 = run("classify " + data("sigma_p_eq.json") + " --json");
  CHECK(p0.exit_code == 0);
  const auto p0_lines = lines(p0.out);
  CHECK(p0_lines.at(0) == "ParabolicEq k=1 (feedback equivalent to Sigma_P^{0,1})");
  const nlohmann::json evidence = nlohmann::json::parse(p0_lines.at(1));
  CHECK(evidence.at("tag") == "ParabolicEq");
  CHECK(evidence.at("k") == 1);
  CHECK(evidence.at("algebra").at("label") == "L(3,2,2)");

  const RunResult nd = run("classify " + data("no_drift.json"));
  CHECK(nd.exit_code == 0);
  CHECK(lines(nd.out).at(0) == "NotConic: symmetry dimension != 3");

  // inconclusive: k bounded below the true order
  const RunResult kx = run("classify " + data("sigma_p02.json") + " --kmax 1");
  CHECK(kx.exit_code == 3);
  CHECK(lines(kx.out).at(0) == "Inconclusive: k not found <= kmax");
}

TEST_CASE("classify input errors") {
  CHECK(run("classify /nonexistent/file.json").exit_code == 2);
  CHECK(run("classify " + data("bad_expr.json")).exit_code == 2);
  CHECK(run("classify").exit_code == 2);  // missing required argument
}

TEST_CASE("symmetries output") {
  const RunResult r = run("symmetries " + data("sigma_p_eq.json"));
  CHECK(r.exit_code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() >= 7);
  CHECK(ls.at(0).find("dim = 3") == 0);
  // three generators and the three bracket relations
  CHECK(ls.at(1).rfind("v1:", 0) == 0);
  CHECK(ls.at(4).rfind("[v1,v2] = ", 0) == 0);
}

TEST_CASE("simulate produces plot-ready csv") {
  const std::string out_path = "/tmp/conic_cli_sim.csv";
  const RunResult r = run("simulate " + data("sigma_e.json") +
                          " --u 1 --T 6.2832 --step 0.001 --out " + out_path);
  CHECK(r.exit_code == 0);
  // residual report goes to stdout when csv goes to a file
  CHECK(r.out.find("constraint residual |S_E|") != std::string::npos);

  std::ifstream csv(out_path);
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,x,y,w,u");
  std::string line, last;
  while (std::getline(csv, line))
    if (!line.empty()) last = line;
  double t, x, y, w, u;
  REQUIRE(std::sscanf(last.c_str(), "%lf,%lf,%lf,%lf,%lf", &t, &x, &y, &w, &u) == 5);
  // closed circle within 1e-4 of the start
  CHECK(std::fabs(x) < 1e-4);
  CHECK(std::fabs(y) < 1e-4);
  std::remove(out_path.c_str());
}

TEST_CASE("chart report") {
  const RunResult r = run("chart " + data("sigma_e.json") + " --box 0.4");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("v1_residual").get<double>() < 1e-6);
  CHECK(j.at("v2_residual").get<double>() < 1e-6);
  CHECK(j.at("g_ratio_spread").get<double>() < 1e-6);
  CHECK(j.at("invariant").at("value").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("invariant").at("spread").get<double>() < 1e-5);
}

TEST_CASE("tolerance override through the environment") {
  RunResult ok = run("classify " + data("sigma_e.json"));
  CHECK(ok.exit_code == 0);
  // a valid override is accepted
  {
    const std::string cmd = "CONIC_FORMS_TOL=1e-7 " + std::string(CONIC_FORMS_BIN) +
                            " classify " + data("sigma_e.json") + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[256];
    std::string out;
    while (fgets(buf, sizeof(buf), pipe)) out += buf;
    CHECK(WEXITSTATUS(pclose(pipe)) == 0);
    CHECK(out.find("Elliptic") == 0);
  }
  // a malformed override is an input error
  {
    const std::string cmd = "CONIC_FORMS_TOL=abc " + std::string(CONIC_FORMS_BIN) +
                            " classify " + data("sigma_e.json") + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[256];
    while (fgets(buf, sizeof(buf), pipe)) {
    }
    CHECK(WEXITSTATUS(pclose(pipe)) == 2);
  }
}

TEST_CASE("documents with a vanishing control field are rejected") {
  const std::string path = "/tmp/conic_cli_zero_g.json";
  std::ofstream doc(path);
  doc << R"({"name":"zero","f":["1","0","0"],"g":["0","0","0"],"base":[0,0,0]})";
  doc.close();
  CHECK(run("classify " + path).exit_code == 2);
  CHECK(run("bracket " + path + " --u f --v g").exit_code == 2);
  std::remove(path.c_str());
}

TEST_CASE("simulate json rows") {
  const RunResult r = run("simulate " + data("sigma_p_eq.json") + " --u 0 --T 0.5 --json");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("columns") == nlohmann::json({"t", "x", "y", "w", "u"}));
  CHECK(j.at("rows").size() == 501);
}

TEST_CASE("scramble then classify preserves the verdict") {
  const std::string scrambled_path = "/tmp/conic_cli_scrambled.json";
  const RunResult s = run("scramble " + data("sigma_p_eq.json") + " --seed 7 --out " +
                          scrambled_path);
  CHECK(s.exit_code == 0);

  // determinism of the seeded transform
  const RunResult again = run("scramble " + data("sigma_p_eq.json") + " --seed 7");
  std::ifstream in(scrambled_path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(again.out == buf.str());

  const RunResult v = run("classify " + scrambled_path);
  CHECK(v.exit_code == 0);
  CHECK(lines(v.out).at(0) == "ParabolicEq k=1 (feedback equivalent to Sigma_P^{0,1})");
  std::remove(scrambled_path.c_str());
}
