#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rankmoments/binormal.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + RANKMOMENTS_CLI + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t k = fread(buf, 1, sizeof buf, p)) out.append(buf, k);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("rankmoments_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& body) {
  const auto p = scratch() / name;
  std::ofstream(p) << body;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool has_line(const std::string& text, const std::string& line) {
  return ("\n" + text).find("\n" + line + "\n") != std::string::npos;
}

}  // namespace

TEST_CASE("moments") {
  auto r = run("moments --rho 0 --n 10");
  CHECK(r.status == 0);
  CHECK(has_line(r.out, "var_rs_exact=0.1111111111"));
  CHECK(has_line(r.out, "cov_rs_rk_exact=0.0814814815"));
  r = run("moments --rho 1 --n 10");
  CHECK(has_line(r.out, "var_rs_exact=0.0000000000"));
  CHECK(has_line(r.out, "cov_rs_rk_exact=0.0000000000"));
  r = run("moments --rho 0.5 --n 20 --precision 15");
  CHECK(has_line(r.out, "var_rs_exact=" + rankmoments::format_fixed(rankmoments::var_rs_exact(0.5, 20), 15)));
  CHECK(has_line(r.out, "cov_rs_rk_exact=" + rankmoments::format_fixed(rankmoments::cov_rs_rk_exact(0.5, 20), 15)));
  CHECK(run("moments --rho 0.5 --n 3").status == 3);
  CHECK(run("moments --rho 2 --n 10").status == 3);
  CHECK(run("moments --rho x --n 10").status == 4);
  CHECK(run("moments --precision 16").status == 4);
  CHECK(run("frobnicate").status == 4);
}

TEST_CASE("tables") {
  const auto a = scratch() / "a.csv", b = scratch() / "b.csv";
  REQUIRE(run("tables --grid '0(0.01)1' --out " + a.string()).status == 0);
  REQUIRE(run("tables --grid '0(0.01)1' --out " + b.string()).status == 0);
  const auto text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(std::count(text.begin(), text.end(), '\n') == 102);
  CHECK(text.rfind("rho,omega1,omega2,omega3\n0.00,0.1111111111,0.5555555556,0.0555555556\n", 0) == 0);
  CHECK(has_line(text, "1.00,1.0000000000,5.3333333333,0.5000000000"));
  const auto one = run("tables --grid '1(0.01)1'");
  CHECK(one.out == "rho,omega1,omega2,omega3\n1.00,1.0000000000,5.3333333333,0.5000000000\n");
  CHECK(run("tables --grid '0(0.5)1.5'").status == 3);
  CHECK(run("tables --grid '0(0.3)1'").status == 4);
  CHECK(run("tables --out /nonexistent/dir/x.csv").status == 4);
}

TEST_CASE("estimate") {
  auto r = run("estimate " + write_file("eq.csv", "x,y\n1,1\n2.5,2.5\n3,3\n-4,-4\n7,7\n"));
  CHECK(r.status == 0);
  CHECK(has_line(r.out, "r_P=1.0000000000"));
  CHECK(has_line(r.out, "r_S=1.0000000000"));
  CHECK(has_line(r.out, "r_K=1.0000000000"));
  CHECK(has_line(r.out, "rho_hat_M=1.0000000000"));
  CHECK(has_line(r.out, "daniel_ok=true"));
  r = run("estimate " + write_file("fix.csv", "1,1\n2,3\n3,2\n4,4\n"));
  CHECK(has_line(r.out, "r_K=0.6666666667"));
  CHECK(has_line(r.out, "r_S=0.8000000000"));
  r = run("estimate " + write_file("ties.csv", "1,1\n2,3\n2,2\n4,4\n"));
  CHECK(r.status == 3);
  CHECK(r.out.find("tied") != std::string::npos);
  CHECK(r.out.find('2') != std::string::npos);
  CHECK(run("estimate " + write_file("bad.csv", "1,1\n2,x\n3,2\n4,4\n")).status == 4);
  CHECK(run("estimate " + write_file("short.csv", "1,1\n2,3\n3,2\n")).status == 3);
  CHECK(run("estimate /nonexistent.csv").status == 4);
}

TEST_CASE("simulate") {
  const auto a = scratch() / "s1.csv", b = scratch() / "s2.csv", c = scratch() / "s3.csv";
  const std::string args = "simulate --model binormal --rho 0 --n 10 --trials 100000 --seed 7 --out ";
  auto r = run(args + a.string());
  CHECK(r.status == 0);
  CHECK(run(args + b.string()).status == 0);
  CHECK(run(args + c.string(), "RANKMOMENTS_THREADS=3").status == 0);
  const auto text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text == slurp(c));
  CHECK(text.find("binormal,0.00,10,rS,variance,") != std::string::npos);
  const auto line = text.substr(text.find("binormal,0.00,10,rS,variance,"));
  CHECK(line.substr(0, line.find('\n')).find(",0.1111111111,") != std::string::npos);
  CHECK(line.substr(0, line.find('\n')).ends_with(",PASS"));
  CHECK(r.out.find("FAIL 0") != std::string::npos);

  r = run("simulate --model contaminated --epsilon 0.05 --lambda 100 --rho-prime 0 --n 50 --rho 0.9 --trials 100000 "
          "--seed 1 --strict");
  CHECK(r.status == 0);
  CHECK(has_line(r.out, "model,rho,n,kind,metric,empirical,theory,se,verdict"));
  for (const std::string key : {"contaminated,0.90,50,rS,mean,", "contaminated,0.90,50,rK,mean,"}) {
    const auto l = r.out.substr(r.out.find(key));
    CHECK(l.substr(0, l.find('\n')).ends_with(",PASS"));
  }
  const auto rival = r.out.substr(r.out.find("contaminated,0.90,50,rS,mean_rival,"));
  CHECK(rival.substr(0, rival.find('\n')).ends_with(",DISAGREE"));

  CHECK(run("simulate --seed nope").status == 4);
  CHECK(run("simulate --model cauchy").status == 4);
  CHECK(run("simulate --trials 10", "RANKMOMENTS_THREADS=zero").status == 4);
  CHECK(run("simulate --n 10 --trials 100000000000").status == 3);
}

TEST_CASE("are") {
  const auto r = run("are --grid '0(0.5)1'");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("rho,are_P,are_S,are_K,are_M\n0.00,1.0000000000,0.9118906528,0.9118906528,0.9118906528\n", 0) ==
        0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
}
