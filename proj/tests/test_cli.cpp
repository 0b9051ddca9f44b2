#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperqd/metrics.hpp"

namespace {

struct Run {
  int rc = -1;
  std::string out;
};

Run cli(const std::string& args, bool keep_stderr = false) {
  const std::string cmd =
      std::string("'") + HYPERQD_CLI + "' " + args + (keep_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t c = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++c;
  return c;
}

}  // namespace

TEST_CASE("coeffs") {
  auto r = cli("coeffs --g 0.5 --ks 0 --gamma 0.1");
  CHECK(r.rc == 0);
  CHECK(contains(r.out, "r   re=0.833333333 im=0"));
  CHECK(contains(r.out, "t   re=-0.166666667 im=0"));
  CHECK(contains(r.out, "r0  re=0 im=0"));
  CHECK(contains(r.out, "t0  re=-1 im=0"));

  r = cli("coeffs --g 0 --ks 0 --gamma 0.1");
  CHECK(r.rc == 0);
  CHECK(contains(r.out, "r   re=0 im=0"));
  CHECK(contains(r.out, "t   re=-1 im=0"));

  r = cli("coeffs --g 3.12 --ks 0.3 --gamma 0.1");
  CHECK(contains(r.out, "r0  re=0.130434783"));
  CHECK(contains(r.out, "t0  re=-0.869565217"));
  r = cli("coeffs --g-abs 3.12 --ks 0.3 --gamma 0.1");
  CHECK(contains(r.out, "t   re=-0.00510626"));

  r = cli("coeffs --g 1 --detuning-range -2,2 --detuning-steps 5");
  CHECK(r.rc == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 6);
  CHECK(l[0] == "detuning,r_re,r_im,t_re,t_im,r0_re,r0_im,t0_re,t0_im");
  CHECK(l[3].rfind("0,", 0) == 0);

  CHECK(cli("coeffs --g -1").rc == 2);
  CHECK(cli("coeffs --gamma abc").rc == 2);
  CHECK(cli("coeffs --bogus 1").rc == 2);
}

TEST_CASE("run") {
  auto r = cli("run hyper-cnot --ideal --a L,a2 --b R,b1");
  CHECK(r.rc == 0);
  CHECK(contains(r.out, "branches 4"));
  CHECK(count(r.out, "|L a2 L b2⟩") == 4);
  CHECK(count(r.out, "⟩") == 4);

  r = cli("run spatial-cnot --ideal --a R,a1 --b R,b1");
  CHECK(r.rc == 0);
  CHECK(count(r.out, "|R a1 R b1⟩") == 2);
  CHECK(count(r.out, "⟩") == 2);

  r = cli("run hyper-cnot --lossy --g 2.4 --ks 0");
  CHECK(r.rc == 0);
  CHECK(contains(r.out, "survival 0.966"));

  r = cli("run hyper-cnot --a-pol 0.70710678,0,0.70710678,0 --b R,b1");
  CHECK(r.rc == 0);
  CHECK(count(r.out, "|R a1 R b1⟩") == 4);
  CHECK(count(r.out, "|L a1 L b1⟩") == 4);

  r = cli("run spatial-cnot --lossy --g 0.8 --ks 0.1 --trace");
  CHECK(r.rc == 0);
  CHECK(contains(r.out, "norm2="));
  CHECK(contains(r.out, "QD e i1=a1 i2=a2 lossy"));

  r = cli("run hyper-cnot --lossy --g 0.8 --aux-measure");
  CHECK(r.rc == 0);
  CHECK(contains(r.out, "measurement auxiliary photon"));

  // sampling is reproducible
  const auto s1 = cli("run hyper-cnot --lossy --g 0.8 --sample --seed 5");
  const auto s2 = cli("run hyper-cnot --lossy --g 0.8 --sample --seed 5");
  CHECK(s1.rc == 0);
  CHECK(s1.out == s2.out);
  CHECK(contains(s1.out, "branches 1"));

  CHECK(cli("run hyper-cnot --a X,a1").rc == 2);
  CHECK(cli("run hyper-cnot --a R,b1").rc == 2);
  CHECK(cli("run hyper-cnot --a-pol 1,0,1,0").rc == 2);
  CHECK(cli("run hyper-cnot --a-pol 1,0,zz,0").rc == 2);
  CHECK(cli("run toffoli").rc == 2);
  CHECK(cli("run spatial-cnot --e1 up").rc == 2);
  CHECK(cli("run hyper-cnot --ideal --lossy").rc == 2);
  CHECK(cli("run hyper-cnot --lossy --g -2").rc == 2);
  CHECK(cli("run hyper-cnot --out /nonexistent-dir/x.txt").rc == 4);
}

TEST_CASE("truthtable") {
  auto r = cli("truthtable hyper-cnot");
  CHECK(r.rc == 0);
  auto l = lines(r.out);
  REQUIRE(l.size() == 17);
  CHECK(l[0] ==
        "a_pol,a_rail,b_pol,b_rail,out_a_pol,out_a_rail,out_b_pol,out_b_rail,p_out,branches,branches_agree,match");
  for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i].substr(l[i].size() - 8) == ",yes,yes");
  CHECK(contains(r.out, "L,a2,R,b1,L,a2,L,b2,1,4,yes,yes"));

  r = cli("truthtable spatial-cnot");
  l = lines(r.out);
  REQUIRE(l.size() == 17);
  CHECK(l[1] == "R,a1,R,b1,R,a1,R,b1,1,2,yes,yes");
  for (std::size_t i = 1; i < l.size(); ++i) {
    std::vector<std::string> f;
    std::stringstream ss(l[i]);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    REQUIRE(f.size() == 12);
    CHECK(f[0] == f[4]);
    CHECK(f[2] == f[6]);
    CHECK(f[11] == "yes");
  }

  r = cli("truthtable hyper-cnot --lossy --g 2.4");
  CHECK(r.rc == 0);
  CHECK(count(r.out, ",yes\n") == 16);
}

TEST_CASE("sweep") {
  auto r = cli("sweep --g-steps 301 --ks-steps 3 --out sweep_a.csv");
  CHECK(r.rc == 0);
  CHECK(contains(r.out, "rows 903"));
  CHECK(contains(r.out, "F_closed   min"));
  const std::string a = slurp("sweep_a.csv");
  std::istringstream is(a);
  const auto rows = hyperqd::read_metrics_csv(is);
  REQUIRE(rows.size() == 903);
  bool found = false;
  for (const auto& row : rows)
    if (std::abs(row.g_over_kks - 0.5) < 1e-12 && row.ks_over_k == 0.0) {
      found = true;
      CHECK(std::abs(row.F_closed - 0.925) <= 0.005);
      CHECK(std::abs(row.eta_closed - 0.550) <= 0.005);
    }
  CHECK(found);

  // round trip through the reader gives back the same bytes
  std::ostringstream again;
  hyperqd::write_metrics_csv(again, rows);
  CHECK(again.str() == a);

  // byte-identical across runs and thread counts
  CHECK(cli("sweep --g-steps 301 --ks-steps 3 --threads 1 --out sweep_b.csv").rc == 0);
  CHECK(slurp("sweep_b.csv") == a);

  r = cli("sweep --g-range 1e6,1e6 --g-steps 1 --ks-range 0,0 --ks-steps 1 --out -");
  CHECK(r.rc == 0);
  auto l = lines(r.out);
  REQUIRE(l.size() == 2);
  CHECK(l[1] == "1000000,0,0.1,1,1,1,1");

  r = cli("sweep --g-steps 4 --ks-steps 5 --out -");
  CHECK(lines(r.out).size() == 21);

  r = cli("sweep --g-steps 3 --ks-steps 2 --compare-alt --out sweep_c.csv");
  CHECK(contains(r.out, "alternative xi2 reading: 0 points differ"));

  CHECK(cli("sweep --out /nonexistent-dir/x.csv").rc == 4);
  CHECK(cli("sweep --g-steps 0").rc == 2);
  CHECK(cli("sweep --g-range 3,1").rc == 2);
}

TEST_CASE("config file, overridden by the command line") {
  {
    std::ofstream cfg("run.cfg");
    cfg << "# operating point B\n"
        << "g = 2.4\n"
        << "ks=0\n"
        << "lossy=true\n";
  }
  auto r = cli("run hyper-cnot --config run.cfg");
  CHECK(r.rc == 0);
  CHECK(contains(r.out, "survival 0.966"));
  r = cli("run hyper-cnot --config run.cfg --g 0.5");
  CHECK(contains(r.out, "g/(k+ks)=0.5"));
  {
    std::ofstream cfg("bad.cfg");
    cfg << "just words\n";
  }
  CHECK(cli("run hyper-cnot --config bad.cfg").rc == 2);
  CHECK(cli("run hyper-cnot --config missing.cfg").rc == 2);
}

TEST_CASE("verify") {
  const auto r = cli("verify");
  for (int k = 1; k <= 9; ++k) CHECK(contains(r.out, "criterion " + std::to_string(k) + ":"));
  CHECK(contains(r.out, "operating point A"));
  CHECK(contains(r.out, "operating point B"));
  CHECK(contains(r.out, "operating point C"));
  CHECK(r.rc == (contains(r.out, "FAIL  criterion") ? 1 : 0));
}

TEST_CASE("help and usage") {
  CHECK(cli("--help").rc == 0);
  CHECK(cli("").rc == 2);
  CHECK(cli("frobnicate").rc == 2);
}
