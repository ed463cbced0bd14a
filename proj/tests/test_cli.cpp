#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("cp-table output") {
  const auto r = run("cp-table --p 1,2,3");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("p,C_p,alpha_star\n1,2,0\n2,1,0\n3,1.0957314337,", 0) == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("no-such-command").code == 2);
  CHECK(run("verify-theorem --zoo mean,bogus --n 8").code == 2);
  CHECK(run("norm --p 0.5").code == 2);
  CHECK(run("cp-table --format xml").code == 2);
  CHECK(run("minmod --gamma 1+").code == 2);
  CHECK(run("narrowness --zoo identity --n 3 --mode exhaustive").code == 2);
}

TEST_CASE("failing checks exit with 1") {
  CHECK(run("verify-theorem --zoo mean --p 2 --gamma 1 --n 16").code == 0);
  // a tolerance rule of zero makes the block conditional expectation fail at p = 1
  CHECK(run("verify-theorem --zoo condexp:m=4 --p 1 --gamma 1 --n 16 --tolerance-rule 0+0*m/n").code == 1);
  CHECK(run("daugavet --m 4 --scale 1 --n 16").code == 0);
}

TEST_CASE("config file with command-line override") {
  const std::string path = "nlab_test_config.ini";
  {
    std::ofstream f(path);
    f << "# cp table run\np=1.5,3\nformat=json\n";
  }
  const auto a = run("cp-table --config " + path);
  CHECK(a.code == 0);
  CHECK(a.out.find("\"schema\": \"nlab.report/1\"") != std::string::npos);
  CHECK(a.out.find("\"p\": \"1.5,3\"") != std::string::npos);
  const auto b = run("cp-table --config " + path + " --format csv --p 2");
  CHECK(b.out == "p,C_p,alpha_star\n2,1,0\n");
  CHECK(run("cp-table --config missing_file.ini").code == 2);
  std::remove(path.c_str());
}

TEST_CASE("out flag writes the same bytes") {
  const std::string path = "nlab_test_out.csv";
  CHECK(run("daugavet --out " + path).code == 0);
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == run("daugavet").out);
  std::remove(path.c_str());
}

TEST_CASE("norm, minmod and narrowness commands") {
  const auto n = run("norm --zoo mean,kernel:st --p 1,3 --n 8");
  CHECK(n.code == 0);
  CHECK(n.out.find("mean,1,8,1,exact,exact:colsum,") != std::string::npos);
  const auto m = run("minmod --zoo mean --gamma 1 --p 3 --n 8");
  CHECK(m.out.find("mean,1,3,8,0,exact,exact:kernel,") != std::string::npos);
  const auto w = run("narrowness --zoo identity --n 4,8 --p 2");
  CHECK(w.code == 0);
  CHECK(w.out.rfind("n,best_value,sign_hash,evaluations\n4,1,", 0) == 0);
}
