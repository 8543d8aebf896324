#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <string>

#include <json.hpp>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(GMC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  Result r;
  if (!pipe) {
    return r;
  }
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

double first_value(const std::string& json_text, const std::string& key) {
  const auto j = nlohmann::json::parse(json_text);
  return std::stod(j["rows"][0][key].get<std::string>());
}

}  // namespace

TEST_CASE("exact at p = 0 prints 1") {
  const Result r = run("exact --gamma 1 --p 0 --a 0 --b 0");
  REQUIRE(r.code == 0);
  CHECK(first_value(r.out, "value") == 1.0);
}

TEST_CASE("exact and selberg agree") {
  const Result e = run("exact --gamma 1 --p 2 --a 0 --b 0");
  const Result s = run("selberg --gamma 1 --p 2 --a 0 --b 0");
  REQUIRE(e.code == 0);
  REQUIRE(s.code == 0);
  const double x = first_value(e.out, "value"), y = first_value(s.out, "value");
  CHECK(std::fabs(x - y) <= 1e-9 * std::fabs(y));
}

TEST_CASE("rows echo their parameters") {
  const Result r = run("mc-moment --gamma 1 --p -1 --seed 5 --replicates 200 --n-modes 64 --t 0,-1");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["rows"].size() == 2);
  for (const auto& row : j["rows"]) {
    for (const char* key : {"gamma", "p", "a", "b", "seed", "n_modes", "estimate", "closed_form"}) {
      CHECK_MESSAGE(row.contains(key), key);
    }
  }
  CHECK(j["rows"][0]["seed"] == "5");
}

TEST_CASE("csv output") {
  const Result r = run("martingale-moment --p -0.5,0 --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("p,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}

TEST_CASE("output file") {
  const std::string path = "cli_test_output.json";
  std::remove(path.c_str());
  const Result r = run("barnes --x 1,2,3 --output " + path);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["rows"].size() == 3);
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  CHECK(run("exact --gamma 1 --p 5").code == 1);        // outside the moment bounds
  CHECK(run("reflection --gamma 1 --alpha 0.2").code == 1);
  CHECK(run("exact --gamma 1").code == 64);             // missing --p
  CHECK(run("exact --gamma 1 --p 1 --bogus 3").code == 64);
  CHECK(run("mc-moment --gamma 1 --p 1").code == 64);   // no seed
  CHECK(run("verify --suite observables").code == 64);  // no seed
  CHECK(run("").code == 64);
  CHECK(run("verify --suite quadrature").code == 0);
}
