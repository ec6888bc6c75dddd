#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "hyperarr/catalog.hpp"
#include "hyperarr/certificate.hpp"

using namespace hyperarr;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
Run cli(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " " + std::string(HYPERARR_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json cli_json(const std::string& args) {
  const Run r = cli(args + " --json");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("schema") == 1);
  return j;
}

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hyperarr_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("characteristic polynomials and profiles") {
  CHECK(cli("charpoly --catalog g31").out == "(t-1)(t-13)(t-17)(t-29)\n");
  CHECK(cli("profile --catalog g33").out == "2^270 3^240\n");
  CHECK(cli("charpoly --catalog boolean3").out == "(t-1)^3\n");
  CHECK(cli("charpoly --catalog g24").code == 0);

  const json c = cli_json("charpoly --catalog g24");
  CHECK(c["exponents"] == json({1, 9, 11}));
  CHECK(c["charpoly"]["coefficients"] == json({-99, 119, -21, 1}));

  // Coefficients of chi are the sums of mu over each rank.
  const json l = cli_json("lattice --catalog g422");
  const json& lat = l["lattice"];
  const int rank = lat["rank"];
  for (int r = 0; r <= rank; ++r) {
    std::int64_t sum = 0;
    for (const auto& m : lat["mobius"][r]) sum += m.get<std::int64_t>();
    CHECK(lat["charpoly"]["coefficients"][rank - r] == sum);
    CHECK(lat["flats"][r].size() == lat["flat_counts"][r]);
  }
  CHECK(cli("lattice --catalog g31 --max-rank 2").out.find("2^360 3^320 6^30") != std::string::npos);
}

TEST_CASE("certify") {
  Run r = cli("certify --catalog g24 --class recursive --pool g24_resolution");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("recursive: member\n", 0) == 0);
  r = cli("certify --catalog g31 --class divisional");
  CHECK(r.out.rfind("divisional: member\n", 0) == 0);
  CHECK(r.out.find("{{1,13,17,29}}") != std::string::npos);
  r = cli("certify --catalog g333 --class inductive");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("inductive: nonmember\n", 0) == 0);

  const std::string cert = tmp("g31.cert.json");
  REQUIRE(cli("certify --catalog g31 --class divisional --cert-out " + cert).code == 0);
  const Arrangement g31 = catalog::build("g31");
  const CertPtr c = cert_from_json(json::parse(slurp(cert)), g31.field());
  CHECK(c->status == Status::Free);
  CHECK(cert_verify(g31, *c, &catalog::seeded_facts()).ok);
  std::filesystem::remove(cert);
}

TEST_CASE("sweeps") {
  Run r = cli("sweep --catalog g31");
  CHECK(r.code == 0);
  CHECK(r.out.find("\nsurvivors: 0\n") != std::string::npos);
  r = cli("sweep --catalog g29");
  CHECK(r.code == 0);
  CHECK(r.out.find("\nsurvivors: 0\n") != std::string::npos);

  const json b = cli_json("sweep --catalog boolean2");
  CHECK(b["sweep"]["survivors"].get<int>() >= 1);

  const json s = cli_json("sweep --catalog g31");
  CHECK(s["sweep"]["external_candidates"] == 1440);
  CHECK(s["sweep"]["complete"] == true);
}

TEST_CASE("reports are identical across thread counts") {
  for (const char* args : {"sweep --catalog g31 --json", "sweep --catalog g29 --json --all-charpolys",
                           "g31 sweep --samples 8 --seed 5 --json"}) {
    CAPTURE(args);
    const Run one = cli(std::string(args) + " --threads 1");
    const Run three = cli(std::string(args) + " --threads 3");
    CHECK(one.code == 0);
    CHECK(one.out == three.out);
  }
}

TEST_CASE("catalog commands") {
  const Run list = cli("catalog list");
  CHECK(list.out.find("g31") != std::string::npos);
  const std::string file = tmp("g24.arr");
  REQUIRE(cli("catalog build g24 --out " + file).code == 0);
  CHECK(cli("charpoly --in " + file).out == cli("charpoly --catalog g24").out);
  CHECK(arr_read_file(file).key() == catalog::build("g24").key());
  std::filesystem::remove(file);
}

TEST_CASE("g31 subcommands") {
  const json p = cli_json("g31 partition");
  CHECK(p["partition"]["blocks"].size() == 15);
  CHECK(p["partition"]["stars"].size() == 6);
  const json t = cli_json("g31 trichotomy");
  CHECK(t["trichotomy"]["violations"] == 0);
  CHECK(t["trichotomy"]["six"] == 180);
  const json cv = cli_json("g31 cross-validate --random-per-size 10");
  CHECK(cv["mismatches"] == 0);
  CHECK(cv["minimal_40"] == true);
}

TEST_CASE("verify writes a result file") {
  const std::string file = tmp("verify.json");
  const Run r = cli("verify g24 monomial --result " + file);
  CHECK(r.code == 0);
  CHECK(r.out.find("all criteria pass") != std::string::npos);
  const json j = json::parse(slurp(file));
  CHECK(j["schema"] == 1);
  CHECK(j["pass"] == true);
  CHECK(j["results"].size() == 3);
  const Run alias = cli("paper-verify g24 --result " + file);
  CHECK(alias.code == 0);
  CHECK(alias.out.find("all criteria pass") != std::string::npos);
  std::filesystem::remove(file);
}

TEST_CASE("exit codes") {
  CHECK(cli("charpoly").code == 2);
  CHECK(cli("charpoly --catalog g31 --in x.arr").code == 2);
  CHECK(cli("charpoly --catalog no_such_entry").code == 2);
  CHECK(cli("charpoly --in /nonexistent/file.arr").code == 2);
  const std::string bad = tmp("bad.arr");
  std::ofstream(bad) << "field cyclotomic 1\ndim 2\nh 0 0\n";
  CHECK(cli("charpoly --in " + bad).code == 2);
  std::filesystem::remove(bad);
  // Four generic planes in dimension 3: chi does not split, so the sweep has no premise.
  const std::string generic = tmp("generic.arr");
  std::ofstream(generic) << "field cyclotomic 1\ndim 3\nh 1 0 0\nh 0 1 0\nh 0 0 1\nh 1 1 1\n";
  CHECK(cli("sweep --in " + generic).code == 2);
  std::filesystem::remove(generic);
  CHECK(cli("verify nonsense").code == 2);
  CHECK(cli("charpoly --catalog g31 --budget 50").code == 3);
  CHECK(cli("certify --catalog g31 --class inductive --budget 3").code == 3);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("G33 from a directly supplied file when the G34 model is absent") {
  const std::filesystem::path dir = tmp("data");
  std::filesystem::create_directories(dir);
  const std::string env = "HYPERARR_DATA=" + dir.string();
  CHECK(cli("profile --catalog g33", env).code == 2);

  arr_write_file(catalog::build("g33"), (dir / "g33.arr").string());
  CHECK(cli("profile --catalog g33", env).out == "2^270 3^240\n");
  CHECK(cli("charpoly --catalog g34", env).code == 2);

  // A file failing the gates stays blocked.
  const Arrangement g33 = catalog::build("g33");
  std::vector<Hyperplane> fewer(g33.hyperplanes().begin(), g33.hyperplanes().end() - 1);
  arr_write_file(Arrangement(g33.field(), g33.dim(), fewer), (dir / "g33.arr").string());
  CHECK(cli("profile --catalog g33", env).code == 2);
  std::filesystem::remove_all(dir);
}
