//
// treelat - Copyright 2026 The treelat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "treelat/graph_io.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string &args) {
  const std::string cmd = std::string(TREELAT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p))
    r.out += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_path(const std::string &name) {
  return std::string(TREELAT_TMP) + "/" + name;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("covolume of the star ray") {
  auto r = run("covolume --startree ray --m 4 --n 3 --selector v0");
  CHECK(r.code == 0);
  CHECK(r.out == "2/1\n");
  CHECK(run("covolume --startree ray --m 5 --n 5").out == "4/3\n");
}

TEST_CASE("exit codes") {
  CHECK(run("covolume --startree nope").code == 2);
  CHECK(run("covolume --selector v7").code == 2);
  CHECK(run("realize --kappa 2 --n 3").code == 4);
  CHECK(run("covolume --spec /nonexistent.json").code == 2);
  CHECK(run("realize --kappa abc").code == 2);
  std::ofstream(temp_path("bad_graph.json"))
      << R"({"vertices":[{"id":"a","part":"V0"}],"edges":[{"id":"e","origin":"a","terminus":"a","index":0,"reverse":"e"}]})";
  CHECK(run("validate --graph " + temp_path("bad_graph.json")).code == 3);
}

TEST_CASE("export, order and cover commands") {
  const std::string g = temp_path("star.json");
  auto ex = run("export --startree star --m 3 --n 3 --depth 0");
  REQUIRE(ex.code == 0);
  std::ofstream(g) << ex.out;
  auto ord = run("order --graph " + g + " --base v0 --value 1");
  CHECK(ord.code == 0);
  auto j = treelat::Json::parse(ord.out);
  CHECK(j["vertices"]["v0"] == "1/1");
  CHECK(j["vertices"]["v0_l0"] == "3/1");
  CHECK(run("validate --graph " + g + " --m 3 --n 3").code == 0);
  auto dot = run("export --graph " + g + " --format dot --ordering");
  CHECK(dot.out.find("graph") != std::string::npos);
}

TEST_CASE("realize and shrink reports") {
  auto r = run("realize --kappa 3 --m 4 --n 3");
  CHECK(r.code == 0);
  auto j = treelat::Json::parse(r.out);
  CHECK(j["covolume"]["exact"] == "3/1");
  auto s = run("shrink --n 4 --k 2");
  auto js = treelat::Json::parse(s.out);
  CHECK(js["covolume"] == "1/4");
  CHECK(js["tower"]["faithful"] == true);
}

TEST_CASE("sampler is seeded") {
  auto a = run("realize --kappa 3 --n 3 --samples 5 --seed 9");
  auto b = run("realize --kappa 3 --n 3 --samples 5 --seed 9");
  auto c = run("realize --kappa 3 --n 3 --samples 5 --seed 10");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("growth command") {
  auto r = run("growth --f exp:3/2 --g exp:7/4");
  auto j = treelat::Json::parse(r.out);
  CHECK(j["equivalence"]["value"] == "no");
  auto st = run("growth --startree ray --m 6 --n 6 --s ';3,6' --radius 6 "
                "--stabilizer levels --v0-only");
  auto js = treelat::Json::parse(st.out);
  CHECK(js["stabilizer"][6] == "1000");
}

TEST_CASE("output is byte-identical across runs") {
  const std::string args = "realize --kappa 4 --m 4 --n 4 --f exp:3/2";
  CHECK(run(args).out == run(args).out);
}

}
