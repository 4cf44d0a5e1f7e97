#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#ifndef RBX_CLI_PATH
#define RBX_CLI_PATH "rbx"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(RBX_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) res.out.append(buf.data(), got);
  int status = pclose(p);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = std::string("/tmp/rbx_cli_") + name;
  std::ofstream out(path);
  out << content;
  return path;
}

const char* kOneByOne = "R 0 0 4 0\nB 1 2 3 -2\n";

}  // namespace

TEST_CASE("count prints the crossing count") {
  auto path = write_temp("one.txt", kOneByOne);
  auto res = run("count " + path);
  CHECK(res.exit_code == 0);
  CHECK(res.out == "1\n");
}

TEST_CASE("validate rejects duplicate x with exit 2") {
  auto path = write_temp("dup.txt", "R 0 0 4 0\nR 0 1 5 1\n");
  auto res = run("validate " + path);
  CHECK(res.exit_code == 2);
  CHECK(res.out.find("duplicate-endpoint-x") != std::string::npos);
  auto res2 = run("count " + path);
  CHECK(res2.exit_code == 2);
}

TEST_CASE("gen is deterministic and round-trips through validate") {
  auto a = run("gen --seed 7 --reds 50 --blues 50");
  auto b = run("gen --seed 7 --reds 50 --blues 50");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  auto path = write_temp("gen.txt", a.out);
  auto v = run("validate --against-naive " + path);
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("naive agreement") != std::string::npos);
}

TEST_CASE("RBINDEX_SEED overrides --seed") {
  auto a = run("gen --seed 1 --reds 10 --blues 10");
  std::string cmd = std::string("RBINDEX_SEED=1 ") + RBX_CLI_PATH +
                    " gen --seed 999 --reds 10 --blues 10 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
  pclose(p);
  CHECK(out == a.out);
}

TEST_CASE("report lists crossings, structured output is json") {
  auto path = write_temp("one2.txt", kOneByOne);
  auto res = run("report " + path);
  CHECK(res.exit_code == 0);
  CHECK(res.out == "1 1 2 0\n");
  auto sj = run("--format structured report " + path);
  CHECK(sj.out.find("\"crossings\":[{\"red\":1,\"blue\":1,\"x\":\"2\",\"y\":\"0\"}]") !=
        std::string::npos);
}

TEST_CASE("index --dump is deterministic") {
  auto path = write_temp("grid.txt", "R 0 0 9 1\nR 1 10 10 11\nB 2 -5 3 15\nB 4 -5 5 15\n");
  auto a = run("index --dump " + path);
  auto b = run("index --dump " + path);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("rows 2") == 0);
  CHECK(a.out.find("columns") != std::string::npos);
}

TEST_CASE("batched with target-blue finds the requested crossings") {
  auto path = write_temp("grid2.txt", "R 0 0 9 1\nR 1 10 10 11\nB 2 -5 3 15\nB 4 -5 5 15\n");
  auto res = run("batched --target-blue 2 --stats " + path);
  CHECK(res.exit_code == 0);
  // both reds cross blue 2; one line per edge plus stats lines
  CHECK(res.out.find("1 2 ") != std::string::npos);
  CHECK(res.out.find("2 2 ") != std::string::npos);
  CHECK(res.out.find("oracle_calls") != std::string::npos);
}

TEST_CASE("batched with target-x returns the rightmost crossing at most x") {
  auto path = write_temp("three.txt", "R 0 0 9 1\nB 2 -5 3 15\nB 4 -5 5 15\nB 6 -5 7 15\n");
  auto res = run("batched --target-x 6 " + path);
  CHECK(res.exit_code == 0);
  // target 6: the crossing with blue 2 (x around 4.5) is the last one <= 6
  CHECK(res.out.substr(0, 4) == "1 2 ");
}

TEST_CASE("terrain-dist runs both modes") {
  auto rt = write_temp("t.terrain",
                       "domain 0 0 4 4\nv 0 0 0\nv 4 0 0\nv 4 4 0\nv 0 4 0\nv 2 2 3\n"
                       "f 1 2 5\nf 2 3 5\nf 3 4 5\nf 4 1 5\n");
  auto bt = write_temp("t.planes", "domain 0 0 4 4\np 0 0 5\n");
  auto mx = run("terrain-dist --max " + rt + " " + bt);
  CHECK(mx.exit_code == 0);
  CHECK(mx.out == "5 at (0, 0) vertex-facet\n");
  auto mn = run("terrain-dist --min " + rt + " " + bt);
  CHECK(mn.exit_code == 0);
  CHECK(mn.out.substr(0, 1) == "2");  // apex at z=3 against plane 5
}

TEST_CASE("argument errors exit 1") {
  CHECK(run("nonsense").exit_code != 0);
  CHECK(run("count /does/not/exist").exit_code == 1);
  auto rt = write_temp("t2.terrain", "domain 0 0 4 4\n");
  CHECK(run("terrain-dist " + rt + " " + rt).exit_code == 1);
}
