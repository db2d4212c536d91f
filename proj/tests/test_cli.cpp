#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Sandbox {
  fs::path dir;

  Sandbox() {
    dir = fs::temp_directory_path() / "atlascli-test";
    fs::create_directories(dir);
  }

  fs::path write(const std::string& name, const std::string& content) const {
    const fs::path p = dir / name;
    std::ofstream(p) << content;
    return p;
  }
};

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const Sandbox& sb, const std::string& args) {
  const fs::path out_file = sb.dir / "out.txt";
  const std::string cmd =
      std::string(ATLASCLI_PATH) + " " + args + " > " + out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ostringstream text;
  text << std::ifstream(out_file).rdbuf();
  r.out = text.str();
  return r;
}

}  // namespace

TEST_CASE("cli end to end") {
  Sandbox sb;
  const auto u24 = sb.write("u24.json",
      R"({"n":4,"kind":"bases","sets":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]})");
  const auto nonmatroid = sb.write("nonmatroid.json",
      R"({"n":4,"kind":"independent","sets":[[],[0],[1],[2],[3],[0,1],[2,3]]})");
  const auto u23poly = sb.write("u23.json",
      R"({"n":3,"degree":2,"terms":[{"coeff":"1","exp":[1,1,0]},
          {"coeff":"1","exp":[1,0,1]},{"coeff":"1","exp":[0,1,1]}]})");
  const auto badpoly = sb.write("bad.json",
      R"({"n":2,"degree":2,"terms":[{"coeff":"1","exp":[2,0]},{"coeff":"1","exp":[0,2]}]})");
  const auto rects = sb.write("rects.json",
      R"({"dim":2,"normals":[[1,0],[-1,0],[0,1],[0,-1]],
          "bodies":[{"name":"A","offsets":[1,0,2,0]},{"name":"B","offsets":[3,0,1,0]}]})");
  const auto brick_l = sb.write("l.json", R"({"bricks":[[0,2,0,1],[0,1,1,2]]})");
  const auto brick_u = sb.write("u.json", R"({"bricks":[[0,1,0,1]]})");
  const auto sink_atlas = sb.write("atlas.json",
      R"({"dimension":2,"vertices":[
          {"id":"v","matrix":[["0","1"],["1","0"]],"h":["1","1"],"edges":[]}]})");
  const auto broken = sb.write("broken.json", R"({"n":)");

  SUBCASE("mason equality case") {
    const RunResult r = run(sb, "mason " + u24.string() + " --k 1 --strong");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("slack_direct = \"0\"") != std::string::npos);
    CHECK(r.out.find("verdict = true") != std::string::npos);
  }

  SUBCASE("mason atlas route") {
    const RunResult r = run(sb, "mason " + u24.string() + " --k 1 --atlas-route");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("atlas") != std::string::npos);
  }

  SUBCASE("recognize reports a witness and exits 1") {
    const RunResult r = run(sb, "recognize " + nonmatroid.string());
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("exchange_witness") != std::string::npos);
    CHECK(r.out.find("eigenvalue_witness") != std::string::npos);
  }

  SUBCASE("recognize accepts a matroid") {
    CHECK(run(sb, "recognize " + u24.string()).exit_code == 0);
  }

  SUBCASE("lorentzian verdicts") {
    CHECK(run(sb, "lorentzian " + u23poly.string()).exit_code == 0);
    const RunResult r = run(sb, "lorentzian " + badpoly.string() + " --witness");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("support_witness") != std::string::npos);
  }

  SUBCASE("hessian at a positive point") {
    CHECK(run(sb, "hessian " + u23poly.string() + " --at 1,1,1").exit_code == 0);
    CHECK(run(sb, "hessian " + u23poly.string() + " --at 1,1").exit_code == 2);
    // Non-Lorentzian input is a domain error, not a false verdict.
    CHECK(run(sb, "hessian " + badpoly.string() + " --at 1,1").exit_code == 2);
  }

  SUBCASE("mixvol closed form") {
    const RunResult r = run(sb, "mixvol " + rects.string() + " --select A,B");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("value = 3.5") != std::string::npos);
    CHECK(run(sb, "mixvol " + rects.string() + " --select A").exit_code == 2);
    CHECK(run(sb, "mixvol " + rects.string() + " --select A,C").exit_code == 2);
  }

  SUBCASE("af inequality") {
    const RunResult r = run(sb, "af " + rects.string() + " --A A --B B");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("v_ab = 3.5") != std::string::npos);
    CHECK(r.out.find("slack = 6.25") != std::string::npos);
  }

  SUBCASE("bm with trace") {
    const RunResult r = run(sb, "bm " + brick_l.string() + " " + brick_u.string() + " --trace");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("slack") != std::string::npos);
    CHECK(r.out.find("trace.max_depth = 1") != std::string::npos);
  }

  SUBCASE("atlas verify") {
    CHECK(run(sb, "atlas verify " + sink_atlas.string()).exit_code == 0);
    const RunResult r = run(sb, "atlas verify " + sink_atlas.string() + " --all");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("vertex_reports[0].ope = true") != std::string::npos);
    CHECK(run(sb, "atlas verify " + sink_atlas.string() + " --vertex nope").exit_code == 2);
  }

  SUBCASE("input errors exit 2 with annotated message") {
    const RunResult r = run(sb, "mason " + broken.string() + " --k 1");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("error:") != std::string::npos);
    CHECK(r.out.find("line") != std::string::npos);
    CHECK(run(sb, "mason " + sb.dir.string() + "/missing.json --k 1").exit_code == 2);
    CHECK(run(sb, "mason " + u24.string() + " --k 5").exit_code == 2);
    CHECK(run(sb, "frobnicate " + u24.string()).exit_code == 2);
  }

  SUBCASE("json reports are byte-identical across runs") {
    const std::string args = "mason " + u24.string() + " --k 1 --strong --format json";
    const RunResult r1 = run(sb, args);
    const RunResult r2 = run(sb, args);
    CHECK(r1.exit_code == 0);
    CHECK(r1.out == r2.out);
    CHECK(r1.out.find("\"command\": \"mason\"") != std::string::npos);
  }
}
