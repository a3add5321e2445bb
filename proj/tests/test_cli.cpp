#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "qqm/verdict.hpp"

using qqm::Json;

namespace {

struct Run {
  int status = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + QQM_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data(const std::string& rel) { return std::string(QQM_DATA_DIR) + "/" + rel; }

double num(const Json& j) { return std::stod(j.get<std::string>()); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("distance asymmetry") {
    auto a = run("distance --type 'Real -> Real' --left sin --right id --at pi --radius 2pi");
    REQUIRE(a.status == 0);
    auto j = a.json();
    CHECK(j["schema"] == "qqm-report/1");
    CHECK(j["command"] == "distance");
    CHECK(num(j["result"]["value"]) == doctest::Approx(3 * std::numbers::pi).epsilon(1e-9));
    auto b = run("distance --type 'Real -> Real' --left id --right sin --at pi --radius 2pi").json();
    CHECK(num(b["result"]["value"]) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-9));
  }

  TEST_CASE("workbench refutation exits with 1") {
    auto r = run("workbench --axioms ST1,ST3 --space " + data("spaces/ex49.json"));
    CHECK(r.status == 1);
    auto j = r.json();
    CHECK(j["verdict"]["verdict"] == "Refuted");
    CHECK(j["result"]["axioms"]["ST1"]["witness"]["phi_xz"] == "3");
    CHECK(run("workbench --axioms QuasiReflexive,Transitive --space " + data("spaces/ex49.json")).status == 0);
  }

  TEST_CASE("eval, derive and typecheck") {
    auto e = run("eval --term 'f (f x)' --context 'f: Real -> Real, x: Real' --point 'f=sin,x=pi/2'");
    REQUIRE(e.status == 0);
    CHECK(num(e.json()["result"]["value"]) == doctest::Approx(std::sin(1.0)));
    auto d = run("derive --term 'sin(x)' --context 'x: Real' --point x=0 --radius x=0.1");
    REQUIRE(d.status == 0);
    CHECK(num(d.json()["result"]["bound"]) == doctest::Approx(std::sin(0.1)));
    auto t = run("typecheck --term corpus:eval-at-1");
    REQUIRE(t.status == 0);
    CHECK(t.json()["result"]["type"] == "(Real -> Real) -> Real");
  }

  TEST_CASE("prove") {
    CHECK(run("prove " + data("derivations/trans.json")).status == 0);
    auto b = run("prove " + data("derivations/broken-weaken.json"));
    CHECK(b.status == 1);
    CHECK(b.json()["verdict"]["verdict"] == "Refuted");
    auto refl = run("prove --emit-reflexivity 'mul(x, x)' --context 'x: Real'");
    REQUIRE(refl.status == 0);
    CHECK(refl.json()["rule"] == "prim");
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(run("").status == 2);
    CHECK(run("no-such-command").status == 2);
    CHECK(run("eval --term 'sin(' ").status == 2);
    CHECK(run("eval --term 'sin(y)'").status == 2);
    CHECK(run("distance --left sin --right id").status == 2);
    CHECK(run("check-fundamental --tol -1").status == 2);
  }

  TEST_CASE("environment and flags") {
    auto env = run("demo-no-greatest", "QQM_SEED=42").json();
    CHECK(env["config"]["seed"] == 42);
    auto flag = run("demo-no-greatest --seed 7", "QQM_SEED=42").json();
    CHECK(flag["config"]["seed"] == 7);
    CHECK(run("demo-no-greatest", "QQM_SAMPLES=zero").status == 2);
  }

  TEST_CASE("deterministic reports") {
    auto a = run("check-fundamental --term sin --samples 50");
    auto b = run("check-fundamental --term sin --samples 50");
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
  }

  TEST_CASE("demos") {
    auto ng = run("demo-no-greatest");
    REQUIRE(ng.status == 0);
    auto r = ng.json()["result"];
    CHECK(r["JO"] == "0");
    CHECK(r["JZ"] == "1");
    auto sweep = run("demo-bound-sweep");
    CHECK(sweep.status == 0);
  }
}
