#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "opfrob/cli.hpp"
#include "opfrob/system_file.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = opfrob::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(OPFROB_FIXTURE_DIR) + "/" + name + ".json"; }

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("opfrob_test_" + name + ".json");
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("builtin fixtures and exit codes") {
  for (const char* name : {"example52", "example32_algebra", "centraliser_diag", "centraliser_jordan", "diag_powers"}) {
    INFO(name);
    CHECK(run({"builtin", name}).code == opfrob::kExitPass);
  }
  CHECK(run({"builtin", "example52", "--variant", "constant"}).code == opfrob::kExitPass);
  CHECK(run({"builtin", "example52", "--variant", "analytic"}).code == opfrob::kExitPass);
  for (const char* name : {"not_closed", "nonsymmetric_pair", "noncommuting_hamiltonians"}) {
    INFO(name);
    CHECK(run({"builtin", name}).code == opfrob::kExitFail);
  }
}

TEST_CASE("constant variant shows six vanishing brackets and the family") {
  const auto r = run({"builtin", "example52", "--variant", "constant"});
  CHECK(r.out.find("generate: poisson brackets (6 pairs)  ") != std::string::npos);
  CHECK(r.out.find("F1 = 2*p1*p4+p2^2+p3^2") != std::string::npos);
  CHECK(r.out.find("F4 = p4^2") != std::string::npos);
  CHECK(r.out.find("result: PASS") != std::string::npos);
}

TEST_CASE("subcommands on fixture files") {
  const auto poisson = run({"poisson-check", fixture("example52_analytic")});
  CHECK(poisson.code == opfrob::kExitPass);
  CHECK(poisson.out.find("poisson brackets (6 pairs)") != std::string::npos);
  CHECK(poisson.out.find("max=") != std::string::npos);
  const auto closed = run({"verify-algebra", fixture("not_closed")});
  CHECK(closed.code == opfrob::kExitFail);
  CHECK(closed.out.find("closure") != std::string::npos);
  CHECK(run({"inverse", fixture("example52_analytic")}).code == opfrob::kExitPass);
  CHECK(run({"symcheck", fixture("example52_analytic")}).code == opfrob::kExitPass);
  CHECK(run({"nijenhuis", fixture("example52_analytic")}).code == opfrob::kExitPass);
  CHECK(run({"dualize", fixture("example52_constant")}).code == opfrob::kExitPass);
  CHECK(run({"generate", fixture("example52_constant")}).code == opfrob::kExitPass);
  CHECK(run({"killing", fixture("example52_constant")}).code == opfrob::kExitPass);
  CHECK(run({"flow", fixture("example52_constant")}).code == opfrob::kExitPass);
  CHECK(run({"flow", fixture("nonsymmetric_pair")}).code == opfrob::kExitFail);
}

TEST_CASE("hj with level values on the command line") {
  const auto r = run({"hj", fixture("example52_constant"), "--c", "0,0,0,1", "--c", "0.1,0.2,-0.1,1"});
  CHECK(r.code == opfrob::kExitPass);
  CHECK(r.out.find("F_s(u, dW) = c_s") != std::string::npos);
  CHECK(run({"hj", fixture("example52_constant"), "--c", "1,2"}).code == opfrob::kExitInput);
  CHECK(run({"hj", fixture("example52_constant"), "--c", "1,0,0,u1"}).code == opfrob::kExitInput);
}

TEST_CASE("byte-identical output") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"builtin", "example52"},
           {"builtin", "example52", "--variant", "analytic"},
           {"builtin", "example52", "--variant", "analytic", "--json"},
           {"--seed", "7", "--samples", "20", "builtin", "nonsymmetric_pair"},
       }) {
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.out == b.out);
    auto serial = args;
    serial.insert(serial.begin(), "--serial");
    CHECK(run(serial).out == a.out);
  }
}

TEST_CASE("global flags") {
  const auto r = run({"--seed", "9", "--samples", "7", "--tol", "1e-6", "--guard", "0.01", "builtin", "example32_algebra"});
  CHECK(r.code == opfrob::kExitPass);
  CHECK(r.out.rfind("opfrob builtin example32_algebra  seed=9 samples=7 box=[-1, 1] guard=0.01\n", 0) == 0);
  CHECK(r.out.find("tol=1.000e-06") != std::string::npos);
  CHECK(r.out.find("n=7") != std::string::npos);
  CHECK(run({"--seed", "1", "builtin", "example32_algebra"}).out != run({"builtin", "example32_algebra"}).out);
  const auto timed = run({"--timing", "builtin", "example32_algebra"});
  CHECK(timed.out.find("time: ") != std::string::npos);
  CHECK(run({"builtin", "example32_algebra"}).out.find("time: ") == std::string::npos);
}

TEST_CASE("json report") {
  const auto r = run({"--json", "builtin", "noncommuting_hamiltonians"});
  CHECK(r.code == opfrob::kExitFail);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["result"] == "fail");
  CHECK(j["sampling"]["seed"] == 42);
  CHECK(j["sampling"]["count"] == 50);
  const auto& checks = j["checks"];
  REQUIRE(checks.size() == 2);
  CHECK(checks[1]["status"] == "fail");
  CHECK(checks[1]["worst_point"].size() == 2);
  CHECK(checks[1]["max_residual"].get<double>() > 0.1);
}

TEST_CASE("input errors exit with code 2") {
  CHECK(run({}).code == opfrob::kExitInput);
  CHECK(run({"frobnicate"}).code == opfrob::kExitInput);
  CHECK(run({"verify-algebra", "/nonexistent/file.json"}).code == opfrob::kExitInput);
  CHECK(run({"builtin", "nothing"}).code == opfrob::kExitInput);
  CHECK(run({"--samples", "0", "builtin", "example52"}).code == opfrob::kExitInput);
  CHECK(run({"verify-algebra", write_temp("badjson", "{\"schema\": 1,")}).code == opfrob::kExitInput);
  CHECK(run({"verify-algebra", write_temp("noschema", R"({"dimension": 2})")}).code == opfrob::kExitInput);
  const auto bad_expr = run({"verify-algebra", write_temp("badexpr", R"({"schema": 1, "dimension": 2,
      "fields": {"A": [["u1 + * u2", "0"], ["0", "1"]]}, "basis": ["A", "A"]})")});
  CHECK(bad_expr.code == opfrob::kExitInput);
  CHECK(bad_expr.err.find("offset 5") != std::string::npos);
  CHECK(run({"verify-algebra", write_temp("badname", R"({"schema": 1, "dimension": 1,
      "fields": {"A": [["1"]]}, "basis": ["B"]})")}).code == opfrob::kExitInput);
  CHECK(run({"verify-algebra", write_temp("unknownkey", R"({"schema": 1, "dimension": 1,
      "fields": {"A": [["1"]]}, "basis": ["A"], "bogus": 1})")}).code == opfrob::kExitInput);
  CHECK(run({"dualize", fixture("not_closed")}).code == opfrob::kExitInput);
  CHECK(run({"poisson-check", fixture("not_closed")}).code == opfrob::kExitInput);
  CHECK(run({"verify-algebra", write_temp("unsampleable", R"({"schema": 1, "dimension": 1,
      "fields": {"A": [["1"]]}, "basis": ["A"], "sampling": {"guards": [{"expr": "u1", "min": 5}]}})")})
            .code == opfrob::kExitInput);
}

TEST_CASE("user files with guards and denominators") {
  const auto path = write_temp("dual", R"({"schema": 1, "dimension": 2,
      "fields": {"I": [["1", "0"], ["0", "1"]], "L": [["u1", "0"], ["0", "u2"]]},
      "basis": ["I", "L"], "covector": [1, 0],
      "sampling": {"count": 30, "guards": [{"expr": "u1-u2", "min": 0.05}, {"expr": "u1", "min": 0.05},
                                           {"expr": "u2", "min": 0.05}]}})");
  const auto r = run({"dualize", path});
  CHECK(r.code == opfrob::kExitPass);
  CHECK(r.out.find("samples=30") != std::string::npos);
  const auto ham = write_temp("ham", R"({"schema": 1, "dimension": 2,
      "hamiltonians": ["p1^2/u1 + p2^2", [["1", "0"], ["0", "u2^2"]]]})");
  const auto h = run({"poisson-check", ham});
  CHECK(h.code == opfrob::kExitFail);
  CHECK(h.err.empty());
}

TEST_CASE("dump prints a loadable fixture") {
  for (const auto& name : opfrob::builtin_names()) {
    const auto r = run({"builtin", name, "--dump"});
    CHECK(r.code == opfrob::kExitPass);
    CHECK_NOTHROW(opfrob::SystemFile::from_text(r.out));
  }
  CHECK(opfrob::builtin_names().size() == 9);
}

TEST_CASE("help") {
  const auto r = run({"--help"});
  CHECK(r.code == opfrob::kExitPass);
  CHECK(r.out.find("poisson-check") != std::string::npos);
}
