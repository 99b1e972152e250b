#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

using padtors::Json;

namespace {

struct Run {
  int code = 0;
  Json json;
  std::string text;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = padtors::cli::run(args, out, err);
  r.text = out.str();
  r.json = Json::parse(r.text);
  return r;
}

}  // namespace

TEST_CASE("tate subcommand") {
  const auto r = run({"tate", "--prec", "20", "--series-order", "16", "--terms", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.json["a4_exact"] == Json::array({"-1/48", "-5", "-45"}));
  CHECK(r.json["a6_exact"][0] == "1/864");
  CHECK(r.json["a6_exact"][1] == "-7/12");
  // 744 = 4 + 3*5 + 4*25 + 0*125 + 1*625
  CHECK(r.json["qj"][1]["digits"][0] == 4);
  CHECK(padtors::padic_from_json(r.json["qj"][1]).agrees_with(padtors::PadicNumber::from_integer(744, 5, 20), 20));
}

TEST_CASE("counterexample subcommand") {
  const auto r = run({"counterexample", "--prec", "40", "--series-order", "32", "--n-min", "4", "--n-max", "10"});
  REQUIRE(r.code == 0);
  const auto& rep = r.json["report"];
  CHECK(rep["records"].size() == 7);
  CHECK(rep["valuations"] == Json::array({3, 4, 5, 6, 7, 8, 9}));
  CHECK(rep["strictly_increasing"] == true);
  CHECK_FALSE(rep["records"][0].contains("newton_trace"));

  const auto traced = run({"counterexample", "--prec", "30", "--series-order", "24", "--n-min", "5", "--n-max", "5", "--trace"});
  REQUIRE(traced.code == 0);
  CHECK(traced.json["report"]["records"][0]["newton_trace"].is_array());
}

TEST_CASE("usage errors") {
  const auto bad_range = run({"counterexample", "--n-min", "5", "--n-max", "4"});
  CHECK(bad_range.code == 1);
  CHECK(bad_range.json["error"]["exit_code"] == 1);
  for (const char* p : {"2", "3", "4"}) {
    const auto r = run({"tate", "--p", p});
    CHECK(r.code == 1);
    CHECK(r.json.contains("error"));
  }
  CHECK(run({"tate", "--unknown"}).code == 1);
  CHECK(run({}).code == 1);
}

TEST_CASE("precision exhaustion exits 3") {
  const auto r = run({"counterexample", "--prec", "12", "--series-order", "16", "--n-min", "4", "--n-max", "4"});
  CHECK(r.code == 3);
  CHECK(r.json["error"]["kind"] == "precision");
}

TEST_CASE("torsion-scan and separation") {
  const auto scan = run({"torsion-scan", "--prec", "30", "--a4", "-1", "--a6", "0", "--max-order", "4"});
  REQUIRE(scan.code == 0);
  CHECK(scan.json["scan"]["points"].size() == 5);
  const auto empty = run({"torsion-scan", "--prec", "30", "--a4", "-1", "--a6", "0", "--max-order", "1"});
  CHECK(empty.json["scan"]["points"].empty());
  const auto singular = run({"torsion-scan", "--a4", "0", "--a6", "0"});
  CHECK(singular.code == 1);
  CHECK(singular.json["error"]["message"].get<std::string>().find("singular") != std::string::npos);

  const auto sep = run({"separation", "--prec", "30", "--a4", "-1", "--a6", "0", "--max-order", "4"});
  REQUIRE(sep.code == 0);
  CHECK(sep.json["separation"]["separated"] == true);
  CHECK(sep.json["separation"]["stable"] == true);
  CHECK(sep.json["separation"]["min_separation_val"] == 0);
  const auto vacuous = run({"separation", "--prec", "30", "--a4", "-1", "--a6", "0", "--max-order", "1"});
  CHECK(vacuous.json["separation"]["min_separation_val"].is_null());
}

TEST_CASE("ell-log subcommand") {
  // 2 (3, 5) on y^2 = x^3 - 2.
  const auto r = run({"ell-log", "--prec", "20", "--a4", "0", "--a6", "-2", "--x", "129/100", "--y", "383/1000"});
  REQUIRE(r.code == 0);
  CHECK(r.json["doubling_check"]["passed"] == true);
  CHECK(r.json["log"]["val"] == 1);
  const auto inf = run({"ell-log", "--a4", "0", "--a6", "-2", "--x", "inf"});
  CHECK(inf.json["log"]["val"].is_null());
  CHECK(run({"ell-log", "--a4", "0", "--a6", "-2", "--x", "3", "--y", "5"}).code == 1);
  CHECK(run({"ell-log", "--a4", "0", "--a6", "-2", "--x", "3", "--y", "4"}).code == 1);
}

TEST_CASE("determinism, output file and PADTORS_PREC") {
  const std::vector<std::string> args{"separation", "--prec", "20", "--a4", "-1", "--a6", "0", "--max-order", "6"};
  CHECK(run(args).text == run(args).text);

  const auto path = std::filesystem::temp_directory_path() / "padtors_cli_test.json";
  std::ostringstream out, err;
  CHECK(padtors::cli::run({"tate", "--prec", "10", "-o", path.string()}, out, err) == 0);
  std::ifstream f(path);
  CHECK(Json::parse(f)["prec"] == 10);
  std::filesystem::remove(path);

  setenv("PADTORS_PREC", "17", 1);
  CHECK(run({"tate", "--terms", "1"}).json["prec"] == 17);
  CHECK(run({"tate", "--terms", "1", "--prec", "9"}).json["prec"] == 9);
  unsetenv("PADTORS_PREC");
}
