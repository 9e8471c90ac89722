#include <catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include <sstream>

#include "cli.hpp"

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "amap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = amap::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("count reports exact totals", "[cli]") {
  const auto r = invoke({"count", "--set", "mult:2", "--n", "4", "--output", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "count");
  CHECK(j["total"] == "57");
  CHECK(j["per_k"]["2"] == "48");
  CHECK(j["per_k"]["4"] == "9");
  CHECK(j["params"]["set"] == "mult:2");

  const auto csv = invoke({"count", "--set", "all", "--n", "5"});
  CHECK(csv.status == 0);
  CHECK(csv.out.find("# total=3125") != std::string::npos);
  CHECK(csv.out.rfind("k,count\n", 0) == 0);
}

TEST_CASE("float count mode", "[cli]") {
  const auto r = invoke({"count", "--set", "all", "--n", "1000", "--mode", "float", "--output", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"][0]["scaled_sum"].get<double>() == Catch::Approx(1000.0).epsilon(1e-12));
}

TEST_CASE("cdf is exact at lattice points", "[cli]") {
  const auto r = invoke({"cdf", "--set", "mult:2", "--n", "4", "--z", "1,1/2", "--output", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"][0]["cdf"] == "16/19");
  CHECK(j["rows"][0]["m"] == 2);
  CHECK(j["rows"][1]["cdf"] == "0");
}

TEST_CASE("verify passes against enumeration", "[cli]") {
  const auto r = invoke({"verify", "--set", "f1:2+1", "--max-n", "5"});
  CHECK(r.status == 0);
  CHECK(r.out.find("# check mapping_census pass") != std::string::npos);
  CHECK(r.out.find("# check permutation_census pass") != std::string::npos);
}

TEST_CASE("exit statuses", "[cli]") {
  CHECK(invoke({"count", "--set", "mult:1", "--n", "4"}).status == 2);
  CHECK(invoke({"count", "--set", "bogus", "--n", "4"}).status == 2);
  CHECK(invoke({"count", "--n", "4"}).status == 2);
  CHECK(invoke({"frobnicate"}).status == 2);
  CHECK(invoke({"count", "--set", "all", "--n", "4", "--output", "xml"}).status == 2);
  CHECK(invoke({"verify", "--set", "all", "--max-n", "9"}).status == 2);

  const auto empty = invoke({"cdf", "--set", "finite:3", "--n", "2", "--z", "1"});
  CHECK(empty.status == 1);
  CHECK(empty.err.find("code=empty_mapping_set") != std::string::npos);

  const auto window = invoke({"diag", "--n", "3"});
  CHECK(window.status == 1);
  CHECK(window.err.find("window_empty") != std::string::npos);

  // a shrinking n-grid makes the error-decreasing check fail
  const auto trend = invoke({"asym", "--set", "mult:2", "--n-grid", "1000,100"});
  CHECK(trend.status == 3);
  CHECK(trend.out.find("# check error_decreasing FAIL") != std::string::npos);

  CHECK(invoke({"--help"}).status == 0);
}

TEST_CASE("usage errors name the parameter", "[cli]") {
  const auto r = invoke({"sample", "--set", "all", "--n", "5", "--samples", "10"});
  CHECK(r.status == 2);
  CHECK(r.err.find("parameter=--samples") != std::string::npos);
}

TEST_CASE("reruns are byte-identical", "[cli]") {
  const std::vector<std::string> args = {"sample", "--set", "mult:2", "--n", "30", "--samples",
                                         "5000", "--seed", "4", "--output", "json"};
  const auto a = invoke(args);
  REQUIRE(a.status == 0);
  CHECK(invoke(args).out == a.out);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  CHECK(invoke(threaded).out == a.out);
}

TEST_CASE("json reports share one schema", "[cli]") {
  const std::vector<std::vector<std::string>> commands = {
      {"coeffs", "--set", "mult:3", "--K", "9"},
      {"count", "--set", "f2:2,3", "--n", "7"},
      {"cdf", "--set", "all", "--n", "9"},
      {"asym", "--set", "mult:2", "--n-grid", "100,1000"},
      {"fit", "--set", "mult:2", "--K", "400"},
      {"verify", "--set", "finite:1,2", "--max-n", "4"},
      {"sample", "--set", "all", "--n", "10", "--samples", "1000"},
      {"diag", "--mu", "0.5", "--n", "1000"},
  };
  for (auto args : commands) {
    args.insert(args.end(), {"--output", "json"});
    const auto r = invoke(args);
    INFO(args[0] << ": " << r.err);
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == args[0]);
    CHECK(j.contains("params"));
    CHECK(j["rows"].is_array());
    CHECK_FALSE(j["rows"].empty());
    CHECK(j["checks"].is_array());
  }
}

TEST_CASE("fit reports the window and provenance", "[cli]") {
  const auto r = invoke({"fit", "--set", "all", "--K", "2000", "--window", "1000:2000", "--output", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"][0]["provenance"] == "fitted");
  CHECK(j["rows"][0]["alpha"].get<double>() == Catch::Approx(2.0).margin(0.01));
  CHECK(invoke({"fit", "--set", "all", "--K", "2000", "--window", "10:20"}).status == 1);
  CHECK(invoke({"fit", "--set", "all", "--K", "2000", "--window", "oops"}).status == 2);
}
