#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "ccp/cli.hpp"
#include "ccp/numerics.hpp"

using namespace ccp;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("ccp_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("pdf table for uniform 3 in csv") {
  const auto r = run_cli({"pdf", "--uniform", "3", "--c", "3", "--kmax", "6", "--backend", "exact",
                          "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find('\r') == std::string::npos);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0] == std::vector<std::string>{"k", "pdf"});
  CHECK(rows[4][0] == "3");
  CHECK(parse_double(rows[4][1]) == to_double(Rational(2, 9)));
  CHECK(rows[1][1] == "0");
}

TEST_CASE("csv and json carry the same numbers") {
  const auto path = temp_file("p1234.json", R"({"probabilities": ["1/10","2/10","3/10","4/10"]})");
  for (const char* cmd : {"pdf", "cdf", "ccdf"}) {
    const auto csv = run_cli({cmd, "--popularity", path, "--c", "3", "--kmax", "12"});
    const auto js = run_cli({cmd, "--popularity", path, "--c", "3", "--kmax", "12", "--format", "json"});
    REQUIRE(csv.code == 0);
    REQUIRE(js.code == 0);
    const auto rows = csv_rows(csv.out);
    const auto doc = json::parse(js.out);
    CHECK(doc["backend"] == "exact");
    REQUIRE(doc["rows"].size() + 1 == rows.size());
    for (std::size_t i = 0; i < doc["rows"].size(); ++i) {
      const auto& row = doc["rows"][i];
      const std::string exact = row[cmd].get<std::string>();
      CHECK(parse_double(rows[i + 1][1]) == to_double(parse_rational(exact)));
      CHECK(row[std::string(cmd) + "_decimal"].get<double>() == parse_double(rows[i + 1][1]));
    }
  }
}

TEST_CASE("json keeps exact fractions") {
  const auto r = run_cli({"pdf", "--uniform", "3", "--c", "3", "--k", "3", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc["rows"][0]["pdf"] == "2/9");
}

TEST_CASE("popularity loading") {
  auto load = [](const std::string& text, cli::BackendChoice b = cli::BackendChoice::Auto) {
    return cli::load_popularity_json(text, b, false);
  };
  const auto u = load(R"({"uniform": 4})");
  REQUIRE(std::holds_alternative<Popularity<Rational>>(u));
  CHECK(std::get<Popularity<Rational>>(u).is_uniform());
  const auto r = load(R"({"probabilities": ["1/10","2/10","3/10","4/10"]})");
  REQUIRE(std::holds_alternative<Popularity<Rational>>(r));
  CHECK(std::get<Popularity<Rational>>(r).p(4) == Rational(2, 5));
  const auto f = load(R"({"probabilities": [0.1, 0.2, 0.3, 0.4]})");
  CHECK(std::holds_alternative<Popularity<double>>(f));
  const auto forced = load(R"({"probabilities": [0.1, "0.2", 0.3, 0.4]})", cli::BackendChoice::Exact);
  REQUIRE(std::holds_alternative<Popularity<Rational>>(forced));
  CHECK(std::get<Popularity<Rational>>(forced).p(1) == Rational(1, 10));
  try {
    load(R"({"probabilities": [0.5, 0.6]})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNormalized);
  }
  CHECK_THROWS_AS(load("{not json"), Error);
  CHECK_THROWS_AS(load(R"({"uniform": 3, "probabilities": []})"), Error);
  CHECK_THROWS_AS(load(R"({"probabilities": ["x"]})"), Error);
}

TEST_CASE("validation errors exit 1") {
  const auto bad = temp_file("bad.json", R"({"probabilities": [0.5, 0.6]})");
  auto r = run_cli({"cdf", "--popularity", bad, "--c", "2"});
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK(r.err.find("NotNormalized") != std::string::npos);

  r = run_cli({"cdf", "--popularity", bad, "--c", "2", "--format", "json"});
  CHECK(r.code == 1);
  CHECK(json::parse(r.err)["error"]["code"] == "NotNormalized");

  CHECK(run_cli({"pdf", "--uniform", "3", "--c", "5"}).code == 1);
  CHECK(run_cli({"pdf", "--c", "2"}).code == 1);
  CHECK(run_cli({"pdf", "--uniform", "3"}).code == 1);
  CHECK(run_cli({"pdf", "--uniform", "3", "--c", "2", "--backend", "fuzzy"}).code == 1);
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"--help"}).code == 0);
  std::string distinct = R"({"probabilities": [)";
  for (int i = 1; i <= 20; ++i) distinct += (i > 1 ? ",\"" : "\"") + std::to_string(i) + "/210\"";
  const auto many = temp_file("distinct.json", distinct + "]}");
  r = run_cli({"powersum", "--popularity", many, "--j", "10", "--exponent", "12", "--guard", "1000"});
  CHECK(r.code == 1);
  CHECK(r.err.find("EnumerationTooLarge") != std::string::npos);
}

TEST_CASE("alpha, eta and powersum commands") {
  auto r = run_cli({"alpha", "--uniform", "6", "--exponent", "3", "--format", "json"});
  REQUIRE(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["method"] == "uniform");
  CHECK(doc["rows"][1]["alpha"] == "17/36");
  CHECK(doc["rows"][2]["alpha"] == "1");

  r = run_cli({"alpha", "--uniform", "6", "--exponent", "3", "--u", "2"});
  CHECK(csv_rows(r.out).size() == 2);

  r = run_cli({"eta", "--uniform", "8", "--exponent", "3", "--j", "6", "--format", "json"});
  REQUIRE(r.code == 0);
  doc = json::parse(r.out);
  CHECK(doc["rows"][0]["eta"] == 126);
  CHECK(doc["rows"][1]["eta"] == -45);
  CHECK(doc["rows"][2]["eta"] == 10);

  const auto path = temp_file("p1234b.json", R"({"probabilities": ["1/10","2/10","3/10","4/10"]})");
  r = run_cli({"powersum", "--popularity", path, "--j", "2", "--exponent", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["rows"][0]["power_sum"] == "8/5");
  r = run_cli({"powersum", "--popularity", path, "--j", "2", "--k", "2", "--element", "1",
               "--format", "json"});
  CHECK(json::parse(r.out)["rows"][0]["power_sum"] == "1/2");

  r = run_cli({"expectation", "--uniform", "3", "--c", "3", "--format", "json"});
  CHECK(json::parse(r.out)["rows"][0]["expectation"] == "11/2");
}

TEST_CASE("compare reports both paths and the subset ratio") {
  auto r = run_cli({"compare", "--uniform", "12", "--j", "8", "--k", "3"});
  REQUIRE(r.code == 0);
  auto row = json::parse(r.out)["rows"][0];
  CHECK(row["status"] == "computed");
  CHECK(row["agree"] == "true");
  CHECK(row["brute"] == row["fast"]);
  CHECK(row["brute_subsets"] == 495);
  CHECK(row["fast_subsets"] == 12 + 66 + 220);

  r = run_cli({"compare", "--uniform", "100", "--j", "50", "--k", "5", "--backend", "float"});
  REQUIRE(r.code == 0);
  row = json::parse(r.out)["rows"][0];
  CHECK(row["status"] == "infeasible, ratio only");
  CHECK(row["brute"].is_null());
  CHECK(row["subset_ratio_decimal"].get<double>() == doctest::Approx(1.27106e21).epsilon(5e-6));

  r = run_cli({"compare", "--uniform", "100", "--j", "50", "--k", "5", "--backend", "float",
               "--format", "csv"});
  CHECK(r.out.find("\"infeasible, ratio only\"") != std::string::npos);
  CHECK(run_cli({"compare", "--uniform", "6", "--j", "3", "--k", "3"}).code == 1);
}

TEST_CASE("simulate records seed and generator") {
  const std::vector<std::string> args{"simulate", "--uniform", "3", "--c", "3", "--samples",
                                      "20000", "--seed", "11", "--format", "json"};
  const auto a = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == run_cli(args).out);
  const auto doc = json::parse(a.out);
  CHECK(doc["generator"] == "mt19937_64");
  CHECK(doc["seed"] == 11);
  CHECK(doc["truncated"] == 0);
  CHECK(doc["rows"][0]["k"] == 3);
  CHECK(doc["mean"].get<double>() == doctest::Approx(5.5).epsilon(0.05));
  CHECK(run_cli({"simulate", "--uniform", "3", "--c", "3", "--backend", "exact"}).code == 1);
}

TEST_CASE("verify passes on a small grid and is deterministic") {
  const std::vector<std::string> args{"verify", "--n-max", "5", "--trials", "4", "--seed", "7",
                                      "--format", "json"};
  const auto r = run_cli(args);
  REQUIRE(r.code == 0);
  CHECK(r.out == run_cli(args).out);
  const auto doc = json::parse(r.out);
  CHECK(doc["passed"] == true);
  CHECK(doc["failures"].empty());
  CHECK(doc["rows"].size() == 15);
  for (const auto& row : doc["rows"]) {
    CHECK(row["status"] == "pass");
    CHECK(row["checks"].get<int>() > 0);
  }
}
