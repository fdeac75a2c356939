#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hypjac/cli.hpp"
#include "json.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = hypjac::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const Result& r) { return nlohmann::json::parse(r.out); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hypjac_cli_test_" + name);
}

}  // namespace

TEST_CASE("eval") {
  const Result r = run({"eval", "-a", "1", "-b", "0", "-c", "1", "--z", "4,0"});
  REQUIRE(r.code == 0);
  const auto doc = parse(r);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["value"]["re"].get<double>() == doctest::Approx(-0.4102392266).epsilon(1e-10));
  CHECK(doc["methods_agree"] == true);
  CHECK(r.out.find("-0.41023922662683") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("spectrum of the linear case") {
  const Result r = run({"spectrum", "-a", "-1", "-b", "-1.5", "-c", "1"});
  REQUIRE(r.code == 0);
  const auto doc = parse(r);
  REQUIRE(doc["eigenvalues"].size() == 1);
  CHECK(doc["eigenvalues"][0]["re"] == 3.0);
  CHECK(doc["eigenvalues"][0]["im"] == 0.0);
  CHECK(doc["distance_sum"] == 1.0);
  CHECK(doc["holds"] == true);
  CHECK(doc["params"]["a"]["re"] == -1.0);
  CHECK(r.out.rfind("{\n  \"schema_version\": 1,", 0) == 0);
}

TEST_CASE("classify") {
  const Result r = run({"classify", "-a", "-1.5", "-b", "0", "-c", "1", "--trials", "20"});
  REQUIRE(r.code == 0);
  const auto doc = parse(r);
  CHECK(doc["N"] == 1);
  CHECK(doc["kappa"] == 1);
  CHECK(doc["epsilons"][0] == -1);
  CHECK(doc["epsilons"][1] == 1);
  CHECK(doc["epsilons"][2] == 1);
  CHECK(doc["certificate"]["kappa_bound_ok"] == true);
  CHECK(doc["certificate"]["trials"] == 20);
}

TEST_CASE("coeffs, zeros, measure, check") {
  const Result c = run({"coeffs", "-a", "1", "-b", "0", "-c", "1", "--N", "8", "--format", "csv"});
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("n,a_re,a_im,bsq_re,bsq_im,b_re,b_im,j,c_re,c_im,d_re,d_im\n0,1.3333333333333335,0,0.88888888888888884,0,", 0) == 0);

  const Result z = run({"zeros", "-a", "-2", "-b", "0", "-c", "1"});
  REQUIRE(z.code == 0);
  const auto zd = parse(z);
  CHECK(zd["zeros_shifted"].size() == 2);
  CHECK(zd["zeros_function"].is_null());

  const Result m = run({"measure", "-a", "1", "-b", "0", "-c", "1", "--N", "16"});
  REQUIRE(m.code == 0);
  CHECK(parse(m)["nodes"].size() == 16);

  const Result k = run({"check", "-a", "0.3", "-b", "0.2", "-c", "1.7", "--N", "64"});
  CHECK(k.code == 0);
  CHECK(parse(k)["all_passed"] == true);
}

TEST_CASE("complex parameters and negative values") {
  const Result r = run({"eval", "-a", "1.2,0.5", "-b", "-0.7,1", "-c", "2.1,-0.3", "--z", "-3,0.5"});
  REQUIRE(r.code == 0);
  const auto doc = parse(r);
  CHECK(doc["value"]["re"].get<double>() == doctest::Approx(0.1951227207068488).epsilon(1e-12));
  CHECK(doc["value"]["im"].get<double>() == doctest::Approx(0.063649591315728342).epsilon(1e-12));
}

TEST_CASE("validation failures exit 2") {
  CHECK(run({"spectrum", "-a", "1", "-b", "1", "-c", "0"}).code == 2);
  CHECK(run({"spectrum", "-a", "1", "-b", "1", "-c", "-3"}).code == 2);
  CHECK(run({"eval", "-a", "1", "-b", "0", "-c", "1", "--z", "0.5,0"}).code == 2);
  CHECK(run({"eval", "-a", "1", "-b", "0", "-c", "1"}).code == 2);
  CHECK(run({"spectrum", "-a", "1", "-b", "0", "-c", "1", "--tol", "1"}).code == 2);
  CHECK(run({"spectrum", "-a", "1", "-b", "0", "-c", "1", "--N", "4"}).code == 2);
  CHECK(run({"spectrum", "-a", "x", "-b", "0", "-c", "1"}).code == 2);
  CHECK(run({"spectrum", "-b", "0", "-c", "1"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"classify", "-a", "1,1", "-b", "0", "-c", "1"}).code == 2);
  CHECK(run({"measure", "-a", "-1.5", "-b", "0", "-c", "1"}).code == 2);

  const Result bad = run({"spectrum", "-a", "1", "-b", "1", "-c", "0"});
  CHECK(bad.err.find("CNonpositiveInteger") != std::string::npos);
  CHECK(parse(bad)["error"]["kind"] == "CNonpositiveInteger");
}

TEST_CASE("numerical failures exit 3") {
  const Result r = run({"eval", "-a", "-1", "-b", "-1.5", "-c", "1", "--z", "3,0"});
  CHECK(r.code == 3);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("help lists csv columns") {
  const Result r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("kind,re,im,distance") != std::string::npos);
  CHECK(r.out.find("sweep") != std::string::npos);
}

TEST_CASE("output file") {
  const auto path = temp_file("out.json");
  std::filesystem::remove(path);
  const Result r = run({"spectrum", "-a", "-2", "-b", "0", "-c", "1", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(nlohmann::json::parse(buf.str())["eigenvalues"].size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("sweep keeps input order") {
  const auto path = temp_file("manifest.txt");
  {
    std::ofstream m(path);
    m << "# a b c\n1 0 1\n\n-1.5 0 1\n1 1 0\n1.2,0.5 -0.7,1 2.1,-0.3\n-1 -1.5 1\n";
  }
  const Result r = run({"sweep", "--manifest", path.string(), "--N", "64"});
  REQUIRE(r.code == 0);
  const auto doc = parse(r);
  const auto& rec = doc["records"];
  REQUIRE(rec.size() == 5);
  CHECK(rec[0]["line"] == 2);
  CHECK(rec[0]["eigen_count"] == 0);
  CHECK(rec[1]["line"] == 4);
  CHECK(rec[1]["kappa"] == 1);
  CHECK(rec[2]["status"] == "CNonpositiveInteger");
  CHECK(rec[3]["kappa"].is_null());
  CHECK(rec[4]["eigen_count"] == 1);

  const Result csv = run({"sweep", "--manifest", path.string(), "--N", "64", "--format", "csv"});
  CHECK(csv.out.rfind("line,a_re,a_im,b_re,b_im,c_re,c_im,status,", 0) == 0);
  CHECK(run({"sweep", "--manifest", path.string(), "--N", "64"}).out == r.out);

  {
    std::ofstream m(path);
    m << "1 0\n";
  }
  CHECK(run({"sweep", "--manifest", path.string()}).code == 2);
  std::filesystem::remove(path);
  CHECK(run({"sweep", "--manifest", path.string()}).code == 2);
}

TEST_CASE("repeated runs are byte identical") {
  const std::vector<std::string> args{"classify", "-a", "-1.5", "-b", "0", "-c", "1", "--trials", "30", "--seed", "7"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("json writer") {
  nlohmann::ordered_json doc;
  doc["x"] = 0.1;
  doc["inf"] = std::numeric_limits<double>::infinity();
  doc["list"] = nlohmann::ordered_json::array();
  CHECK(hypjac::cli::dump_json(doc) == "{\n  \"x\": 0.10000000000000001,\n  \"inf\": null,\n  \"list\": []\n}\n");
  CHECK(hypjac::cli::format_number(0.1) == "0.10000000000000001");
  CHECK(hypjac::cli::format_number(std::nan("")).empty());
}
