#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmac/cli.hpp"
#include "test_common.hpp"

using namespace bmac;
using test::near;
using nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Location location_from(const std::string& s) {
  if (s == "Interior") return Location::Interior;
  if (s == "BoundaryAxisUser1") return Location::BoundaryAxisUser1;
  return Location::BoundaryAxisUser2;
}

Method method_from(const std::string& s) {
  if (s == "CaseABoundary") return Method::CaseABoundary;
  if (s == "CaseBBisection") return Method::CaseBBisection;
  if (s == "ClosedForm") return Method::ClosedForm;
  return Method::GeneralScan;
}

} // namespace

TEST_CASE("solve on the worked a=b=0 channel") {
  const auto r = run({"solve", "--channel", "0,0,0.9,0.1", "--weights", "1,2"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.at("location") == "BoundaryAxisUser2");
  REQUIRE(j.at("method") == "ClosedForm");
  REQUIRE(j.at("unit") == "nats");
  REQUIRE(j.at("corner") == "C1");
  REQUIRE(j.at("p1").get<double>() == 0.0);
  REQUIRE(near(j.at("p2").get<double>(), 0.5, 1e-9));
  REQUIRE(near(j.at("value").get<double>(), 0.736128414337, 1e-9));
}

TEST_CASE("solve JSON round-trips byte-identically") {
  const auto r = run({"solve", "--channel", "0,0,0.55,0.02", "--weights", "1,1.3"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  Solution s;
  s.input = InputDist(j.at("p1").get<double>(), j.at("p2").get<double>());
  s.rates = {j.at("rate1").get<double>(), j.at("rate2").get<double>()};
  s.value = j.at("value").get<double>();
  s.location = location_from(j.at("location").get<std::string>());
  s.corner = j.at("corner") == "C1" ? Corner::C1 : Corner::C2;
  s.method = method_from(j.at("method").get<std::string>());
  s.p2_tolerance = j.at("p2_tolerance").get<double>();
  REQUIRE(solution_to_json(s, Unit::Nats) == r.out);
}

TEST_CASE("bit conversion divides rates by ln 2") {
  const auto nats = run({"solve", "--channel", "2/3,1/4,0.001,5/8", "--weights", "1,1"});
  const auto bits =
      run({"solve", "--channel", "2/3,1/4,0.001,5/8", "--weights", "1,1", "--unit", "bits"});
  REQUIRE(nats.code == 0);
  REQUIRE(bits.code == 0);
  const json jn = json::parse(nats.out);
  const json jb = json::parse(bits.out);
  REQUIRE(jn.at("location") == "BoundaryAxisUser1");
  REQUIRE(near(jb.at("value").get<double>(), jn.at("value").get<double>() / ln2, 1e-12));
  REQUIRE(near(jb.at("rate1").get<double>(), jn.at("rate1").get<double>() / ln2, 1e-12));
  REQUIRE(jb.at("p2") == jn.at("p2")); // input probabilities are unitless
}

TEST_CASE("identical configuration gives identical bytes") {
  const std::vector<std::string> args = {"solve", "--channel", "0.62,0.881,0.765,0.236",
                                         "--weights", "0.7,1.4"};
  REQUIRE(run(args).out == run(args).out);
}

TEST_CASE("exit codes") {
  REQUIRE(run({"solve", "--channel", "0.5,0.5,0.5,0.5", "--weights", "1,1"}).code == 2);
  REQUIRE(run({"solve", "--channel", "0.5,0.5,0.5"}).code == 1);
  REQUIRE(run({"solve", "--channel", "x,y,z,w"}).code == 1);
  REQUIRE(run({"solve", "--channel", "1.5,0,0.3,0.2"}).code == 1);
  REQUIRE(run({"solve", "--channel", "0.1,0.2,0.3,0.4", "--weights", "0,1"}).code == 1);
  REQUIRE(run({"nonsense"}).code == 1);
  REQUIRE(run({}).code == 1);
  REQUIRE(run({"--help"}).code == 0);
}

TEST_CASE("kkt subcommand") {
  const auto r = run({"kkt", "--channel", "2/3,1/4,0.001,5/8", "--weights", "1,1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 3);
  int saddles = 0;
  for (const auto& p : j)
    if (p.at("kind") == "Saddle") ++saddles;
  REQUIRE(saddles == 1);

  const auto bad = run({"kkt", "--channel", "1,1,0,0", "--weights", "1,1"});
  REQUIRE(bad.code == 2);
  REQUIRE(bad.err.find("differentiab") != std::string::npos);
}

TEST_CASE("region subcommand emits an ordered CSV") {
  const auto r = run({"region", "--channel", "0.3,0.3,0.3,0.7", "--sweep", "21", "--grid",
                      "512"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "r1,r2,w1,w2,p1,p2");
  std::vector<double> r1s;
  while (std::getline(in, line)) {
    REQUIRE(!line.empty());
    r1s.push_back(std::stod(line.substr(0, line.find(','))));
  }
  REQUIRE(r1s.size() == 2); // isosceles: two-vertex chain
  for (std::size_t i = 0; i + 1 < r1s.size(); ++i) REQUIRE(r1s[i] > r1s[i + 1]);

  const auto rj = run({"region", "--channel", "0.3,0.3,0.3,0.7", "--sweep", "21", "--grid",
                       "512", "--format", "json"});
  REQUIRE(rj.code == 0);
  REQUIRE(json::parse(rj.out).is_array());
}

TEST_CASE("g1 subcommand emits csv") {
  const auto r = run({"g1", "--channel", "0.5,0.5,0.5,0.5", "--grid", "50"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "r1,r2");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  REQUIRE(rows == 1);
}

TEST_CASE("verify rejects a missing fixture file") {
  const auto r = run({"verify", "--fixtures", "/nonexistent/fixtures.json"});
  REQUIRE(r.code == 1);
}

TEST_CASE("output file receives the same bytes as stdout") {
  const std::string path = "/tmp/bmac_cli_test_out.json";
  std::remove(path.c_str());
  const auto direct = run({"solve", "--channel", "0,0,0.9,0.1", "--weights", "1,2"});
  const auto filed =
      run({"solve", "--channel", "0,0,0.9,0.1", "--weights", "1,2", "-o", path});
  REQUIRE(filed.code == 0);
  REQUIRE(filed.out.empty());
  std::ifstream f(path, std::ios::binary);
  std::stringstream buf;
  buf << f.rdbuf();
  REQUIRE(buf.str() == direct.out);
  std::remove(path.c_str());
}

TEST_CASE("rational channel fields parse exactly") {
  REQUIRE(near(parse_number("2/3"), 2.0 / 3.0, 0.0));
  REQUIRE(parse_number("5/8") == 0.625);
  REQUIRE(parse_number("0.001") == 0.001);
  REQUIRE_THROWS_AS(parse_number("1/0"), parse_error);
  REQUIRE_THROWS_AS(parse_number("/3"), parse_error);
  REQUIRE_THROWS_AS(parse_number(""), parse_error);
  REQUIRE_THROWS_AS(parse_channel("0.1,0.2,0.3"), parse_error);
  REQUIRE_THROWS_AS(parse_weights("1,0"), parse_error);
}
