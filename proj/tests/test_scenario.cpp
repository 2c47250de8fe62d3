#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "gsd/report.hpp"
#include "gsd/scenario.hpp"

using namespace gsd;

namespace {

// fixture directory is provided by the build
std::string fixture(const std::string& name) {
  const char* dir = std::getenv("GSD_FIXTURE_DIR");
  REQUIRE(dir != nullptr);
  return std::string(dir) + "/" + name;
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("-3/9") == Rational(-1, 3));
  CHECK_THROWS_AS(parse_rational("1/0"), StructuralError);
  CHECK_THROWS_AS(parse_rational("abc"), StructuralError);
  CHECK_THROWS_AS(parse_rational("1.5"), StructuralError);
}

TEST_CASE("scenario loading: the bundled two-atom market") {
  const auto sc = load_scenario(fixture("binomial.json"));
  CHECK(sc.space.atoms == std::vector<std::string>{"u", "d"});
  CHECK(sc.space.probs[0] == doctest::Approx(0.5));
  REQUIRE(sc.space_exact.has_value());
  CHECK(sc.space_exact->probs[0] == Rational(1, 2));
  CHECK(sc.grid.size() == 2);
  CHECK(sc.filt.partitions[1].size() == 2);
  REQUIRE(sc.processes.count("stock") == 1);
  CHECK(sc.processes.at("stock")(0, 1) == 2.0);

  REQUIRE(sc.sets.count("kkt") == 1);
  const auto& set = sc.sets.at("kkt");
  REQUIRE(set.generators.size() == 2);
  CHECK(set.generators[1][0] == 2.0);  // last slice of the named process

  REQUIRE(sc.market.has_value());
  CHECK(sc.market->names == std::vector<std::string>{"cash", "stock"});
  CHECK(sc.market->strictly_positive == std::vector<int>{0, 1});
}

TEST_CASE("scenario loading: structural failures") {
  CHECK_THROWS_AS(load_scenario(fixture("malformed.json")), StructuralError);
  CHECK_THROWS_AS(load_scenario(fixture("no-such-file.json")), StructuralError);

  // built from text: nested initializer lists of strings would be parsed as
  // json objects rather than arrays of arrays
  const nlohmann::json j = nlohmann::json::parse(R"({
    "space": {"atoms": [{"label": "a", "prob": "1/2"}, {"label": "b", "prob": "1/2"}]},
    "grid": [0.0, 1.0],
    "filtration": [[["a", "b"]], [["a"], ["b"]]]
  })");
  CHECK_NOTHROW(parse_scenario(j));

  auto bad_label = j;
  bad_label["filtration"] = nlohmann::json::parse(R"([[["a", "zzz"]], [["a"], ["zzz"]]])");
  CHECK_THROWS_AS(parse_scenario(bad_label), StructuralError);

  auto bad_process = j;
  bad_process["processes"]["X"] = {{1.0, 1.0}};  // one slice, two grid times
  CHECK_THROWS_AS(parse_scenario(bad_process), StructuralError);

  auto bad_set = j;
  bad_set["sets"]["S"]["generators"] = {"missing"};
  CHECK_THROWS_AS(parse_scenario(bad_set), StructuralError);

  auto bad_market = j;
  bad_market["market"]["generators"] = {"missing"};
  CHECK_THROWS_AS(parse_scenario(bad_market), StructuralError);
}

TEST_CASE("report serialization is deterministic and rounded") {
  CHECK(round_sig(1.0 / 3.0) == doctest::Approx(0.333333333333).epsilon(1e-13));
  CHECK(round_sig(0.0) == 0.0);
  CHECK(round_sig(-2.0) == -2.0);

  nlohmann::json a, b;
  a["x"] = 1.0 / 3.0;
  a["arr"] = {1.0, 2.0000000000001, 3.0};
  b["arr"] = {1.0, 2.0000000000001, 3.0};
  b["x"] = 1.0 / 3.0 + 1e-15;  // differs below 12 significant digits
  CHECK(dump_report(a) == dump_report(b));
  CHECK(dump_report(a).find("0.333333333333") != std::string::npos);

  nlohmann::json flat;
  flat["name"] = "value";
  flat["pi"] = 3.14159;
  const std::string table = dump_table(flat);
  CHECK(table.find("name") != std::string::npos);
  CHECK(table.find("3.14159") != std::string::npos);
}
