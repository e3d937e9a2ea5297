#include <doctest.h>

#include <json.hpp>

#include "sispatch/io.hpp"

using namespace sispatch;

namespace {

const char* kGoodConfig = R"({
  "n": 2,
  "L": [[-1, 1], [1, -1]],
  "beta": [1, 1],
  "gamma": [1, 1],
  "dS": 1, "dI": 1, "N": 4,
  "S0": [1.9, 1.9], "I0": [0.1, 0.1],
  "tolerances": {"rel": 1e-9},
  "seed": 7
})";

} // namespace

TEST_CASE("config parses with optional fields applied") {
    const auto cfg = parse_scenario_config(kGoodConfig);
    CHECK(cfg.n == 2);
    CHECK(cfg.dS == 1.0);
    CHECK(cfg.tol_rel == 1e-9);
    CHECK(cfg.tol_abs == 1e-10); // default retained
    CHECK(cfg.seed == 7);
    REQUIRE(cfg.S0.has_value());
    CHECK(cfg.S0->sum() + cfg.I0->sum() == doctest::Approx(4.0));
    const Model m = model_from_config(cfg);
    CHECK(m.n() == 2);
}

TEST_CASE("config parsing fails closed") {
    auto patch = [](const std::string& key, const std::string& value) {
        auto j = nlohmann::json::parse(kGoodConfig);
        j[key] = nlohmann::json::parse(value);
        return j.dump();
    };
    CHECK_THROWS_WITH_AS(parse_scenario_config(patch("betta", "[1,1]")),
                         doctest::Contains("unknown config field"), Error);
    CHECK_THROWS_AS(parse_scenario_config(patch("beta", "[1,1,1]")), Error);
    CHECK_THROWS_AS(parse_scenario_config(patch("dS", "0")), Error);
    CHECK_THROWS_AS(parse_scenario_config(patch("I0", "[3, 3]")), Error); // breaks sum
    CHECK_THROWS_AS(parse_scenario_config(patch("tolerances", "{\"rell\": 1e-9}")), Error);
    CHECK_THROWS_AS(parse_scenario_config("{"), Error);
    CHECK_THROWS_AS(parse_scenario_config("[]"), Error);

    auto j = nlohmann::json::parse(kGoodConfig);
    j.erase("gamma");
    CHECK_THROWS_WITH_AS(parse_scenario_config(j.dump()), doctest::Contains("missing required"),
                         Error);
    j = nlohmann::json::parse(kGoodConfig);
    j.erase("I0");
    CHECK_THROWS_WITH_AS(parse_scenario_config(j.dump()), doctest::Contains("together"), Error);
}

TEST_CASE("json writer emits parseable deterministic documents") {
    JsonWriter w;
    w.begin_object();
    w.key("x").value(1.0 / 3.0);
    w.key("v").value((Vector(2) << 0.1, -2.5e-7).finished());
    w.key("name").value("a\"b\\c");
    w.key("flag").value(true);
    w.key("count").value(42L);
    w.key("missing").null_value();
    w.key("nested").begin_array().begin_object().key("y").value(2.0).end_object().end_array();
    w.end_object();

    const auto parsed = nlohmann::json::parse(w.str());
    CHECK(parsed["x"].get<double>() == 1.0 / 3.0);
    CHECK(parsed["v"][1].get<double>() == -2.5e-7);
    CHECK(parsed["name"].get<std::string>() == "a\"b\\c");
    CHECK(parsed["missing"].is_null());
    CHECK(parsed["nested"][0]["y"].get<double>() == 2.0);

    // 17 significant digits round-trip exactly
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("csv rows join fields with commas") {
    CHECK(csv_row({"a", "b", "c"}) == "a,b,c\n");
    CHECK(csv_row({}) == "\n");
}
