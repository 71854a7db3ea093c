#include "doctest.h"

#include "allostery/errors.hpp"
#include "allostery/verify.hpp"
#include "oracles.hpp"

using namespace allostery;
using json = nlohmann::ordered_json;

TEST_SUITE("verify") {
  TEST_CASE("malformed certificates are parse errors") {
    CHECK_THROWS_AS(verify_certificate(json::object()), ParseError);
    CHECK_THROWS_AS(verify_certificate(json{{"kind", "criterion"}, {"v", 1}, {"status", "valid"}}), ParseError);
    CHECK_THROWS_AS(verify_certificate(json{{"kind", "nonsense"}, {"v", 1}, {"status", "valid"}}), ParseError);
    CHECK_THROWS_AS(verify_certificate(json{{"kind", "criterion"}, {"v", 2}, {"status", "valid"}}), ParseError);
  }

  TEST_CASE("forged gamma inside its own subgroup is caught") {
    const Ranks r11{1, 1};
    auto d = forge(oracle::lamp(r11, {{0, 1}}, 0), 2, Rational(1, 2));
    json cert = {{"kind", "criterion"},
                 {"v", 1},
                 {"inputs", {{"d", 1}, {"m", 1}}},
                 {"window", json::array({to_json(d)})},
                 {"records", json::array({json{{"index", "32"}, {"fixed_fraction", "3/4"}}})},
                 {"product_lower_bound", "1/2"},
                 {"window_fraction", "3/4"},
                 {"status", "valid"}};
    auto good = verify_certificate(cert);
    CHECK(good.valid);
    // Replace gamma by an element of Gamma_gamma: lamp sum 2 over the class of 0.
    cert["window"][0]["gamma"] = "{(0):(1),(8):(1)};(0)";
    auto bad = verify_certificate(cert);
    CHECK_FALSE(bad.valid);
    CHECK_FALSE(bad.agrees());
  }
}
