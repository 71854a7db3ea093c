#include "doctest.h"

#include "allostery/criterion.hpp"
#include "allostery/verify.hpp"
#include "oracles.hpp"

using namespace allostery;
using oracle::lamp;

namespace {
const Ranks r11{1, 1};

std::vector<WreathElement> punctured_ball(Ranks r, std::size_t radius) {
  std::vector<WreathElement> out;
  for (auto& e : ball(GeneratorSet(r), radius, 10000)) {
    if (!e.element.is_identity()) out.push_back(e.element);
  }
  return out;
}
}  // namespace

TEST_SUITE("criterion") {
  TEST_CASE("ball of radius one with epsilon 1/2") {
    CriterionConfig config;
    config.state_budget = 4'000'000;
    auto gammas = punctured_ball(r11, 1);
    auto cert = verify_criterion(gammas, r11, fixed_schedule(Rational(1, 2)), config);
    CHECK(cert.status() == "valid");
    REQUIRE(cert.records.size() == 4);
    std::vector<Integer> primes, indices;
    for (const auto& r : cert.records) {
      primes.push_back(r.datum.p);
      indices.push_back(r.index);
    }
    CHECK(primes == std::vector<Integer>{2, 3, 5, 7});
    CHECK(indices == std::vector<Integer>{8, 9, 125, 343});
    CHECK(cert.window_fraction == Rational(3, 14));
    CHECK(cert.window_fraction_enumerated == Rational(3, 14));
    CHECK(cert.window_fraction >= Rational(1, 16));
    CHECK(cert.transitivity.method == "bfs");
    CHECK(cert.stabilizer.ok());
  }

  TEST_CASE("default budget falls back to coprime factors") {
    auto cert = verify_criterion(punctured_ball(r11, 1), r11, fixed_schedule(Rational(1, 2)), CriterionConfig{});
    CHECK(cert.status() == "valid");
    CHECK(cert.transitivity.method == "coprime-factors");
    CHECK_FALSE(cert.window_fraction_enumerated.has_value());
  }

  TEST_CASE("epsilon below the achievable fraction fails") {
    auto data = forge_all(assign_primes(std::vector<WreathElement>{lamp(r11, {{0, 1}}, 0)}, fixed_schedule(Rational(1, 2))));
    // Fixed fraction is 3/4; demand 1 - eps = 3/4 + 1/100.
    data[0].epsilon = 1 - Rational(3, 4) - Rational(1, 100);
    auto cert = certify_window(data, r11, CriterionConfig{});
    CHECK(cert.status() == "invalid");
    CHECK_FALSE(cert.records[0].fraction_bound);
    auto v = verify_certificate(to_json(cert, CriterionConfig{}));
    CHECK_FALSE(v.valid);
    CHECK(v.agrees());
  }

  TEST_CASE("duplicate primes fail the certificate") {
    auto a = forge(lamp(r11, {{0, 1}}, 0), 2, Rational(1, 2));
    auto b = forge(lamp(r11, {}, 1), 2, Rational(1, 2));
    auto cert = certify_window({a, b}, r11, CriterionConfig{});
    CHECK_FALSE(cert.distinct_primes);
    CHECK_FALSE(cert.transitivity.transitive);
    CHECK(cert.status() == "invalid");
  }

  TEST_CASE("empty window is valid with bound 1") {
    auto cert = certify_window({}, r11, CriterionConfig{});
    CHECK(cert.status() == "valid");
    CHECK(cert.product_lower_bound == 1);
    CHECK(cert.window_fraction == 1);
  }

  TEST_CASE("partial when no route to transitivity fits the budget") {
    CriterionConfig config;
    config.state_budget = 100;
    auto cert = verify_criterion(punctured_ball(r11, 1), r11, fixed_schedule(Rational(1, 2)), config);
    CHECK(cert.transitivity.method == "unchecked");
    CHECK(cert.status() == "partial");
  }

  TEST_CASE("certificate json is deterministic and re-verifies") {
    CriterionConfig config;
    auto gammas = punctured_ball(r11, 1);
    auto a = to_json(verify_criterion(gammas, r11, fixed_schedule(Rational(1, 2)), config), config).dump();
    auto b = to_json(verify_criterion(gammas, r11, fixed_schedule(Rational(1, 2)), config), config);
    CHECK(a == b.dump());
    CHECK(b["v"] == 1);
    auto v = verify_certificate(b);
    CHECK(v.valid);
    CHECK(v.failures.empty());
    b["records"][0]["fixed_fraction"] = "1/1";
    CHECK_FALSE(verify_certificate(b).valid);
  }

  TEST_CASE("default schedule on a two-element window") {
    std::vector<WreathElement> gammas{lamp(r11, {}, 1), lamp(r11, {{0, 1}}, 0)};
    auto cert = verify_criterion(gammas, r11, default_schedule(), CriterionConfig{});
    CHECK(cert.status() == "valid");
    CHECK(cert.product_lower_bound == Rational(3, 4) * Rational(7, 8));
  }
}
