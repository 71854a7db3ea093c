#include "doctest.h"

#include <random>

#include "allostery/errors.hpp"
#include "allostery/wreath.hpp"
#include "oracles.hpp"

using namespace allostery;
using oracle::lamp;

TEST_SUITE("wreath") {
  const Ranks r11{1, 1};

  TEST_CASE("product follows the shifted-lamp formula") {
    auto x = lamp(r11, {{0, 1}}, 1), y = lamp(r11, {{0, 1}}, 0);
    CHECK(x * y == lamp(r11, {{0, 1}, {1, 1}}, 1));
    CHECK(y * x == lamp(r11, {{0, 2}}, 1));
  }

  TEST_CASE("inverse") {
    CHECK(invert(lamp(r11, {{0, 1}}, 1)) == lamp(r11, {{-1, -1}}, -1));
    CHECK(invert(WreathElement::identity(r11)).is_identity());
    CHECK((lamp(r11, {{0, 1}}, 1) * invert(lamp(r11, {{0, 1}}, 1))).is_identity());
  }

  TEST_CASE("group axioms on random elements") {
    std::mt19937_64 rng(2024);
    for (Ranks r : {Ranks{1, 1}, Ranks{2, 1}, Ranks{1, 2}, Ranks{2, 2}}) {
      const auto e = WreathElement::identity(r);
      for (int i = 0; i < 100; ++i) {
        auto x = oracle::random_element(rng, r), y = oracle::random_element(rng, r), z = oracle::random_element(rng, r);
        CHECK((x * y) * z == x * (y * z));
        CHECK(e * x == x);
        CHECK(x * e == x);
        CHECK((x * invert(x)).is_identity());
        CHECK((invert(x) * x).is_identity());
        CHECK(invert(invert(x)) == x);
        CHECK(invert(x * y) == invert(y) * invert(x));
      }
    }
  }

  TEST_CASE("zero lamp values are pruned") {
    LampConfig f(r11);
    f.add(BaseElement({Integer(2)}), {Integer(3)});
    f.add(BaseElement({Integer(2)}), {Integer(-3)});
    CHECK(f.empty());
    CHECK(f.at(BaseElement({Integer(2)})) == LampVector{Integer(0)});
  }

  TEST_CASE("generators follow the fixed order") {
    GeneratorSet g({2, 1});
    CHECK(g.size() == 6);
    CHECK(g.name(0) == "s1");
    CHECK(g.name(1) == "s1^-1");
    CHECK(g.name(3) == "s2^-1");
    CHECK(g.name(4) == "t1");
    CHECK((g[0] * g[1]).is_identity());
    CHECK((g[4] * g[5]).is_identity());
    CHECK(g[g.lamp_index(1)] == WreathElement::lamp_at_origin({2, 1}, {Integer(0), Integer(1)}));
    CHECK(g[g.shift_index(0, true)] == WreathElement::pure_shift({2, 1}, BaseElement({Integer(-1)})));
    CHECK(evaluate(g, Word{4, 0, 5}) == g[4] * g[0] * g[5]);
  }

  TEST_CASE("ball sizes") {
    GeneratorSet g(r11);
    CHECK(ball(g, 0, 10).size() == 1);
    auto b1 = ball(g, 1, 100);
    REQUIRE(b1.size() == 5);
    CHECK(b1[0].element.is_identity());
    // Spheres of radius 0, 1, 2 have 1, 4 and 12 elements.
    auto b2 = ball(g, 2, 100);
    CHECK(b2.size() == 17);
    for (const auto& entry : b2) {
      CHECK(entry.word.size() <= 2);
      CHECK(evaluate(g, entry.word) == entry.element);
    }
    CHECK_THROWS_AS(ball(g, 3, 10), BudgetExceeded);
  }

  TEST_CASE("ball agrees with naive word enumeration") {
    GeneratorSet g({1, 2});
    std::set<WreathElement> naive{WreathElement::identity({1, 2})};
    std::vector<Word> words{{}};
    for (int len = 1; len <= 2; ++len) {
      std::vector<Word> next;
      for (const auto& w : words) {
        for (std::size_t i = 0; i < g.size(); ++i) {
          Word v = w;
          v.push_back(i);
          naive.insert(evaluate(g, v));
          next.push_back(v);
        }
      }
      words = next;
    }
    CHECK(ball(g, 2, 1000).size() == naive.size());
  }

  TEST_CASE("text form round trips") {
    auto x = lamp(r11, {{0, 1}}, 0);
    CHECK(to_string(x) == "{(0):(1)};(0)");
    CHECK(parse_element("{(0):(1)};(0)") == x);
    CHECK(parse_element(" { ( 0 ) : ( 1 ) } ; ( 0 ) ") == x);
    CHECK(parse_element("{};(1)") == lamp(r11, {}, 1));
    std::mt19937_64 rng(5);
    for (Ranks r : {Ranks{1, 1}, Ranks{2, 3}}) {
      for (int i = 0; i < 50; ++i) {
        auto y = oracle::random_element(rng, r);
        CHECK(parse_element(to_string(y), r) == y);
      }
    }
    CHECK(to_string(Word{0, 3}) == "[0,3]");
    CHECK(parse_word("[0, 3]") == Word{0, 3});
    CHECK(parse_word("[]").empty());
  }

  TEST_CASE("malformed element text reports a column") {
    CHECK_THROWS_AS(parse_element("{(0):(1)"), ParseError);
    CHECK_THROWS_AS(parse_element("{(0):(1),(0):(2)};(0)"), ParseError);
    CHECK_THROWS_AS(parse_element("{(0):(1)};(0,1)"), ParseError);
    CHECK_THROWS_AS(parse_element("{(0):(1)};(0)", Ranks{2, 1}), ParseError);
    try {
      parse_element("{(0):(x)};(0)");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.column() == 7);
    }
  }
}
