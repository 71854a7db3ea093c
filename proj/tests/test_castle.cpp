#include "doctest.h"

#include <random>

#include "allostery/castle.hpp"
#include "allostery/verify.hpp"
#include "oracles.hpp"

using namespace allostery;
using oracle::lamp;

namespace {
const Ranks r11{1, 1};
SubgroupDatum d32() { return forge(lamp(r11, {{0, 1}}, 0), 2, Rational(1, 2)); }
SubgroupDatum d9() { return forge(lamp(r11, {}, 1), 3, Rational(1, 2)); }

std::vector<WreathElement> pool(const WindowSystem& w, std::size_t radius) {
  std::vector<WreathElement> out;
  for (auto& e : ball(w.generators(), radius, 100000)) {
    if (!e.element.is_identity()) out.push_back(e.element);
  }
  return out;
}
}  // namespace

TEST_SUITE("castle") {
  TEST_CASE("transversal castle on the 9-state level") {
    auto w = WindowSystem::make({d9()});
    auto castle = transversal_castle(w, 0, 1000);
    REQUIRE(castle.levels.size() == 1);
    CHECK(castle.levels[0].shapes.size() == 9);
    const auto& s1 = w.generators()[0];
    auto audit = audit_castle(castle, s1, w, 1000, Rational(1, 2));
    CHECK(audit.fixed_measure == Rational(2, 3));
    CHECK(audit.inequality_holds);
    CHECK(audit.defects[0] >= Rational(2, 3));
    CHECK(audit.within_tolerance == false);
    auto v = verify_certificate(to_json(audit, castle, w), 1000);
    CHECK(v.valid);
    CHECK(v.agrees());
  }

  TEST_CASE("overlapping castle is rejected with a witness") {
    auto w = WindowSystem::make({d9()});
    auto castle = transversal_castle(w, 0, 1000);
    castle.levels[0].shapes.push_back(castle.levels[0].shapes[1]);
    CHECK_THROWS_AS(audit_castle(castle, w.generators()[0], w, 1000), MalformedCastle);
    Castle two{{CastleLevel{{0}, {WreathElement::identity(r11)}}, CastleLevel{{0}, {WreathElement::identity(r11)}}}};
    try {
      audit_castle(two, w.generators()[0], w, 1000);
      FAIL("expected MalformedCastle");
    } catch (const MalformedCastle& e) {
      CHECK(e.witness().find("tower 0") != std::string::npos);
      CHECK(e.witness().find("tower 1") != std::string::npos);
    }
  }

  TEST_CASE("uncovered castle is rejected") {
    auto w = WindowSystem::make({d9()});
    Castle c{{CastleLevel{{0}, {WreathElement::identity(r11)}}}};
    CHECK_THROWS_AS(audit_castle(c, w.generators()[0], w, 1000), MalformedCastle);
  }

  TEST_CASE("inequality holds on a hundred random castles") {
    std::mt19937_64 rng(100);
    auto w = WindowSystem::make({d32(), d9()});
    auto shapes = pool(w, 2);
    auto gammas = pool(w, 1);
    for (int trial = 0; trial < 100; ++trial) {
      auto castle = random_castle(w, rng, shapes, 10000);
      const auto& gamma = gammas[trial % gammas.size()];
      auto audit = audit_castle(castle, gamma, w, 10000);
      CHECK(audit.inequality_holds);
      CHECK(audit.fixed_count == count_fixed_by_enumeration(gamma, w, 10000));
      if (trial % 10 == 0) CHECK(verify_certificate(to_json(audit, castle, w), 10000).valid);
    }
  }

  TEST_CASE("random castles are deterministic given the seed") {
    auto w = WindowSystem::make({d32()});
    auto shapes = pool(w, 2);
    std::mt19937_64 a(9), b(9);
    CHECK(to_text(random_castle(w, a, shapes, 1000), w) == to_text(random_castle(w, b, shapes, 1000), w));
  }

  TEST_CASE("text format round trip and errors") {
    auto w = WindowSystem::make({d9()});
    auto castle = transversal_castle(w, 0, 1000);
    auto text = "# transversal\n\n" + to_text(castle, w);
    auto parsed = parse_castle(text, w);
    CHECK(to_text(parsed, w) == to_text(castle, w));
    auto words = parse_castle("V=(0)|((0)); S=[] [2] [3] [0]\n", w);
    CHECK(words.levels[0].shapes.size() == 4);
    try {
      parse_castle("V=(0)|((0)); S={}\n", w);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
    }
    try {
      parse_castle("# c\nV=(0)|((0)) S=[]\n", w);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_castle("W=(0)|((0)); S=[]", w), ParseError);
  }

  TEST_CASE("tampered audit fails verification") {
    auto w = WindowSystem::make({d9()});
    auto castle = transversal_castle(w, 0, 1000);
    auto j = to_json(audit_castle(castle, w.generators()[0], w, 1000), castle, w);
    j["castle"][0]["S"].erase(j["castle"][0]["S"].begin());
    CHECK_FALSE(verify_certificate(j, 1000).valid);
  }
}
