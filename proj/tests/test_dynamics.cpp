#include "doctest.h"

#include <random>

#include "allostery/dynamics.hpp"
#include "allostery/errors.hpp"
#include "oracles.hpp"

using namespace allostery;
using oracle::lamp;

namespace {
const Ranks r11{1, 1};
SubgroupDatum d32() { return forge(lamp(r11, {{0, 1}}, 0), 2, Rational(1, 2)); }
SubgroupDatum d9() { return forge(lamp(r11, {}, 1), 3, Rational(1, 2)); }
}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("coset oracle confirms the index by greedy classing") {
    oracle::CosetOracle o32(d32());
    CHECK(o32.reps.size() == 32);
    oracle::CosetOracle o9(d9());
    CHECK(o9.reps.size() == 9);
  }

  TEST_CASE("coset encoding is a bijection compatible with the oracle") {
    for (auto datum : {d32(), d9()}) {
      oracle::CosetOracle o(datum);
      FiniteLevelSystem level(datum);
      std::set<CosetState> states;
      for (const auto& rep : o.reps) states.insert(level.state_of(rep));
      CHECK(states.size() == o.reps.size());
      for (std::size_t i = 0; i < o.reps.size(); ++i) {
        for (const auto& g : level.generators().elements()) {
          // The class of g.rep_i under the membership predicate is the state act(g, state_of(rep_i)).
          const auto j = o.class_of(g * o.reps[i]);
          CHECK(level.state_of(o.reps[j]) == level.act(g, level.state_of(o.reps[i])));
        }
      }
      CHECK(o.fixed_by(level.generators()[0]) == level.s_fixed_count());
    }
  }

  TEST_CASE("generator actions on the identity state") {
    FiniteLevelSystem level(d32());
    const auto& g = level.generators();
    auto t = level.act(g[g.shift_index(0)], level.identity_state());
    CHECK(t.base == BaseResidue({1}));
    CHECK(t.sums == std::vector<LampVector>{{0}, {0}});
    auto s = level.act(g[g.lamp_index(0)], level.identity_state());
    CHECK(s.base == BaseResidue({0}));
    CHECK(s.sums == std::vector<LampVector>{{1}, {0}});
    CHECK(level.act(level.datum().gamma, level.identity_state()) != level.identity_state());
    CHECK(level.to_string(s) == "(0)|((1),(0))");
    CHECK(level.parse_state("(0)|((1),(0))") == s);
    CHECK_THROWS_AS(level.parse_state("(9)|((1),(0))"), ParseError);
  }

  TEST_CASE("action is a homomorphism on random elements") {
    std::mt19937_64 rng(17);
    for (Ranks r : {Ranks{1, 1}, Ranks{2, 1}, Ranks{1, 2}}) {
      for (int i = 0; i < 10; ++i) {
        auto gamma = oracle::random_gamma(rng, r);
        Integer p = 2;
        while (!is_admissible_prime(gamma, p)) p = next_prime(p);
        FiniteLevelSystem level(forge(gamma, p, Rational(1, 2)));
        for (int j = 0; j < 20; ++j) {
          auto x = oracle::random_element(rng, r), y = oracle::random_element(rng, r);
          auto s = level.state_of(oracle::random_element(rng, r));
          CHECK(level.act(x * y, s) == level.act(x, level.act(y, s)));
          CHECK(level.act(WreathElement::identity(r), s) == s);
          CHECK(level.act(invert(x), level.act(x, s)) == s);
        }
      }
    }
  }

  TEST_CASE("encode and decode are inverse") {
    FiniteLevelSystem level(d32());
    for (std::uint64_t i = 0; i < 32; ++i) CHECK(level.encode(level.decode(i)) == i);
    CHECK(level.encode(level.identity_state()) == 0);
    CHECK(enumerate_states(level, 100).size() == 32);
    CHECK_THROWS_AS(enumerate_states(level, 31), BudgetExceeded);
  }

  TEST_CASE("orbits") {
    auto w32 = WindowSystem::make({d32()});
    auto w9 = WindowSystem::make({d9()});
    CHECK(orbit(w32, 0, 100).size() == 32);
    CHECK(orbit(w9, 0, 100).size() == 9);
    CHECK(orbit(w32, 5, {}, 100).states() == std::vector<std::uint64_t>{5});
    CHECK(oracle::generic_orbit(w32.level(0)).size() == 32);
    Orbit o = orbit(w32, 0, 100);
    for (auto s : o.states()) CHECK(w32.apply_word(o.word_to(s), 0, 100) == s);
  }

  TEST_CASE("transitivity") {
    auto w = WindowSystem::make({d32(), d9()});
    CHECK(w.size() == 288);
    CHECK(is_transitive(w, 1000));
    CHECK(is_transitive(WindowSystem::make({d32()}), 1000));
    auto same_prime = forge(lamp(r11, {}, 1), 2, Rational(1, 2));
    CHECK_THROWS_AS(WindowSystem::make({d32(), same_prime}), InvalidArgument);
    auto dup = WindowSystem::unchecked({d32(), same_prime}, r11);
    CHECK(dup.size() == 32 * 8);
    CHECK_FALSE(is_transitive(dup, 1000));
  }

  TEST_CASE("fixed counts") {
    FiniteLevelSystem l32(d32()), l9(d9());
    const auto& g = l32.generators();
    CHECK(l32.fixed_count(g[0]) == 24);
    CHECK(l32.s_fixed_count() == 24);
    CHECK(l32.fixed_count(WreathElement::identity(r11)) == 32);
    CHECK(l9.fixed_count(g[0]) == 6);
    CHECK(oracle::generic_fixed_count(l32, g[0]) == 24);
    CHECK(oracle::generic_fixed_count(l9, g[0]) == 6);

    auto w = WindowSystem::make({d32(), d9()});
    CHECK(s_fixed_fraction(WindowSystem::make({d32()})) == Rational(3, 4));
    CHECK(s_fixed_fraction(w) == Rational(1, 2));
    CHECK(s_fixed_fraction_by_enumeration(w, 1000) == Rational(1, 2));
    CHECK(s_fixed_fraction(WindowSystem::make({}, r11)) == 1);
  }

  TEST_CASE("closed-form fixed count matches brute force for random elements") {
    std::mt19937_64 rng(23);
    for (Ranks r : {Ranks{1, 1}, Ranks{2, 1}, Ranks{1, 2}}) {
      for (int i = 0; i < 6; ++i) {
        auto gamma = oracle::random_gamma(rng, r);
        Integer p = 2;
        while (!is_admissible_prime(gamma, p)) p = next_prime(p);
        auto datum = forge(gamma, p, Rational(1, 2));
        if (index(datum) > 5000) continue;
        auto w = WindowSystem::make({datum});
        for (int j = 0; j < 10; ++j) {
          auto x = oracle::random_element(rng, r, 4, 2);
          CHECK(w.level(0).fixed_count(x) == count_fixed_by_enumeration(x, w, 10000));
        }
        CHECK(w.level(0).fixed_count(gamma) == count_fixed_by_enumeration(gamma, w, 10000));
      }
    }
  }

  TEST_CASE("structure maps and inverse-system laws") {
    auto small = WindowSystem::make({d32()});
    auto big = WindowSystem::make({d32(), d9()});
    StructureMap f(big, small);
    std::vector<std::size_t> hits(32, 0);
    for (std::uint64_t i = 0; i < 288; ++i) ++hits[f.apply_index(big, small, i)];
    for (auto h : hits) CHECK(h == 9);

    auto d5 = forge(lamp(r11, {{0, 1}}, 1), 5, Rational(1, 2));
    std::vector<WindowSystem> chain{small, big, WindowSystem::make({d32(), d9(), d5})};
    auto report = check_inverse_system(chain, 1'000'000);
    CHECK(report.ok());
    CHECK(report.failures.empty());
    CHECK_THROWS_AS(StructureMap(small, big), InvalidArgument);
  }

  TEST_CASE("stabilizer witness") {
    auto d5 = forge(lamp(r11, {{0, 1}}, 1), 5, Rational(1, 2));
    auto w = WindowSystem::make({d32(), d9(), d5});
    auto rep = stabilizer_witness(w, 2, 1000);
    CHECK(rep.ok());
    CHECK(rep.window_gamma_moves == std::vector<bool>{true, true, true});
    CHECK(rep.ball_size == 17);
    CHECK(rep.movers + rep.fixers == 17);
    std::size_t fixers = 0;
    const auto y = w.identity_state();
    for (const auto& e : ball(w.generators(), 2, 1000)) fixers += w.act(e.element, y) == y ? 1 : 0;
    CHECK(rep.fixers == fixers);
  }

  TEST_CASE("window states text and csv") {
    auto w = WindowSystem::make({d32(), d9()});
    for (std::uint64_t i = 0; i < 288; i += 17) CHECK(w.parse_index(w.index_to_string(i)) == i);
    CHECK(w.level_index(w.encode(w.decode(40)), 1) == 40 % 9);
    auto csv = orbit_csv(w, orbit(w, 0, 1000));
    CHECK(csv.rfind("index,state,word\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 289);
  }
}
