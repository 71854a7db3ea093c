#include "doctest.h"

#include <random>

#include "allostery/base_group.hpp"
#include "allostery/errors.hpp"
#include "allostery/numeric.hpp"
#include "oracles.hpp"

using namespace allostery;

namespace {
BaseElement b(std::initializer_list<long> c) {
  std::vector<Integer> v;
  for (long x : c) v.emplace_back(x);
  return BaseElement(std::move(v));
}
}  // namespace

TEST_SUITE("base_group") {
  TEST_CASE("compose adds coordinates") {
    CHECK(compose(b({3}), b({-3})) == b({0}));
    CHECK(compose(b({1, 2}), b({0, 0})) == b({1, 2}));
    CHECK(compose(b({5}), b({7})) == b({12}));
    CHECK_THROWS_AS(compose(b({1}), b({1, 2})), InvalidArgument);
  }

  TEST_CASE("compose is a group law on random elements") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
      auto x = oracle::random_base(rng, 2, 50), y = oracle::random_base(rng, 2, 50), z = oracle::random_base(rng, 2, 50);
      CHECK(compose(compose(x, y), z) == compose(x, compose(y, z)));
      CHECK(compose(x, y) == compose(y, x));
      CHECK(compose(x, x.inverse()).is_identity());
      CHECK(compose(x, BaseElement::zero(2)) == x);
    }
  }

  TEST_CASE("reduce gives canonical residues") {
    CHECK(reduce(b({5}), CongruenceSubgroup(2, 3, 1)) == BaseResidue({5}));
    CHECK(reduce(b({8}), CongruenceSubgroup(2, 3, 1)) == BaseResidue({0}));
    CHECK(reduce(b({-1}), CongruenceSubgroup(3, 1, 1)) == BaseResidue({2}));
    CHECK(reduce(b({-9, 10}), CongruenceSubgroup(3, 2, 2)) == BaseResidue({0, 1}));
  }

  TEST_CASE("kernel membership") {
    CHECK(in_kernel(b({8}), CongruenceSubgroup(2, 3, 1)));
    CHECK_FALSE(in_kernel(b({6}), CongruenceSubgroup(2, 2, 1)));
    CHECK(in_kernel(b({0, 9}), CongruenceSubgroup(3, 2, 2)));
  }

  TEST_CASE("congruence subgroup index is p^(km)") {
    CHECK(CongruenceSubgroup(2, 3, 1).index() == 8);
    CHECK(CongruenceSubgroup(3, 2, 2).index() == 81);
    CHECK(CongruenceSubgroup(5, 1, 3).modulus() == 5);
  }

  TEST_CASE("reduction is a homomorphism") {
    std::mt19937_64 rng(11);
    CongruenceSubgroup h(3, 2, 2);
    for (int i = 0; i < 200; ++i) {
      auto x = oracle::random_base(rng, 2, 100), y = oracle::random_base(rng, 2, 100);
      CHECK(reduce(compose(x, y), h) == residue_add(reduce(x, h), reduce(y, h), h));
      CHECK(reduce(x.inverse(), h) == residue_negate(reduce(x, h), h));
    }
  }

  TEST_CASE("minimal exponent scans k upward") {
    std::vector<BaseElement> avoid6{b({6})};
    CHECK(minimal_exponent(2, avoid6, Rational(4), 1) == 3);
    std::vector<BaseElement> avoid1{b({1})};
    CHECK(minimal_exponent(3, avoid1, Rational(2), 1) == 1);
    CHECK(minimal_exponent(2, {}, Rational(1), 1) == 1);
    CHECK(minimal_exponent(2, {}, Rational(4), 1) == 3);
    CHECK(minimal_exponent(2, {}, Rational(7, 2), 1) == 2);
    std::vector<BaseElement> avoid0{b({0})};
    CHECK_THROWS_AS(minimal_exponent(2, avoid0, Rational(1), 1), InvalidArgument);
  }

  TEST_CASE("minimal exponent agrees with a direct scan") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const Integer p = std::vector<int>{2, 3, 5}[trial % 3];
      std::vector<BaseElement> avoid;
      for (int i = 0; i < 3; ++i) {
        auto x = oracle::random_base(rng, 2, 40);
        if (!x.is_identity()) avoid.push_back(x);
      }
      const Rational bound(oracle::random_int(rng, 1, 60), oracle::random_int(rng, 1, 5));
      std::size_t k = 1;
      for (;; ++k) {
        const Integer mod = ipow(p, k);
        bool separated = true;
        for (const auto& a : avoid) {
          separated = separated && !(a[0] % mod == 0 && a[1] % mod == 0);
        }
        if (separated && Rational(mod * mod) > bound) break;
      }
      CHECK(minimal_exponent(p, avoid, bound, 2) == k);
    }
  }

  TEST_CASE("numeric helpers") {
    CHECK(floor_mod(-7, 3) == 2);
    CHECK(ipow(2, 10) == 1024);
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));
    CHECK(next_prime(7) == 11);
    CHECK(to_string(Rational(3, 4)) == "3/4");
    CHECK(to_string(Rational(2)) == "2/1");
    CHECK(parse_rational("-6/8") == Rational(-3, 4));
    CHECK(parse_rational("5") == Rational(5));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
    CHECK(to_string(b({1, -2})) == "(1,-2)");
  }
}
