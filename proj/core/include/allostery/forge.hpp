#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "allostery/base_group.hpp"
#include "allostery/numeric.hpp"
#include "allostery/wreath.hpp"

namespace allostery {

/// The finite-index subgroup Gamma_gamma = A_gamma x| Lambda_gamma built for a
/// nontrivial gamma = (g, delta):
///
///   Lambda_gamma = (p^k Z)^m
///   A_gamma      = { f : sum of f over q lies in (pZ)^d for every q in E }
///
/// where E is an ordered set of l residues of Z^m / (p^k Z)^m.
struct SubgroupDatum {
  WreathElement gamma;
  Integer p;
  std::size_t k = 1;
  std::size_t l = 1;
  std::vector<BaseResidue> E;  ///< sorted, size l
  Rational epsilon;
  Ranks ranks;

  CongruenceSubgroup base_subgroup() const { return {p, k, ranks.m}; }
  /// [Lambda : Lambda_gamma] = p^{km}
  Integer base_index() const { return ipow(p, k * ranks.m); }

  friend bool operator==(const SubgroupDatum&, const SubgroupDatum&) = default;
};

/// True iff p is prime and no lamp value of gamma lies in (pZ)^d.
bool is_admissible_prime(const WreathElement& gamma, const Integer& p);

/// Builds the datum for gamma with the minimal choices: l = |supp g| + 1,
/// k minimal with l < epsilon p^{km} separating delta and the pairwise
/// differences of supp g, and E the residues of supp g padded by the
/// smallest unused residues.
SubgroupDatum forge(const WreathElement& gamma, const Integer& p, const Rational& epsilon);

/// Membership in Gamma_gamma.
bool contains(const SubgroupDatum& datum, const WreathElement& x);

/// [Gamma : Gamma_gamma] = p^{km} p^{ld}
Integer index(const SubgroupDatum& datum);

/// Re-checks every structural invariant of a datum. Returns one message per
/// violated invariant; empty means valid.
std::vector<std::string> validate(const SubgroupDatum& datum);

using EpsilonSchedule = std::function<Rational(std::size_t)>;

/// 2^{-(i+2)}; the partial products of (1 - eps_i) stay >= 1/2.
Rational default_epsilon(std::size_t i);
EpsilonSchedule default_schedule();
EpsilonSchedule fixed_schedule(Rational epsilon);

struct PrimeAssignmentEntry {
  WreathElement gamma;
  Integer prime;
  Rational epsilon;
};

using PrimeAssignment = std::vector<PrimeAssignmentEntry>;

/// Gives the i-th gamma the smallest prime not used so far that is admissible
/// for it. Throws InvalidArgument on an identity or repeated gamma.
PrimeAssignment assign_primes(std::span<const WreathElement> gammas, const EpsilonSchedule& schedule);

std::vector<SubgroupDatum> forge_all(const PrimeAssignment& assignment);

/// {gamma, p, k, l, E, epsilon, d, m} in that order.
nlohmann::ordered_json to_json(const SubgroupDatum& datum);
/// Inverse of to_json. Throws ParseError on malformed records; the datum is
/// not validated.
SubgroupDatum datum_from_json(const nlohmann::ordered_json& j);

}  // namespace allostery
