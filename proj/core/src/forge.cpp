#include "allostery/forge.hpp"

#include <algorithm>
#include <set>

#include "allostery/errors.hpp"

namespace allostery {

namespace {

bool all_divisible(const LampVector& v, const Integer& p) {
  return std::all_of(v.begin(), v.end(), [&](const Integer& c) { return c % p == 0; });
}

BaseElement difference(const BaseElement& a, const BaseElement& b) { return compose(a, b.inverse()); }

/// Residues in lexicographic order, starting from zero.
class ResidueOdometer {
 public:
  ResidueOdometer(std::size_t rank, Integer modulus) : current_(rank), modulus_(std::move(modulus)) {}

  BaseResidue value() const { return BaseResidue(current_); }
  void next() {
    for (std::size_t i = current_.size(); i-- > 0;) {
      if (++current_[i] < modulus_) return;
      current_[i] = 0;
    }
  }

 private:
  std::vector<Integer> current_;
  Integer modulus_;
};

std::vector<Integer> sum_over_coset(const WreathElement& x, const BaseResidue& q, const CongruenceSubgroup& h,
                                    std::size_t d) {
  std::vector<Integer> sum(d);
  for (const auto& [pos, value] : x.lamp().support()) {
    if (reduce(pos, h) != q) continue;
    for (std::size_t i = 0; i < d; ++i) sum[i] += value[i];
  }
  return sum;
}

}  // namespace

bool is_admissible_prime(const WreathElement& gamma, const Integer& p) {
  if (!is_prime(p)) return false;
  return std::none_of(gamma.lamp().support().begin(), gamma.lamp().support().end(),
                      [&](const auto& entry) { return all_divisible(entry.second, p); });
}

SubgroupDatum forge(const WreathElement& gamma, const Integer& p, const Rational& epsilon) {
  if (gamma.is_identity()) throw InvalidArgument("forge: gamma must be nontrivial");
  if (!is_prime(p)) throw InvalidArgument("forge: " + p.str() + " is not prime");
  if (!is_admissible_prime(gamma, p)) {
    throw InvalidArgument("forge: prime " + p.str() + " is inadmissible for " + to_string(gamma));
  }
  if (epsilon <= 0 || epsilon >= 1) throw InvalidArgument("forge: epsilon must lie in (0,1)");

  const Ranks ranks = gamma.ranks();
  SubgroupDatum datum;
  datum.gamma = gamma;
  datum.p = p;
  datum.epsilon = epsilon;
  datum.ranks = ranks;
  datum.l = gamma.lamp().support_size() + 1;

  std::vector<BaseElement> avoid;
  if (!gamma.shift().is_identity()) avoid.push_back(gamma.shift());
  std::vector<BaseElement> support;
  for (const auto& entry : gamma.lamp().support()) support.push_back(entry.first);
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = i + 1; j < support.size(); ++j) avoid.push_back(difference(support[j], support[i]));
  }
  datum.k = minimal_exponent(p, avoid, Rational(datum.l) / epsilon, ranks.m);

  const CongruenceSubgroup h = datum.base_subgroup();
  std::set<BaseResidue> chosen;
  for (const auto& pos : support) chosen.insert(reduce(pos, h));
  ResidueOdometer odometer(ranks.m, h.modulus());
  while (chosen.size() < datum.l) {
    chosen.insert(odometer.value());
    odometer.next();
  }
  datum.E.assign(chosen.begin(), chosen.end());
  return datum;
}

bool contains(const SubgroupDatum& datum, const WreathElement& x) {
  if (x.ranks() != datum.ranks) throw InvalidArgument("contains: rank mismatch");
  const CongruenceSubgroup h = datum.base_subgroup();
  if (!in_kernel(x.shift(), h)) return false;
  return std::all_of(datum.E.begin(), datum.E.end(), [&](const BaseResidue& q) {
    return all_divisible(sum_over_coset(x, q, h, datum.ranks.d), datum.p);
  });
}

Integer index(const SubgroupDatum& datum) {
  return datum.base_index() * ipow(datum.p, datum.l * datum.ranks.d);
}

std::vector<std::string> validate(const SubgroupDatum& d) {
  std::vector<std::string> problems;
  auto fail = [&](std::string message) { problems.push_back(std::move(message)); };

  if (d.gamma.is_identity()) fail("gamma is the identity");
  if (d.gamma.ranks() != d.ranks) fail("gamma ranks differ from datum ranks");
  if (!is_prime(d.p)) fail("p is not prime");
  if (d.k < 1) fail("k must be >= 1");
  if (d.epsilon <= 0 || d.epsilon >= 1) fail("epsilon outside (0,1)");
  if (!problems.empty()) return problems;

  const CongruenceSubgroup h = d.base_subgroup();
  const auto& support = d.gamma.lamp().support();
  if (d.l <= support.size()) fail("l must exceed |supp(g)|");
  if (!(Rational(d.l) < d.epsilon * Rational(d.base_index()))) fail("l < epsilon [Lambda:Lambda_gamma] fails");
  if (d.E.size() != d.l) fail("|E| differs from l");
  for (std::size_t i = 0; i < d.E.size(); ++i) {
    const auto& q = d.E[i];
    bool canonical = q.rank() == d.ranks.m &&
                     std::all_of(q.coords().begin(), q.coords().end(),
                                 [&](const Integer& c) { return c >= 0 && c < h.modulus(); });
    if (!canonical) fail("E entry " + to_string(q) + " is not a canonical residue");
    if (i > 0 && !(d.E[i - 1] < q)) fail("E is not strictly sorted");
  }
  std::set<BaseResidue> seen;
  for (const auto& [pos, value] : support) {
    BaseResidue r = reduce(pos, h);
    if (!seen.insert(r).second) fail("two support points share the residue " + to_string(r));
    if (!std::binary_search(d.E.begin(), d.E.end(), r)) fail("residue " + to_string(r) + " of supp(g) not in E");
    if (all_divisible(value, d.p)) fail("lamp value " + to_string(value) + " lies in (pZ)^d");
  }
  if (!d.gamma.shift().is_identity() && in_kernel(d.gamma.shift(), h)) fail("delta lies in Lambda_gamma");
  return problems;
}

Rational default_epsilon(std::size_t i) { return Rational(1, ipow(Integer(2), i + 2)); }

EpsilonSchedule default_schedule() { return [](std::size_t i) { return default_epsilon(i); }; }

EpsilonSchedule fixed_schedule(Rational epsilon) {
  return [epsilon = std::move(epsilon)](std::size_t) { return epsilon; };
}

PrimeAssignment assign_primes(std::span<const WreathElement> gammas, const EpsilonSchedule& schedule) {
  PrimeAssignment out;
  std::set<Integer> used;
  std::set<WreathElement> seen;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const auto& gamma = gammas[i];
    if (gamma.is_identity()) throw InvalidArgument("assign_primes: identity in the list");
    if (!seen.insert(gamma).second) throw InvalidArgument("assign_primes: repeated element " + to_string(gamma));
    Integer p = 2;
    while (used.contains(p) || !is_admissible_prime(gamma, p)) p = next_prime(p);
    used.insert(p);
    out.push_back({gamma, p, schedule(i)});
  }
  return out;
}

std::vector<SubgroupDatum> forge_all(const PrimeAssignment& assignment) {
  std::vector<SubgroupDatum> out;
  out.reserve(assignment.size());
  for (const auto& entry : assignment) out.push_back(forge(entry.gamma, entry.prime, entry.epsilon));
  return out;
}

nlohmann::ordered_json to_json(const SubgroupDatum& d) {
  nlohmann::ordered_json j;
  j["gamma"] = to_string(d.gamma);
  if (auto small = to_u64(d.p)) {
    j["p"] = *small;
  } else {
    j["p"] = d.p.str();
  }
  j["k"] = d.k;
  j["l"] = d.l;
  auto residues = nlohmann::ordered_json::array();
  for (const auto& q : d.E) residues.push_back(to_string(q));
  j["E"] = std::move(residues);
  j["epsilon"] = to_string(d.epsilon);
  j["d"] = d.ranks.d;
  j["m"] = d.ranks.m;
  return j;
}

namespace {

BaseResidue parse_residue(const std::string& text, std::size_t m) {
  // Reuse the element parser on "{};(...)" so residues share its grammar.
  WreathElement probe = parse_element("{};" + text);
  if (probe.shift().rank() != m) throw ParseError("residue " + text + " has wrong rank", 0, 1);
  return BaseResidue(probe.shift().coords());
}

template <class T>
T field(const nlohmann::ordered_json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("datum: missing field '") + key + "'", 0, 0);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("datum: field '") + key + "' has the wrong type", 0, 0);
  }
}

}  // namespace

SubgroupDatum datum_from_json(const nlohmann::ordered_json& j) {
  SubgroupDatum d;
  d.ranks = {field<std::size_t>(j, "d"), field<std::size_t>(j, "m")};
  d.gamma = parse_element(field<std::string>(j, "gamma"), d.ranks);
  if (j.contains("p") && j.at("p").is_number_unsigned()) {
    d.p = Integer(j.at("p").get<std::uint64_t>());
  } else {
    d.p = parse_integer(field<std::string>(j, "p"));
  }
  d.k = field<std::size_t>(j, "k");
  d.l = field<std::size_t>(j, "l");
  for (const auto& q : field<std::vector<std::string>>(j, "E")) d.E.push_back(parse_residue(q, d.ranks.m));
  d.epsilon = parse_rational(field<std::string>(j, "epsilon"));
  return d;
}

}  // namespace allostery
