// Verifiers rebuild every quantity from the serialized window data; they do
// not call the certificate producers.
#include "allostery/verify.hpp"

#include <algorithm>
#include <set>

#include "allostery/atoms.hpp"
#include "allostery/errors.hpp"
#include "allostery/forge.hpp"

namespace allostery {

namespace {

using json = nlohmann::ordered_json;

class Checker {
 public:
  explicit Checker(Verdict& v) : v_(v) {}

  void require(bool condition, const std::string& message) {
    if (!condition) v_.failures.push_back(message);
  }
  void same(const json& j, const char* key, const std::string& expected, const std::string& context = {}) {
    std::string recorded = j.contains(key) && j.at(key).is_string() ? j.at(key).get<std::string>() : "<missing>";
    require(recorded == expected, context + key + ": recorded " + recorded + ", recomputed " + expected);
  }

 private:
  Verdict& v_;
};

const json& at(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("certificate: missing field '") + key + "'", 0, 0);
  return j.at(key);
}

std::string str(const json& j, const char* key) {
  const json& v = at(j, key);
  if (!v.is_string()) throw ParseError(std::string("certificate: field '") + key + "' must be a string", 0, 0);
  return v.get<std::string>();
}

Ranks ranks_of(const json& j) {
  const json& in = at(j, "inputs");
  return {at(in, "d").get<std::size_t>(), at(in, "m").get<std::size_t>()};
}

std::vector<SubgroupDatum> window_of(const json& j) {
  std::vector<SubgroupDatum> out;
  for (const auto& d : at(j, "window")) out.push_back(datum_from_json(d));
  return out;
}

StateSet states_of(const json& list, const WindowSystem& w) {
  std::vector<std::uint64_t> out;
  for (const auto& s : list) out.push_back(w.parse_index(s.get<std::string>()));
  return out;
}

// Lamp sum of x over the residue class q, computed directly from positions.
LampVector class_sum(const WreathElement& x, const BaseResidue& q, const Integer& modulus, std::size_t d) {
  LampVector sum(d);
  for (const auto& [pos, value] : x.lamp().support()) {
    bool member = true;
    for (std::size_t i = 0; i < pos.rank() && member; ++i) member = floor_mod(pos[i], modulus) == q[i];
    if (!member) continue;
    for (std::size_t i = 0; i < d; ++i) sum[i] += value[i];
  }
  return sum;
}

bool gamma_outside_subgroup(const SubgroupDatum& d) {
  const Integer modulus = ipow(d.p, d.k);
  for (const auto& c : d.gamma.shift().coords()) {
    if (floor_mod(c, modulus) != 0) return true;
  }
  for (const auto& q : d.E) {
    auto sum = class_sum(d.gamma, q, modulus, d.ranks.d);
    if (std::any_of(sum.begin(), sum.end(), [&](const Integer& c) { return c % d.p != 0; })) return true;
  }
  return false;
}

void check_datum(Checker& c, const SubgroupDatum& d, const std::string& ctx) {
  const Integer modulus = ipow(d.p, d.k);
  const Integer base_index = ipow(modulus, d.ranks.m);
  const auto& support = d.gamma.lamp().support();
  c.require(!d.gamma.is_identity(), ctx + "gamma is the identity");
  c.require(is_prime(d.p), ctx + "p is not prime");
  c.require(d.epsilon > 0 && d.epsilon < 1, ctx + "epsilon outside (0,1)");
  c.require(d.l > support.size(), ctx + "l <= |supp g|");
  c.require(Rational(Integer(d.l)) < d.epsilon * Rational(base_index), ctx + "l >= epsilon p^(km)");
  c.require(d.E.size() == d.l, ctx + "|E| != l");
  c.require(std::is_sorted(d.E.begin(), d.E.end()) && std::adjacent_find(d.E.begin(), d.E.end()) == d.E.end(),
            ctx + "E not strictly sorted");
  std::set<std::vector<Integer>> residues;
  for (const auto& [pos, value] : support) {
    std::vector<Integer> r;
    for (const auto& x : pos.coords()) r.push_back(floor_mod(x, modulus));
    c.require(residues.insert(r).second, ctx + "support points share a residue");
    c.require(std::binary_search(d.E.begin(), d.E.end(), BaseResidue(r)), ctx + "support residue missing from E");
    c.require(std::any_of(value.begin(), value.end(), [&](const Integer& v) { return v % d.p != 0; }),
              ctx + "lamp value in (pZ)^d");
  }
  if (!d.gamma.shift().is_identity()) {
    c.require(std::any_of(d.gamma.shift().coords().begin(), d.gamma.shift().coords().end(),
                          [&](const Integer& x) { return x % modulus != 0; }),
              ctx + "delta in Lambda_gamma");
  }
}

// S-fixed fraction of one level by exhaustive generic action.
Rational level_s_fixed_by_brute_force(const FiniteLevelSystem& level) {
  const auto n = level.size().convert_to<std::uint64_t>();
  const auto& gens = level.generators();
  std::uint64_t fixed = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    CosetState s = level.decode(i);
    bool all = true;
    for (std::size_t a = 0; a < gens.ranks().d && all; ++a) all = level.act(gens[gens.lamp_index(a)], s) == s;
    if (all) ++fixed;
  }
  return Rational(Integer(fixed), level.size());
}

struct WindowFacts {
  Rational product_bound = 1;
  Rational window_fraction = 1;
};

WindowFacts check_window(Checker& c, const json& j, const std::vector<SubgroupDatum>& data, Ranks ranks,
                         std::size_t budget, const json* records) {
  WindowFacts facts;
  std::set<Integer> primes;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& d = data[i];
    const std::string ctx = "gamma " + to_string(d.gamma) + ": ";
    c.require(d.ranks == ranks, ctx + "rank mismatch");
    c.require(primes.insert(d.p).second, ctx + "prime " + d.p.str() + " repeats");
    check_datum(c, d, ctx);
    c.require(gamma_outside_subgroup(d), ctx + "gamma lies in its subgroup");

    FiniteLevelSystem level(d);
    c.require(level.act(d.gamma, level.identity_state()) != level.identity_state(), ctx + "gamma fixes the identity coset");
    const Integer base_index = ipow(d.p, d.k * ranks.m);
    const Rational fraction = 1 - Rational(Integer(d.l), base_index);
    if (level.size() <= budget) {
      c.require(level_s_fixed_by_brute_force(level) == fraction, ctx + "closed-form fixed fraction disagrees with enumeration");
    }
    c.require(fraction >= 1 - d.epsilon, ctx + "fixed fraction below 1 - epsilon");
    facts.product_bound *= 1 - d.epsilon;
    facts.window_fraction *= fraction;
    if (records) {
      const json& rec = records->at(i);
      c.same(rec, "index", (base_index * ipow(d.p, d.l * ranks.d)).str(), ctx);
      c.same(rec, "fixed_fraction", to_string(fraction), ctx);
    }
  }
  c.require(facts.product_bound > 0, "product of (1 - epsilon) is not positive");
  c.require(facts.window_fraction >= facts.product_bound, "window fraction below product of (1 - epsilon)");
  c.same(j, "product_lower_bound", to_string(facts.product_bound));
  return facts;
}

void check_stage(Checker& c, const std::vector<SubgroupDatum>& data, Ranks ranks, const WindowFacts& facts,
                 std::size_t budget) {
  const WindowSystem window = WindowSystem::unchecked(data, ranks);
  if (window.size() <= budget) {
    const auto n = window.size().convert_to<std::uint64_t>();
    std::uint64_t fixed = 0;
    for (std::uint64_t x = 0; x < n; ++x) {
      bool all = true;
      for (std::size_t a = 0; a < ranks.d && all; ++a) {
        all = window.apply_generator(window.generators().lamp_index(a), x, budget) == x;
      }
      if (all) ++fixed;
    }
    c.require(Rational(Integer(fixed), window.size()) == facts.window_fraction,
              "window S-fixed count disagrees with the product of level fractions");
    Orbit o = orbit(window, window.encode(window.identity_state()), budget);
    c.require(Integer(o.size()) == window.size(), "stage is not transitive (BFS)");
  } else {
    bool factors_ok = true;
    for (std::size_t i = 0; i < window.level_count(); ++i) {
      if (window.level(i).size() > budget) {
        factors_ok = false;
        c.require(false, "transitivity unchecked: level exceeds budget");
        break;
      }
      auto single = WindowSystem::unchecked({data[i]}, ranks);
      factors_ok = factors_ok && Integer(orbit(single, 0, budget).size()) == single.size();
      for (std::size_t k = i + 1; k < window.level_count(); ++k) {
        factors_ok = factors_ok && gcd(window.level(i).size(), window.level(k).size()) == 1;
      }
    }
    c.require(factors_ok, "stage is not transitive (coprime-factor check)");
  }

  const auto y = window.identity_state();
  for (const auto& d : data) c.require(window.act(d.gamma, y) != y, "gamma " + to_string(d.gamma) + " fixes y_F");
}

void verify_criterion_json(Checker& c, const json& j, std::size_t budget) {
  const Ranks ranks = ranks_of(j);
  const auto data = window_of(j);
  const json& records = at(j, "records");
  if (!records.is_array() || records.size() != data.size()) throw ParseError("criterion: records/window size mismatch", 0, 0);
  WindowFacts facts = check_window(c, j, data, ranks, budget, &records);
  c.same(j, "window_fraction", to_string(facts.window_fraction));

  check_stage(c, data, ranks, facts, budget);
}

void verify_datum_json(Checker& c, const json& j) {
  const SubgroupDatum d = datum_from_json(at(j, "datum"));
  check_datum(c, d, "");
  c.require(gamma_outside_subgroup(d), "gamma lies in its subgroup");
  c.same(j, "index", (ipow(d.p, d.k * d.ranks.m) * ipow(d.p, d.l * d.ranks.d)).str());
}

void verify_comparison_json(Checker& c, const json& j, std::size_t budget) {
  const Ranks ranks = ranks_of(j);
  const WindowSystem w = WindowSystem::make(window_of(j), ranks);
  w.require_enumerable(budget, "verify comparison");
  const StateSet A = make_state_set(states_of(at(j, "A"), w));
  const StateSet B = make_state_set(states_of(at(j, "B"), w));
  c.require(!A.empty() && A.size() < B.size(), "measure condition |A| < |B| fails");

  std::vector<std::uint64_t> covered;
  std::set<std::uint64_t> hit;
  for (const auto& piece : at(j, "pieces")) {
    const StateSet C = make_state_set(states_of(at(piece, "piece"), w));
    const Word word = at(piece, "word").get<Word>();
    for (std::size_t g : word) {
      if (g >= w.generators().size()) throw ParseError("comparison: generator index out of range", 0, 0);
    }
    covered.insert(covered.end(), C.begin(), C.end());
    for (std::uint64_t s : C) {
      std::uint64_t t = w.apply_word(word, s, budget);
      c.require(std::binary_search(B.begin(), B.end(), t), "image of " + w.index_to_string(s) + " leaves B");
      c.require(hit.insert(t).second, "images overlap at " + w.index_to_string(t));
    }
  }
  std::sort(covered.begin(), covered.end());
  c.require(std::adjacent_find(covered.begin(), covered.end()) == covered.end(), "pieces overlap");
  c.require(make_state_set(covered) == A, "pieces do not partition A");
}

void verify_castle_json(Checker& c, const json& j, std::size_t budget) {
  const Ranks ranks = ranks_of(j);
  const WindowSystem w = WindowSystem::unchecked(window_of(j), ranks);
  w.require_enumerable(budget, "verify castle");
  const WreathElement gamma = parse_element(str(j, "gamma"), ranks);
  c.require(!gamma.is_identity(), "gamma is the identity");
  const auto n = w.size().convert_to<std::uint64_t>();
  const WreathElement gamma_inverse = invert(gamma);

  std::vector<int> floors(n, 0);
  Rational bound = 0;
  for (const auto& tower : at(j, "castle")) {
    const StateSet V = make_state_set(states_of(at(tower, "V"), w));
    std::set<WreathElement> S;
    for (const auto& s : at(tower, "S")) S.insert(parse_element(s.get<std::string>(), ranks));
    c.require(S.size() == at(tower, "S").size(), "repeated shape element");
    for (const auto& s : S) {
      for (std::uint64_t v : V) ++floors[w.apply(s, v)];
    }
    std::size_t sym = 0;
    std::set<WreathElement> KS;
    for (const auto& s : S) KS.insert(multiply(gamma_inverse, s));
    std::vector<WreathElement> diff;
    std::set_symmetric_difference(KS.begin(), KS.end(), S.begin(), S.end(), std::back_inserter(diff));
    sym = diff.size();
    c.same(tower, "symmetric_difference", std::to_string(sym));
    bound += Rational(Integer(sym) * Integer(V.size()), w.size());
  }
  for (std::uint64_t s = 0; s < n; ++s) {
    c.require(floors[s] == 1, floors[s] == 0 ? "state " + w.index_to_string(s) + " uncovered"
                                             : "state " + w.index_to_string(s) + " lies in several floors");
  }
  std::uint64_t fixed = 0;
  for (std::uint64_t s = 0; s < n; ++s) fixed += w.apply(gamma, s) == s ? 1 : 0;
  const Rational fixed_measure(Integer(fixed), w.size());
  c.same(j, "fixed_measure", to_string(fixed_measure));
  c.same(j, "bound", to_string(bound));
  c.require(fixed_measure <= bound, "mu(Fix gamma) exceeds the castle bound");
}

void verify_non_af_json(Checker& c, const json& j, std::size_t budget) {
  const Ranks ranks = ranks_of(j);
  const auto data = window_of(j);
  WindowFacts facts = check_window(c, j.contains("product_lower_bound") ? j : json{{"product_lower_bound", str(j, "product_bound")}},
                                   data, ranks, budget, nullptr);
  c.same(j, "product_bound", to_string(facts.product_bound));
  check_stage(c, data, ranks, facts, budget);

  const WindowSystem w = WindowSystem::unchecked(data, ranks);
  const WreathElement s1 = w.generators()[w.generators().lamp_index(0)];
  Rational b = 1;
  for (std::size_t i = 0; i < w.level_count(); ++i) b *= Rational(w.level(i).fixed_count(s1), w.level(i).size());
  if (w.size() <= budget) {
    std::uint64_t fixed = 0;
    const auto n = w.size().convert_to<std::uint64_t>();
    for (std::uint64_t x = 0; x < n; ++x) fixed += w.apply_generator(w.generators().lamp_index(0), x, budget) == x ? 1 : 0;
    c.require(Rational(Integer(fixed), w.size()) == b, "exhaustive Fix s_1 count disagrees");
  }
  c.same(j, "b", to_string(b));
  c.require(b > 0, "b is not positive");
  c.require(b >= facts.product_bound, "b below product of (1 - epsilon)");

  const json& stages = at(j, "stage_fractions");
  Rational previous = 1;
  Rational prefix = 1;
  for (std::size_t k = 0; k < data.size(); ++k) {
    prefix *= Rational(w.level(k).fixed_count(s1), w.level(k).size());
    c.require(k < stages.size() && stages.at(k).get<std::string>() == to_string(prefix),
              "stage fraction " + std::to_string(k + 1) + " differs");
    c.require(prefix <= previous, "stage fractions increase");
    previous = prefix;
  }

  for (const auto& step : at(j, "chain")) {
    if (str(step, "kind") != "verified") continue;
    const Rational lhs = parse_rational(str(step, "lhs"));
    const Rational rhs = parse_rational(str(step, "rhs"));
    const std::string rel = str(step, "relation");
    bool holds = (rel == "=" && lhs == rhs) || (rel == ">=" && lhs >= rhs) || (rel == ">" && lhs > rhs) ||
                 (rel == "<=" && lhs <= rhs);
    c.require(holds, "chain step fails: " + str(step, "statement"));
  }
  if (!at(j, "family_bound").is_null()) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      c.require(data[i].epsilon == Rational(1, ipow(Integer(2), i + 2)), "family bound claimed without the default schedule");
    }
  }
}

}  // namespace

Verdict verify_certificate(const json& j, std::size_t budget) {
  Verdict v;
  v.kind = str(j, "kind");
  v.recorded_status = str(j, "status");
  if (!at(j, "v").is_number_integer() || at(j, "v").get<int>() != 1) throw ParseError("certificate: unsupported version", 0, 0);
  Checker c(v);
  try {
    if (v.kind == "subgroup_datum") {
      verify_datum_json(c, j);
    } else if (v.kind == "criterion") {
      verify_criterion_json(c, j, budget);
    } else if (v.kind == "comparison") {
      verify_comparison_json(c, j, budget);
    } else if (v.kind == "castle_audit") {
      verify_castle_json(c, j, budget);
    } else if (v.kind == "non_af_report") {
      verify_non_af_json(c, j, budget);
    } else {
      throw ParseError("certificate: unknown kind '" + v.kind + "'", 0, 0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("certificate: ") + e.what(), 0, 0);
  }
  v.valid = v.failures.empty();
  return v;
}

}  // namespace allostery
