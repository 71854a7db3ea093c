// Acceptance run: one PASS/FAIL line per criterion, with wall time.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "allostery/castle.hpp"
#include "allostery/comparison.hpp"
#include "allostery/criterion.hpp"
#include "allostery/errors.hpp"
#include "allostery/non_af.hpp"
#include "allostery/verify.hpp"
#include "oracles.hpp"

using namespace allostery;
using oracle::lamp;
using json = nlohmann::ordered_json;

namespace {

const Ranks r11{1, 1};

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

json reparse(const json& j) { return json::parse(j.dump()); }

std::vector<WreathElement> punctured_ball(Ranks r, std::size_t radius) {
  std::vector<WreathElement> out;
  for (auto& e : ball(GeneratorSet(r), radius, 100000)) {
    if (!e.element.is_identity()) out.push_back(e.element);
  }
  return out;
}

SubgroupDatum forge_smallest(const WreathElement& g, const Rational& eps) {
  Integer p = 2;
  while (!is_admissible_prime(g, p)) p = next_prime(p);
  return forge(g, p, eps);
}

void index_formula(Outcome& o) {
  auto d = forge(lamp(r11, {{0, 1}}, 0), 2, Rational(1, 2));
  auto w = WindowSystem::make({d});
  const auto size = orbit(w, w.encode(w.identity_state()), 1000).size();
  o.expect(index(d) == 32, "closed-form index 32");
  o.expect(size == 32, "BFS orbit of 32 states");
  o.note << "index " << index(d) << ", orbit " << size;
}

void fixed_count_formula(Outcome& o) {
  std::mt19937_64 rng(2);
  std::size_t checked = 0;
  Integer smallest = 0, largest = 0;
  const std::vector<Rational> eps{Rational(1, 2), Rational(1, 3), Rational(1, 16), Rational(3, 4)};
  for (int trial = 0; checked < 12 && trial < 500; ++trial) {
    const Ranks r = std::vector<Ranks>{{1, 1}, {2, 1}, {1, 2}}[trial % 3];
    auto d = forge_smallest(oracle::random_gamma(rng, r), eps[trial % eps.size()]);
    if (index(d) > 100'000) continue;
    auto w = WindowSystem::make({d});
    const auto& s1 = w.generators()[w.generators().lamp_index(0)];
    const Integer formula = (d.base_index() - d.l) * ipow(d.p, d.l * d.ranks.d);
    o.expect(count_fixed_by_enumeration(s1, w, 100'000) == formula, "brute force vs formula for " + to_string(d.gamma));
    smallest = checked == 0 ? index(d) : std::min(smallest, index(d));
    largest = std::max(largest, index(d));
    ++checked;
  }
  o.expect(checked >= 10, "at least 10 data");
  o.note << checked << " data, indices " << smallest << " to " << largest;
}

void criterion_certificate(Outcome& o) {
  CriterionConfig config;
  config.state_budget = 4'000'000;
  auto gammas = punctured_ball(r11, 1);
  auto cert = verify_criterion(gammas, r11, fixed_schedule(Rational(1, 2)), config);
  o.expect(cert.valid(), "certificate valid");
  for (const auto& r : cert.records) o.expect(r.ok(), "per-gamma checks for " + to_string(r.datum.gamma));
  Rational product = 1;
  for (const auto& r : cert.records) product *= r.fixed_fraction;
  o.expect(cert.window_fraction == product, "window fraction equals per-level product");
  o.expect(cert.window_fraction_enumerated == cert.window_fraction, "exhaustive window count agrees");
  o.expect(cert.window_fraction >= Rational(1, 16), "window fraction >= (1/2)^|F|");
  o.expect(cert.stabilizer.ok(), "stabilizer witness");
  o.expect(verify_certificate(reparse(to_json(cert, config)), config.state_budget).valid, "independent re-verification");
  o.note << "|F| = " << cert.records.size() << ", window fraction " << to_string(cert.window_fraction) << " over "
         << WindowSystem::make(forge_all(assign_primes(gammas, fixed_schedule(Rational(1, 2)))), r11).size()
         << " states, transitivity by " << cert.transitivity.method;
}

/// A random element of A_gamma x| Lambda_gamma: random lamps near the origin,
/// then each E-class sum is cancelled at one position of that class.
WreathElement random_member(std::mt19937_64& rng, const SubgroupDatum& d) {
  const Ranks r = d.ranks;
  auto x = oracle::random_element(rng, r, 6, 4);
  LampConfig f = x.lamp();
  const Integer modulus = ipow(d.p, d.k);
  for (const auto& q : d.E) {
    LampVector sum(r.d);
    for (const auto& [pos, value] : f.support()) {
      bool member = true;
      for (std::size_t i = 0; i < r.m; ++i) member = member && floor_mod(pos[i], modulus) == q[i];
      if (!member) continue;
      for (std::size_t i = 0; i < r.d; ++i) sum[i] += value[i];
    }
    LampVector fix(r.d);
    for (std::size_t i = 0; i < r.d; ++i) fix[i] = -floor_mod(sum[i], d.p);
    f.add(BaseElement(q.coords()), fix);
  }
  std::vector<Integer> shift;
  for (std::size_t i = 0; i < r.m; ++i) shift.push_back(modulus * oracle::random_int(rng, -3, 3));
  return WreathElement(std::move(f), BaseElement(std::move(shift)));
}

void subgroup_invariance(Outcome& o) {
  std::mt19937_64 rng(4);
  std::size_t checks = 0, failures = 0;
  while (checks < 1000) {
    const Ranks r = std::vector<Ranks>{{1, 1}, {2, 1}, {1, 2}, {2, 2}}[checks % 4];
    auto d = forge_smallest(oracle::random_gamma(rng, r), Rational(1, 2));
    for (int i = 0; i < 10; ++i, ++checks) {
      auto x = random_member(rng, d);
      std::vector<Integer> mu;
      for (std::size_t j = 0; j < r.m; ++j) mu.push_back(ipow(d.p, d.k) * oracle::random_int(rng, -5, 5));
      auto lambda = WreathElement::pure_shift(r, BaseElement(std::move(mu)));
      const WreathElement pure_lamp(x.lamp(), BaseElement::zero(r.m));
      bool ok = contains(d, x) && contains(d, pure_lamp) && contains(d, lambda * pure_lamp * invert(lambda)) &&
                contains(d, lambda * x * invert(lambda));
      failures += ok ? 0 : 1;
    }
  }
  o.expect(failures == 0, "membership preserved");
  o.note << checks << " checks, " << failures << " failures";
}

void comparison_suite(Outcome& o) {
  std::mt19937_64 rng(5);
  const std::vector<WindowSystem> stages{
      WindowSystem::make({forge(lamp(r11, {}, 1), 3, Rational(1, 2))}),
      WindowSystem::make({forge(lamp(r11, {{0, 1}}, 0), 2, Rational(1, 2))}),
      WindowSystem::make({forge(lamp(r11, {{0, 1}}, 0), 2, Rational(1, 2)), forge(lamp(r11, {}, 1), 3, Rational(1, 2))}),
  };
  std::size_t verified = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& w = stages[trial % stages.size()];
    const auto n = w.size().convert_to<std::uint64_t>();
    std::vector<std::uint64_t> all(n);
    for (std::uint64_t i = 0; i < n; ++i) all[i] = i;
    const std::size_t b = 2 + rng() % (n - 2);
    const std::size_t a = 1 + rng() % (b - 1);
    std::shuffle(all.begin(), all.end(), rng);
    StateSet A = make_state_set({all.begin(), all.begin() + static_cast<std::ptrdiff_t>(a)});
    std::shuffle(all.begin(), all.end(), rng);
    StateSet B = make_state_set({all.begin(), all.begin() + static_cast<std::ptrdiff_t>(b)});
    auto c = comparison_certificate(A, B, w, 10'000);
    auto v = verify_certificate(reparse(to_json(c, w)), 10'000);
    verified += v.valid ? 1 : 0;
  }
  o.expect(verified == 50, "all certificates verify");
  o.note << verified << "/50 verified on stages of 9, 32 and 288 states";
}

void castle_suite(Outcome& o) {
  std::mt19937_64 rng(6);
  auto w = WindowSystem::make({forge(lamp(r11, {{0, 1}}, 0), 2, Rational(1, 2)), forge(lamp(r11, {}, 1), 3, Rational(1, 2))});
  std::vector<WreathElement> pool = punctured_ball(r11, 2);
  std::vector<WreathElement> gammas = punctured_ball(r11, 1);
  std::size_t holds = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto castle = random_castle(w, rng, pool, 10'000);
    auto audit = audit_castle(castle, gammas[trial % gammas.size()], w, 10'000);
    holds += audit.inequality_holds ? 1 : 0;
  }
  o.expect(holds == 100, "inequality in every audit");

  auto w9 = WindowSystem::make({forge(lamp(r11, {}, 1), 3, Rational(1, 2))});
  auto transversal = transversal_castle(w9, 0, 1000);
  const auto& s1 = w9.generators()[0];
  auto audit = audit_castle(transversal, s1, w9, 1000);
  o.expect(audit.defects[0] >= Rational(2, 3), "transversal defect >= 2/3");
  o.expect(audit.fixed_measure == Rational(2, 3), "mu(Fix s_1) = 2/3");
  o.note << holds << "/100 audits hold; transversal defect " << to_string(audit.defects[0]);
}

void inverse_system(Outcome& o) {
  auto a = forge(lamp(r11, {{0, 1}}, 0), 2, Rational(1, 2));
  auto b = forge(lamp(r11, {}, 1), 3, Rational(1, 2));
  auto c = forge(lamp(r11, {{0, -1}}, 0), 5, Rational(1, 2));
  std::vector<WindowSystem> chain{WindowSystem::make({a}), WindowSystem::make({a, b}), WindowSystem::make({a, b, c})};
  auto report = check_inverse_system(chain, 1'000'000);
  o.expect(report.identity_maps, "identity maps");
  o.expect(report.equivariant, "equivariance");
  o.expect(report.surjective, "surjectivity");
  o.expect(report.composition, "composition");
  o.expect(report.pushforward, "measure pushforward");
  o.note << "chain of " << chain[0].size() << ", " << chain[1].size() << ", " << chain[2].size() << " states";
}

void negative_controls(Outcome& o) {
  auto a = forge(lamp(r11, {{0, 1}}, 0), 2, Rational(1, 2));
  auto dup = forge(lamp(r11, {}, 1), 2, Rational(1, 2));
  auto t = certify_transitivity(WindowSystem::unchecked({a, dup}, r11), 1'000'000);
  o.expect(!t.transitive, "duplicate-prime window is not transitive");
  o.note << "duplicate primes: orbit " << t.orbit_size << " of " << 32 * 8;

  auto tight = a;
  tight.epsilon = 1 - Rational(3, 4) - Rational(1, 100);
  auto cert = certify_window({tight}, r11, CriterionConfig{});
  o.expect(cert.status() == "invalid", "epsilon below achievable fraction is rejected");
  o.expect(!verify_certificate(reparse(to_json(cert, CriterionConfig{}))).valid, "verifier rejects it too");
  o.note << "; tight epsilon: " << cert.status();

  auto w9 = WindowSystem::make({forge(lamp(r11, {}, 1), 3, Rational(1, 2))});
  auto castle = transversal_castle(w9, 0, 1000);
  castle.levels.push_back(CastleLevel{{0}, {WreathElement::identity(r11)}});
  try {
    audit_castle(castle, w9.generators()[0], w9, 1000);
    o.expect(false, "overlapping castle rejected");
  } catch (const MalformedCastle& e) {
    o.expect(!e.witness().empty(), "overlap witness present");
    o.note << "; overlap witness: " << e.witness();
  }
}

void non_af(Outcome& o) {
  auto gammas = punctured_ball(r11, 1);
  gammas.resize(3);
  auto data = forge_all(assign_primes(gammas, fixed_schedule(Rational(1, 2))));
  auto report = non_af_report(data, r11, CriterionConfig{});
  o.expect(report.b >= Rational(1, 8), "b >= 1/8");
  o.expect(report.b_enumerated == report.b, "exhaustive count agrees");
  std::size_t verified = 0;
  for (const auto& step : report.chain) {
    if (step.kind == "verified") {
      ++verified;
      o.expect(step.holds, step.statement);
    }
  }
  auto v = verify_certificate(reparse(to_json(report, CriterionConfig{})));
  o.expect(v.valid && v.agrees(), "re-verification from JSON");
  o.note << "b = " << to_string(report.b) << ", " << verified << " verified chain steps";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"index formula", index_formula},
      {"fixed-count formula", fixed_count_formula},
      {"criterion certificate", criterion_certificate},
      {"subgroup invariance", subgroup_invariance},
      {"comparison", comparison_suite},
      {"castle audit", castle_suite},
      {"inverse-system laws", inverse_system},
      {"negative controls", negative_controls},
      {"non-almost-finiteness report", non_af},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << " (" << ms
              << " ms): " << o.note.str() << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
