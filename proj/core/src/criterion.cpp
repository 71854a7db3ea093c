#include "allostery/criterion.hpp"

#include <algorithm>

#include "allostery/errors.hpp"

namespace allostery {

bool GammaRecord::ok() const {
  bool cross_check = !fixed_fraction_enumerated || *fixed_fraction_enumerated == fixed_fraction;
  return datum_problems.empty() && gamma_outside && gamma_moves_identity_coset && fraction_bound && cross_check;
}

bool CriterionCertificate::valid() const {
  return partial.empty() && distinct_primes && window_matches_product && window_bound && stabilizer.ok() &&
         transitivity.transitive && product_lower_bound > 0 &&
         std::all_of(records.begin(), records.end(), [](const GammaRecord& r) { return r.ok(); });
}

std::string CriterionCertificate::status() const {
  if (valid()) return "valid";
  // Only report partial when nothing that was checked failed.
  CriterionCertificate checked = *this;
  checked.partial.clear();
  if (transitivity.method == "unchecked") checked.transitivity.transitive = true;
  return !partial.empty() && checked.valid() ? "partial" : "invalid";
}

TransitivityResult certify_transitivity(const WindowSystem& w, std::size_t budget) {
  TransitivityResult result;
  if (w.size() <= budget) {
    Orbit o = orbit(w, w.encode(w.identity_state()), budget);
    result.method = "bfs";
    result.orbit_size = o.size();
    result.transitive = result.orbit_size == w.size();
    return result;
  }
  for (std::size_t i = 0; i < w.level_count(); ++i) {
    if (w.level(i).size() > budget) {
      result.method = "unchecked";
      return result;
    }
  }
  result.method = "coprime-factors";
  result.transitive = true;
  for (std::size_t i = 0; i < w.level_count(); ++i) {
    auto single = WindowSystem::unchecked({w.level(i).datum()}, w.ranks());
    result.transitive = result.transitive && is_transitive(single, budget);
    for (std::size_t j = i + 1; j < w.level_count(); ++j) {
      result.transitive = result.transitive && gcd(w.level(i).size(), w.level(j).size()) == 1;
    }
  }
  if (result.transitive) result.orbit_size = w.size();
  return result;
}

CriterionCertificate certify_window(std::vector<SubgroupDatum> data, Ranks ranks, const CriterionConfig& config) {
  CriterionCertificate cert;
  cert.ranks = ranks;
  const WindowSystem window = WindowSystem::unchecked(data, ranks);
  cert.distinct_primes = window.has_distinct_primes();
  cert.product_lower_bound = 1;

  Rational product_of_levels = 1;
  for (std::size_t i = 0; i < window.level_count(); ++i) {
    const FiniteLevelSystem& level = window.level(i);
    GammaRecord r;
    r.datum = level.datum();
    r.index = level.size();
    r.datum_problems = validate(r.datum);
    r.gamma_outside = !contains(r.datum, r.datum.gamma);
    r.gamma_moves_identity_coset = level.state_of(r.datum.gamma) != level.identity_state();
    r.fixed_fraction = Rational(level.s_fixed_count(), level.size());
    if (level.size() <= config.state_budget) {
      auto single = WindowSystem::unchecked({r.datum}, ranks);
      r.fixed_fraction_enumerated = s_fixed_fraction_by_enumeration(single, config.state_budget);
    }
    r.fraction_bound = r.fixed_fraction >= 1 - r.datum.epsilon;
    cert.product_lower_bound *= 1 - r.datum.epsilon;
    product_of_levels *= r.fixed_fraction;
    cert.records.push_back(std::move(r));
  }

  cert.window_fraction = s_fixed_fraction(window);
  if (window.size() <= config.state_budget) {
    cert.window_fraction_enumerated = s_fixed_fraction_by_enumeration(window, config.state_budget);
  }
  cert.window_matches_product =
      cert.window_fraction == product_of_levels &&
      (!cert.window_fraction_enumerated || *cert.window_fraction_enumerated == cert.window_fraction);
  cert.window_bound = cert.window_fraction >= cert.product_lower_bound;

  cert.stabilizer = stabilizer_witness(window, config.stabilizer_radius, config.ball_budget);
  cert.transitivity = certify_transitivity(window, config.state_budget);
  if (cert.transitivity.method == "unchecked") cert.partial.push_back("transitivity");
  return cert;
}

CriterionCertificate verify_criterion(std::span<const WreathElement> gammas, Ranks ranks,
                                      const EpsilonSchedule& schedule, const CriterionConfig& config) {
  for (const auto& g : gammas) {
    if (g.ranks() != ranks) throw InvalidArgument("verify_criterion: gamma ranks differ from configuration");
  }
  return certify_window(forge_all(assign_primes(gammas, schedule)), ranks, config);
}

nlohmann::ordered_json to_json(const CriterionCertificate& c, const CriterionConfig& config) {
  using json = nlohmann::ordered_json;
  json j;
  j["kind"] = "criterion";
  j["v"] = 1;
  j["inputs"] = {{"d", c.ranks.d},
                 {"m", c.ranks.m},
                 {"budget_states", config.state_budget},
                 {"stabilizer_radius", config.stabilizer_radius}};
  json window = json::array();
  json records = json::array();
  for (const auto& r : c.records) {
    window.push_back(to_json(r.datum));
    json rec;
    rec["gamma"] = to_string(r.datum.gamma);
    rec["p"] = r.datum.p.str();
    rec["epsilon"] = to_string(r.datum.epsilon);
    rec["index"] = r.index.str();
    rec["datum_problems"] = r.datum_problems;
    rec["gamma_outside"] = r.gamma_outside;
    rec["gamma_moves_identity_coset"] = r.gamma_moves_identity_coset;
    rec["fixed_fraction"] = to_string(r.fixed_fraction);
    rec["fixed_fraction_enumerated"] =
        r.fixed_fraction_enumerated ? json(to_string(*r.fixed_fraction_enumerated)) : json(nullptr);
    rec["one_minus_epsilon"] = to_string(Rational(1 - r.datum.epsilon));
    rec["fraction_bound"] = r.fraction_bound;
    records.push_back(std::move(rec));
  }
  j["window"] = std::move(window);
  j["records"] = std::move(records);
  j["distinct_primes"] = c.distinct_primes;
  j["product_lower_bound"] = to_string(c.product_lower_bound);
  Integer size = 1;
  for (const auto& r : c.records) size *= r.index;
  j["window_size"] = size.str();
  j["window_fraction"] = to_string(c.window_fraction);
  j["window_fraction_enumerated"] =
      c.window_fraction_enumerated ? json(to_string(*c.window_fraction_enumerated)) : json(nullptr);
  j["window_matches_product"] = c.window_matches_product;
  j["window_bound"] = c.window_bound;
  j["stabilizer"] = {{"radius", c.stabilizer.ball_radius},
                     {"ball_size", c.stabilizer.ball_size},
                     {"movers", c.stabilizer.movers},
                     {"fixers", c.stabilizer.fixers},
                     {"fixing_elements", c.stabilizer.fixing_elements},
                     {"window_gamma_moves", c.stabilizer.window_gamma_moves},
                     {"identity_fixed", c.stabilizer.identity_fixed}};
  j["transitivity"] = {{"transitive", c.transitivity.transitive},
                       {"method", c.transitivity.method},
                       {"orbit_size", c.transitivity.orbit_size.str()}};
  j["partial"] = c.partial;
  j["status"] = c.status();
  return j;
}

}  // namespace allostery
