#include "allostery/non_af.hpp"

#include <algorithm>
#include <sstream>

#include "allostery/errors.hpp"

namespace allostery {

namespace {

ChainStep verified(std::string statement, const Rational& lhs, std::string relation, const Rational& rhs) {
  bool holds = false;
  if (relation == "=") holds = lhs == rhs;
  if (relation == ">=") holds = lhs >= rhs;
  if (relation == ">") holds = lhs > rhs;
  if (relation == "<=") holds = lhs <= rhs;
  return {"verified", std::move(statement), to_string(lhs), std::move(relation), to_string(rhs), holds};
}

ChainStep cited(std::string statement) { return {"cited", std::move(statement), "", "", "", true}; }

bool follows_default_schedule(const std::vector<SubgroupDatum>& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].epsilon != default_epsilon(i)) return false;
  }
  return !data.empty();
}

}  // namespace

bool NonAFReport::ok() const {
  return criterion.valid() && b > 0 &&
         std::all_of(chain.begin(), chain.end(), [](const ChainStep& s) { return s.holds; });
}

NonAFReport non_af_report(std::vector<SubgroupDatum> data, Ranks ranks, const CriterionConfig& config) {
  NonAFReport r;
  r.criterion = certify_window(data, ranks, config);
  if (!r.criterion.valid()) {
    throw InvalidArgument("non_af_report: criterion certificate is " + r.criterion.status());
  }
  const WindowSystem window = WindowSystem::make(data, ranks);
  const WreathElement s1 = window.generators()[window.generators().lamp_index(0)];

  r.b = fixed_fraction(s1, window);
  if (window.size() <= config.state_budget) {
    r.b_enumerated = Rational(count_fixed_by_enumeration(s1, window, config.state_budget), window.size());
  }
  r.product_bound = r.criterion.product_lower_bound;
  for (std::size_t k = 1; k <= data.size(); ++k) {
    auto prefix = WindowSystem::make({data.begin(), data.begin() + static_cast<std::ptrdiff_t>(k)}, ranks);
    r.stage_fractions.push_back(fixed_fraction(s1, prefix));
  }

  Rational per_level = 1;
  for (const auto& d : data) per_level *= 1 - Rational(Integer(d.l), d.base_index());

  r.chain.push_back(verified("mu_F(Fix s_1) equals the product over the window of 1 - l/p^(km)", r.b, "=", per_level));
  if (r.b_enumerated) {
    r.chain.push_back(verified("exhaustive count of Fix s_1 over the stage agrees", *r.b_enumerated, "=", r.b));
  }
  r.chain.push_back(verified("mu_F(Fix s_1) >= product over the window of (1 - epsilon)", r.b, ">=", r.product_bound));
  r.chain.push_back(verified("product over the window of (1 - epsilon) is positive", r.product_bound, ">", 0));
  for (std::size_t k = 1; k < r.stage_fractions.size(); ++k) {
    r.chain.push_back(verified("stage fraction does not increase from prefix " + std::to_string(k) + " to " +
                                   std::to_string(k + 1),
                               r.stage_fractions[k - 1], ">=", r.stage_fractions[k]));
  }
  if (follows_default_schedule(data)) {
    r.family_bound = Rational(1, 2);
    r.chain.push_back(verified("epsilons are 2^-(i+2), so every partial product of (1 - epsilon) is >= 1 - sum epsilon "
                               "= 1/2",
                               *r.family_bound, ">", 0));
  } else {
    r.chain.push_back(cited("the epsilons are not the summable default schedule; only the stage bound is certified"));
  }
  r.chain.push_back(cited("Fix s_1 on the inverse limit is the decreasing intersection of the pulled-back stage sets, "
                          "so its measure is the limit of the stage fractions and is at least the product of "
                          "(1 - epsilon) over the whole family"));
  r.chain.push_back(cited("for a castle with K = {s_1^-1}, a point of a floor s V_i fixed by s_1 forces s outside "
                          "K S_i, hence mu(Fix s_1) <= sum_i |K S_i symdiff S_i| mu(V_i) <= max_i defect_i"));

  std::ostringstream conclusion;
  conclusion << "every castle on this stage for K = {s_1^-1} has a tower with Folner defect >= " << to_string(r.b)
             << ", so no (K, eps)-castle exists for eps < " << to_string(r.b);
  if (r.family_bound) {
    conclusion << "; on the inverse limit mu(Fix s_1) >= " << to_string(*r.family_bound)
               << " > 0, so the action is not essentially free and hence not almost finite";
  } else {
    conclusion << "; the limit statement needs a summable epsilon family";
  }
  r.conclusion = conclusion.str();
  return r;
}

nlohmann::ordered_json to_json(const NonAFReport& r, const CriterionConfig& config) {
  using json = nlohmann::ordered_json;
  json j;
  j["kind"] = "non_af_report";
  j["v"] = 1;
  j["inputs"] = {{"d", r.criterion.ranks.d}, {"m", r.criterion.ranks.m}, {"budget_states", config.state_budget}};
  json window = json::array();
  for (const auto& rec : r.criterion.records) window.push_back(to_json(rec.datum));
  j["window"] = std::move(window);
  j["criterion_status"] = r.criterion.status();
  j["b"] = to_string(r.b);
  j["b_enumerated"] = r.b_enumerated ? json(to_string(*r.b_enumerated)) : json(nullptr);
  j["product_bound"] = to_string(r.product_bound);
  json stages = json::array();
  for (const auto& q : r.stage_fractions) stages.push_back(to_string(q));
  j["stage_fractions"] = std::move(stages);
  j["family_bound"] = r.family_bound ? json(to_string(*r.family_bound)) : json(nullptr);
  json chain = json::array();
  for (const auto& s : r.chain) {
    json step = {{"kind", s.kind}, {"statement", s.statement}};
    if (s.kind == "verified") {
      step["lhs"] = s.lhs;
      step["relation"] = s.relation;
      step["rhs"] = s.rhs;
    }
    step["holds"] = s.holds;
    chain.push_back(std::move(step));
  }
  j["chain"] = std::move(chain);
  j["conclusion"] = r.conclusion;
  j["status"] = r.ok() ? "valid" : "invalid";
  return j;
}

std::string markdown_summary(const NonAFReport& r) {
  std::ostringstream out;
  out << "| gamma | prime | index | S-fixed fraction | 1 - epsilon |\n";
  out << "|---|---|---|---|---|\n";
  for (const auto& rec : r.criterion.records) {
    out << "| `" << to_string(rec.datum.gamma) << "` | " << rec.datum.p << " | " << rec.index << " | "
        << to_string(rec.fixed_fraction) << " | " << to_string(Rational(1 - rec.datum.epsilon)) << " |\n";
  }
  out << "\n";
  out << "- stage fraction fixed by s_1: `" << to_string(r.b) << "`\n";
  out << "- product of (1 - epsilon): `" << to_string(r.product_bound) << "`\n";
  if (r.family_bound) out << "- bound over the whole family: `" << to_string(*r.family_bound) << "`\n";
  out << "- conclusion: " << r.conclusion << "\n";
  return out.str();
}

}  // namespace allostery
