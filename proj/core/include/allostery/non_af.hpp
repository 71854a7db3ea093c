#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "allostery/criterion.hpp"

namespace allostery {

/// One link of the argument. "verified" links carry exact rationals and a
/// relation that a reader can re-check; "cited" links are the general
/// statements applied to them.
struct ChainStep {
  std::string kind;  ///< "verified" or "cited"
  std::string statement;
  std::string lhs;
  std::string relation;  ///< "=", ">=", ">", "<=" or empty for cited steps
  std::string rhs;
  bool holds = true;
};

struct NonAFReport {
  CriterionCertificate criterion;
  /// mu_F(Fix s_1): exact fraction of the stage fixed by s_1.
  Rational b;
  std::optional<Rational> b_enumerated;
  Rational product_bound;  ///< product over the window of (1 - epsilon)
  /// Fix(s_1) fractions along the prefix windows F_1 <= F_2 <= ... <= F.
  std::vector<Rational> stage_fractions;
  /// Lower bound for the product of (1 - epsilon) over the whole family when
  /// the window's epsilons are 2^{-(i+2)} in order; absent otherwise.
  std::optional<Rational> family_bound;
  std::vector<ChainStep> chain;
  std::string conclusion;

  bool ok() const;
};

/// Certifies the window, then assembles the bound for Fix(s_1) and the
/// argument that no castle can have small Folner defect for K = {s_1^{-1}}.
/// Throws InvalidArgument when the criterion certificate is not valid.
NonAFReport non_af_report(std::vector<SubgroupDatum> data, Ranks ranks, const CriterionConfig& config);

nlohmann::ordered_json to_json(const NonAFReport& r, const CriterionConfig& config);

/// Per-gamma summary table (prime, index, fixed fraction, 1 - epsilon).
std::string markdown_summary(const NonAFReport& r);

}  // namespace allostery
