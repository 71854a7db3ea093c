#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "allostery/dynamics.hpp"
#include "allostery/forge.hpp"

namespace allostery {

struct CriterionConfig {
  std::size_t state_budget = kDefaultStateBudget;
  /// Radius of the ball classified by the stabilizer witness.
  std::size_t stabilizer_radius = 1;
  std::size_t ball_budget = 100'000;
};

/// Checks for one gamma of the window.
struct GammaRecord {
  SubgroupDatum datum;
  Integer index;
  std::vector<std::string> datum_problems;
  bool gamma_outside = false;           ///< gamma is not in Gamma_gamma
  bool gamma_moves_identity_coset = false;
  Rational fixed_fraction;              ///< closed form, states fixed by every s_i
  std::optional<Rational> fixed_fraction_enumerated;
  bool fraction_bound = false;          ///< fixed_fraction >= 1 - epsilon

  bool ok() const;
};

struct TransitivityResult {
  bool transitive = false;
  /// "bfs": the orbit of the identity thread covers the stage.
  /// "coprime-factors": every level is transitive by BFS and the level sizes
  /// are pairwise coprime, so the stabilizer of the identity thread has index
  /// equal to the product.
  /// "unchecked": budget too small for either route.
  std::string method;
  Integer orbit_size;
};

struct CriterionCertificate {
  Ranks ranks;
  std::vector<GammaRecord> records;
  bool distinct_primes = false;
  Rational product_lower_bound;  ///< product of (1 - epsilon)
  Rational window_fraction;      ///< closed form S-fixed fraction of the stage
  std::optional<Rational> window_fraction_enumerated;
  bool window_matches_product = false;
  bool window_bound = false;     ///< window_fraction >= product_lower_bound
  StabilizerReport stabilizer;
  TransitivityResult transitivity;
  /// Names of checks skipped because of the budget.
  std::vector<std::string> partial;

  bool valid() const;
  /// "valid", "invalid" or "partial".
  std::string status() const;
};

/// Forges the window from `gammas` (prime assignment + forge) and certifies it.
CriterionCertificate verify_criterion(std::span<const WreathElement> gammas, Ranks ranks,
                                      const EpsilonSchedule& schedule, const CriterionConfig& config);

/// Certifies already-forged data. The data are taken as given, so a datum
/// whose recorded epsilon is too small yields an invalid certificate.
CriterionCertificate certify_window(std::vector<SubgroupDatum> data, Ranks ranks, const CriterionConfig& config);

/// Transitivity of a stage by BFS when it fits the budget, else by per-level
/// BFS plus pairwise coprime level sizes.
TransitivityResult certify_transitivity(const WindowSystem& w, std::size_t budget);

nlohmann::ordered_json to_json(const CriterionCertificate& c, const CriterionConfig& config);

}  // namespace allostery
