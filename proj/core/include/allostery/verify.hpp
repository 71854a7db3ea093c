#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "allostery/dynamics.hpp"

namespace allostery {

/// Outcome of re-checking a serialized certificate from its JSON alone.
struct Verdict {
  std::string kind;
  std::string recorded_status;
  bool valid = false;  ///< every check re-derived by the verifier passed
  std::vector<std::string> failures;

  /// The producer recorded "valid" exactly when the re-derived verdict is valid.
  bool agrees() const { return (recorded_status == "valid") == valid; }
};

/// Dispatches on the `kind` tag ("subgroup_datum", "criterion", "comparison", "castle_audit",
/// "non_af_report"). Malformed JSON raises ParseError.
Verdict verify_certificate(const nlohmann::ordered_json& j, std::size_t budget = kDefaultStateBudget);

}  // namespace allostery
