#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "allostery/atoms.hpp"
#include "allostery/dynamics.hpp"

namespace allostery {

/// A witness that A is dominated by B at one finite stage: A splits into
/// pieces C_i moved by transporter words g_i onto pairwise disjoint subsets
/// of B.
struct ComparisonCertificate {
  std::vector<SubgroupDatum> window;
  Ranks ranks;
  StateSet A;
  StateSet B;
  std::vector<StateSet> pieces;
  std::vector<Word> transporters;
  std::vector<StateSet> images;  ///< g_i . C_i
  std::size_t atom_count = 0;
  std::size_t atom_size = 0;
};

/// Builds the certificate from the atoms of {A, B}. Requires a transitive
/// stage, A nonempty and |A| < |B| (the uniform measure is the only invariant
/// measure, so this is the measure condition). Throws InvalidArgument when a
/// precondition fails.
ComparisonCertificate comparison_certificate(const StateSet& A, const StateSet& B, const WindowSystem& w,
                                             std::size_t budget);

nlohmann::ordered_json to_json(const ComparisonCertificate& c, const WindowSystem& w);

}  // namespace allostery
