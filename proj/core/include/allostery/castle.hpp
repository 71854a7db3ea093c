#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "allostery/atoms.hpp"
#include "allostery/dynamics.hpp"
#include "allostery/errors.hpp"

namespace allostery {

/// One tower: base V and shape S; its floors are s.V for s in S.
struct CastleLevel {
  StateSet base;
  std::vector<WreathElement> shapes;
};

struct Castle {
  std::vector<CastleLevel> levels;
};

/// A castle whose floors overlap or fail to cover the stage.
class MalformedCastle : public Error {
 public:
  MalformedCastle(const std::string& what, std::string witness) : Error(what + ": " + witness), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

struct CastleAudit {
  WreathElement gamma;
  std::vector<Integer> symmetric_differences;  ///< |K S_i symdiff S_i| with K = {gamma^{-1}}
  std::vector<Rational> defects;               ///< |K S_i symdiff S_i| / |S_i|
  std::vector<Rational> base_measures;         ///< mu(V_i)
  Integer fixed_count;
  Rational fixed_measure;                      ///< mu(Fix gamma)
  Rational bound;                              ///< sum_i |K S_i symdiff S_i| mu(V_i)
  bool inequality_holds = false;               ///< fixed_measure <= bound
  std::optional<Rational> tolerance;
  std::optional<bool> within_tolerance;        ///< every defect < tolerance
};

/// Checks that the floors are pairwise disjoint and cover the stage (throws
/// MalformedCastle with the offending pair or an uncovered state), then
/// computes the Folner defects for K = {gamma^{-1}} and checks
///   mu(Fix gamma) <= sum_i |K S_i symdiff S_i| mu(V_i).
CastleAudit audit_castle(const Castle& castle, const WreathElement& gamma, const WindowSystem& w, std::size_t budget,
                         std::optional<Rational> tolerance = std::nullopt);

/// V = {base_state}, S = one Schreier word per state, so S.V is the stage.
Castle transversal_castle(const WindowSystem& w, std::uint64_t base_state, std::size_t budget);

/// A random well-formed castle: bases of one or two uncovered states, the
/// identity plus shapes drawn from `pool` whose floors land on uncovered
/// states. Deterministic given the generator state.
Castle random_castle(const WindowSystem& w, std::mt19937_64& rng, const std::vector<WreathElement>& pool,
                     std::size_t budget);

/// Text format, one tower per line:
///   V=<state> <state> ...; S=<element-or-word> ...
/// Blank lines and lines starting with '#' are skipped. Shapes are either
/// canonical element text or generator words like [0,2].
Castle parse_castle(std::string_view text, const WindowSystem& w);
std::string to_text(const Castle& c, const WindowSystem& w);

nlohmann::ordered_json to_json(const CastleAudit& a, const Castle& c, const WindowSystem& w);

}  // namespace allostery
