#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "allostery/forge.hpp"
#include "allostery/numeric.hpp"
#include "allostery/wreath.hpp"

namespace allostery {

inline constexpr std::size_t kDefaultStateBudget = 1'000'000;

/// A point of Gamma / Gamma_gamma. For a coset (f, lambda) Gamma_gamma:
///   base    = lambda mod p^k
///   sums[j] = sum of f over the residue class base + E[j], reduced mod p
/// Two elements share a coset iff they share this encoding.
struct CosetState {
  BaseResidue base;
  std::vector<LampVector> sums;

  friend bool operator==(const CosetState&, const CosetState&) = default;
  friend bool operator<(const CosetState& a, const CosetState& b) {
    if (a.base < b.base) return true;
    if (b.base < a.base) return false;
    return a.sums < b.sums;
  }
};

/// The left coset action Gamma -> Sym(Gamma / Gamma_gamma) of one datum.
class FiniteLevelSystem {
 public:
  explicit FiniteLevelSystem(SubgroupDatum datum);

  const SubgroupDatum& datum() const noexcept { return datum_; }
  const GeneratorSet& generators() const noexcept { return gens_; }
  const CongruenceSubgroup& base_subgroup() const noexcept { return h_; }
  /// Number of states, equal to index(datum).
  const Integer& size() const noexcept { return size_; }

  CosetState identity_state() const;
  /// x . s. Satisfies act(xy, s) = act(x, act(y, s)).
  CosetState act(const WreathElement& x, const CosetState& s) const;
  /// The coset x Gamma_gamma.
  CosetState state_of(const WreathElement& x) const { return act(x, identity_state()); }
  bool is_valid(const CosetState& s) const;

  /// Dense index in [0, size) ordered like CosetState::operator<. Requires
  /// size to fit in 64 bits.
  std::uint64_t encode(const CosetState& s) const;
  CosetState decode(std::uint64_t index) const;

  /// Image of every state index under generator `gen`. Built once, on first
  /// use; throws BudgetExceeded when size > budget.
  const std::vector<std::uint64_t>& generator_table(std::size_t gen, std::size_t budget) const;

  /// Exact number of states fixed by x, without enumeration.
  Integer fixed_count(const WreathElement& x) const;
  /// Exact number of states fixed by every s_i: (p^{km} - l) p^{ld}.
  Integer s_fixed_count() const;

  std::string to_string(const CosetState& s) const;
  /// Inverse of to_string; validates ranges.
  CosetState parse_state(std::string_view text) const;

 private:
  struct TableCache;

  SubgroupDatum datum_;
  CongruenceSubgroup h_;
  GeneratorSet gens_;
  Integer size_;
  Integer fiber_size_;  // p^{ld}
  std::shared_ptr<TableCache> cache_;
};

/// The finite stage X_F: the diagonal action on the product of the levels of
/// a window F. With pairwise distinct primes this is Gamma / (intersection of
/// the Gamma_gamma).
class WindowSystem {
 public:
  using State = std::vector<CosetState>;

  /// Validates matching ranks and pairwise distinct primes.
  static WindowSystem make(std::vector<SubgroupDatum> data, Ranks ranks);
  static WindowSystem make(std::vector<SubgroupDatum> data);
  /// No prime check; used for negative controls.
  static WindowSystem unchecked(std::vector<SubgroupDatum> data, Ranks ranks);

  Ranks ranks() const noexcept { return gens_.ranks(); }
  const GeneratorSet& generators() const noexcept { return gens_; }
  std::size_t level_count() const noexcept { return levels_.size(); }
  const FiniteLevelSystem& level(std::size_t i) const { return levels_.at(i); }
  std::vector<SubgroupDatum> data() const;
  const Integer& size() const noexcept { return size_; }
  bool has_distinct_primes() const;

  State identity_state() const;
  State act(const WreathElement& x, const State& s) const;

  /// Throws BudgetExceeded unless size <= budget.
  void require_enumerable(std::size_t budget, const std::string& what) const;
  /// Mixed-radix index, level 0 most significant. Requires size <= 2^64-1.
  std::uint64_t encode(const State& s) const;
  State decode(std::uint64_t index) const;
  /// Digit of `index` for level i.
  std::uint64_t level_index(std::uint64_t index, std::size_t i) const;

  std::uint64_t apply_generator(std::size_t gen, std::uint64_t index, std::size_t budget) const;
  std::uint64_t apply_word(const Word& word, std::uint64_t index, std::size_t budget) const;
  std::uint64_t apply(const WreathElement& x, std::uint64_t index) const;

  /// Level states joined by '&', e.g. `(0)|((1),(0))&(2)|((0))`.
  std::string to_string(const State& s) const;
  State parse_state(std::string_view text) const;
  std::string index_to_string(std::uint64_t index) const { return to_string(decode(index)); }
  std::uint64_t parse_index(std::string_view text) const { return encode(parse_state(text)); }

 private:
  WindowSystem(std::vector<FiniteLevelSystem> levels, Ranks ranks);

  std::vector<FiniteLevelSystem> levels_;
  GeneratorSet gens_;
  Integer size_;
  std::vector<std::uint64_t> strides_;
};

/// Uniform probability measure on a finite stage.
class UniformMeasure {
 public:
  explicit UniformMeasure(Integer size);
  const Integer& size() const noexcept { return size_; }
  Rational singleton() const { return Rational(1, size_); }
  Rational of_count(const Integer& count) const { return Rational(count, size_); }

 private:
  Integer size_;
};

std::vector<CosetState> enumerate_states(const FiniteLevelSystem& level, std::size_t budget);

/// Breadth-first orbit with Schreier parent links. Each BFS layer is visited
/// in increasing state index and generators in GeneratorSet order, so the
/// stored words are deterministic.
class Orbit {
 public:
  static constexpr std::uint64_t kNone = ~std::uint64_t{0};

  std::uint64_t start() const noexcept { return start_; }
  const std::vector<std::uint64_t>& states() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }
  bool contains(std::uint64_t state) const;
  /// Word w with w . start = state.
  Word word_to(std::uint64_t state) const;

 private:
  friend Orbit orbit(const WindowSystem&, std::uint64_t, std::span<const std::size_t>, std::size_t);

  std::uint64_t start_ = 0;
  std::vector<std::uint64_t> order_;
  std::vector<std::uint64_t> parent_;
  std::vector<std::uint32_t> via_;
};

Orbit orbit(const WindowSystem& w, std::uint64_t start, std::span<const std::size_t> generators, std::size_t budget);
/// Orbit under the full generating set.
Orbit orbit(const WindowSystem& w, std::uint64_t start, std::size_t budget);

/// BFS from the identity thread reaches every state.
bool is_transitive(const WindowSystem& w, std::size_t budget);

struct FixedPoints {
  Integer count;
  std::optional<std::vector<std::uint64_t>> states;  ///< present when size <= budget
};

/// Count by closed form (product of per-level counts); the set by enumeration
/// when the stage fits the budget.
FixedPoints fixed_points(const WreathElement& x, const WindowSystem& w, std::size_t budget);
Integer count_fixed_by_enumeration(const WreathElement& x, const WindowSystem& w, std::size_t budget);

/// Fraction of states fixed by every s_i: product of (1 - l / p^{km}).
Rational s_fixed_fraction(const WindowSystem& w);
Rational s_fixed_fraction_by_enumeration(const WindowSystem& w, std::size_t budget);
/// Fraction fixed by one element, closed form.
Rational fixed_fraction(const WreathElement& x, const WindowSystem& w);

/// Coordinate projection X_{fine} -> X_{coarse}. Each level of `coarse` must
/// occur in `fine`; throws InvalidArgument otherwise.
class StructureMap {
 public:
  StructureMap(const WindowSystem& fine, const WindowSystem& coarse);

  const std::vector<std::size_t>& positions() const noexcept { return positions_; }
  WindowSystem::State apply(const WindowSystem::State& s) const;
  std::uint64_t apply_index(const WindowSystem& fine, const WindowSystem& coarse, std::uint64_t index) const;

 private:
  std::vector<std::size_t> positions_;
};

struct InverseSystemReport {
  bool identity_maps = true;   ///< f_ii is the identity
  bool equivariant = true;     ///< f(g x) = g f(x) for every generator and state
  bool surjective = true;
  bool composition = true;     ///< f_ik = f_ij o f_jk
  bool pushforward = true;     ///< (f_ij)_* mu_j = mu_i
  std::vector<std::string> failures;

  bool ok() const { return identity_maps && equivariant && surjective && composition && pushforward; }
};

/// Exhaustive check of the inverse-system laws on a chain W_0 <= W_1 <= ...
InverseSystemReport check_inverse_system(std::span<const WindowSystem> chain, std::size_t budget);

struct StabilizerReport {
  /// For each datum of the window: does its gamma move the identity thread?
  std::vector<bool> window_gamma_moves;
  bool identity_fixed = true;
  std::size_t ball_radius = 0;
  std::size_t ball_size = 0;
  std::size_t movers = 0;
  std::size_t fixers = 0;  ///< includes the identity
  std::vector<std::string> fixing_elements;

  bool ok() const;
};

/// Checks that every gamma of the window moves the identity thread y_F and
/// classifies the ball of the given radius into movers and fixers of y_F.
StabilizerReport stabilizer_witness(const WindowSystem& w, std::size_t ball_radius, std::size_t ball_budget);

/// "index,state,word" rows in orbit order.
std::string orbit_csv(const WindowSystem& w, const Orbit& o);
/// "index,state" rows.
std::string states_csv(const WindowSystem& w, std::span<const std::uint64_t> states);

}  // namespace allostery
