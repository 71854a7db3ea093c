#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "allostery/dynamics.hpp"

namespace allostery {

/// Sorted, duplicate-free list of state indices of a finite stage.
using StateSet = std::vector<std::uint64_t>;

StateSet make_state_set(std::vector<std::uint64_t> states);

struct Partition {
  /// Blocks ordered by their smallest element; each block sorted.
  std::vector<StateSet> blocks;

  /// Block id of every state.
  std::vector<std::size_t> block_of(std::uint64_t universe) const;
};

/// Atoms of the Boolean algebra generated by all Gamma-translates of the
/// given sets. Computed as the coarsest partition that refines the membership
/// pattern of the inputs and is carried to itself by every generator; two
/// states share an atom iff no translate of an input separates them.
Partition boolean_atoms(std::span<const StateSet> sets, const WindowSystem& w, std::size_t budget);

/// Distinct Gamma-translates g.A of a set, closed under the generators until
/// a fixed point. Throws BudgetExceeded past `max_translates`.
std::vector<StateSet> translates(const StateSet& set, const WindowSystem& w, std::size_t budget,
                                 std::size_t max_translates);

/// Atoms of the Boolean algebra generated by an explicit finite family of
/// subsets of {0, ..., universe-1}.
Partition atoms_of_family(std::span<const StateSet> family, std::uint64_t universe);

bool is_partition(const Partition& p, std::uint64_t universe);
bool is_union_of_blocks(const StateSet& set, const Partition& p, std::uint64_t universe);

/// g . S for a set of states.
StateSet image(const WindowSystem& w, const Word& word, const StateSet& set, std::size_t budget);
StateSet image(const WindowSystem& w, const WreathElement& x, const StateSet& set);

}  // namespace allostery
