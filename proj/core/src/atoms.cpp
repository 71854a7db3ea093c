#include "allostery/atoms.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "allostery/errors.hpp"

namespace allostery {

StateSet make_state_set(std::vector<std::uint64_t> states) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return states;
}

std::vector<std::size_t> Partition::block_of(std::uint64_t universe) const {
  std::vector<std::size_t> out(universe, blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::uint64_t s : blocks[b]) out.at(s) = b;
  }
  return out;
}

namespace {

Partition from_labels(const std::vector<std::size_t>& label, std::uint64_t universe) {
  std::map<std::size_t, std::size_t> first_seen;
  Partition p;
  for (std::uint64_t s = 0; s < universe; ++s) {
    auto [it, inserted] = first_seen.emplace(label[s], p.blocks.size());
    if (inserted) p.blocks.emplace_back();
    p.blocks[it->second].push_back(s);
  }
  return p;
}

void check_range(const StateSet& set, std::uint64_t universe) {
  for (std::uint64_t s : set) {
    if (s >= universe) throw InvalidArgument("state index " + std::to_string(s) + " out of range");
  }
}

}  // namespace

Partition atoms_of_family(std::span<const StateSet> family, std::uint64_t universe) {
  // Label each state by the sorted list of family members containing it.
  std::vector<std::vector<std::size_t>> signature(universe);
  for (std::size_t i = 0; i < family.size(); ++i) {
    check_range(family[i], universe);
    for (std::uint64_t s : family[i]) signature[s].push_back(i);
  }
  std::map<std::vector<std::size_t>, std::size_t> ids;
  std::vector<std::size_t> label(universe);
  for (std::uint64_t s = 0; s < universe; ++s) label[s] = ids.emplace(signature[s], ids.size()).first->second;
  return from_labels(label, universe);
}

Partition boolean_atoms(std::span<const StateSet> sets, const WindowSystem& w, std::size_t budget) {
  w.require_enumerable(budget, "boolean_atoms");
  const auto n = w.size().convert_to<std::uint64_t>();
  const std::size_t gens = w.generators().size();

  std::vector<std::size_t> label = atoms_of_family(sets, n).block_of(n);
  std::size_t classes = *std::max_element(label.begin(), label.end()) + 1;

  std::vector<std::vector<std::uint64_t>> tables(gens, std::vector<std::uint64_t>(n));
  for (std::size_t g = 0; g < gens; ++g) {
    for (std::uint64_t s = 0; s < n; ++s) tables[g][s] = w.apply_generator(g, s, budget);
  }

  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    std::vector<std::size_t> key(gens + 1);
    for (std::uint64_t s = 0; s < n; ++s) {
      key[0] = label[s];
      for (std::size_t g = 0; g < gens; ++g) key[g + 1] = label[tables[g][s]];
      next[s] = ids.emplace(key, ids.size()).first->second;
    }
    label = std::move(next);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return from_labels(label, n);
}

StateSet image(const WindowSystem& w, const Word& word, const StateSet& set, std::size_t budget) {
  std::vector<std::uint64_t> out;
  out.reserve(set.size());
  for (std::uint64_t s : set) out.push_back(w.apply_word(word, s, budget));
  return make_state_set(std::move(out));
}

StateSet image(const WindowSystem& w, const WreathElement& x, const StateSet& set) {
  std::vector<std::uint64_t> out;
  out.reserve(set.size());
  for (std::uint64_t s : set) out.push_back(w.apply(x, s));
  return make_state_set(std::move(out));
}

std::vector<StateSet> translates(const StateSet& set, const WindowSystem& w, std::size_t budget,
                                 std::size_t max_translates) {
  w.require_enumerable(budget, "translates");
  check_range(set, w.size().convert_to<std::uint64_t>());
  std::set<StateSet> seen{set};
  std::vector<StateSet> frontier{set};
  while (!frontier.empty()) {
    std::vector<StateSet> next;
    for (const auto& current : frontier) {
      for (std::size_t g = 0; g < w.generators().size(); ++g) {
        StateSet moved = image(w, Word{g}, current, budget);
        if (!seen.insert(moved).second) continue;
        if (seen.size() > max_translates) {
          throw BudgetExceeded("translates", "> " + std::to_string(max_translates), max_translates);
        }
        next.push_back(std::move(moved));
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

bool is_partition(const Partition& p, std::uint64_t universe) {
  std::vector<bool> hit(universe, false);
  for (const auto& block : p.blocks) {
    if (block.empty()) return false;
    for (std::uint64_t s : block) {
      if (s >= universe || hit[s]) return false;
      hit[s] = true;
    }
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

bool is_union_of_blocks(const StateSet& set, const Partition& p, std::uint64_t universe) {
  std::vector<bool> member(universe, false);
  for (std::uint64_t s : set) member.at(s) = true;
  return std::all_of(p.blocks.begin(), p.blocks.end(), [&](const StateSet& block) {
    return std::all_of(block.begin(), block.end(), [&](std::uint64_t s) { return member[s] == member[block.front()]; });
  });
}

}  // namespace allostery
