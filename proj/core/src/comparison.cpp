#include "allostery/comparison.hpp"

#include <algorithm>

#include "allostery/errors.hpp"

namespace allostery {

namespace {

bool subset(const StateSet& a, const StateSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

/// Shortest generator word carrying atom `from` onto atom `to` in the atom
/// graph; layers visited in atom order, generators in GeneratorSet order.
Word transporter(const std::vector<std::vector<std::size_t>>& atom_next, std::size_t from, std::size_t to) {
  const std::size_t atoms = atom_next.empty() ? 0 : atom_next.front().size();
  constexpr std::size_t kUnseen = ~std::size_t{0};
  std::vector<std::size_t> parent(atoms, kUnseen);
  std::vector<std::size_t> via(atoms, 0);
  parent[from] = from;
  std::vector<std::size_t> layer{from};
  while (!layer.empty() && parent[to] == kUnseen) {
    std::vector<std::size_t> next;
    for (std::size_t a : layer) {
      for (std::size_t g = 0; g < atom_next.size(); ++g) {
        std::size_t b = atom_next[g][a];
        if (parent[b] != kUnseen) continue;
        parent[b] = a;
        via[b] = g;
        next.push_back(b);
      }
    }
    std::sort(next.begin(), next.end());
    layer = std::move(next);
  }
  if (parent[to] == kUnseen) throw InvalidArgument("comparison: atoms are not in one orbit");
  Word w;
  for (std::size_t cur = to; cur != from; cur = parent[cur]) w.push_back(via[cur]);
  return w;
}

}  // namespace

ComparisonCertificate comparison_certificate(const StateSet& A, const StateSet& B, const WindowSystem& w,
                                             std::size_t budget) {
  w.require_enumerable(budget, "comparison_certificate");
  const auto n = w.size().convert_to<std::uint64_t>();
  for (const auto* set : {&A, &B}) {
    for (std::uint64_t s : *set) {
      if (s >= n) throw InvalidArgument("comparison: state index out of range");
    }
  }
  if (A.empty()) throw InvalidArgument("comparison: A must be nonempty");
  if (A.size() >= B.size()) {
    throw InvalidArgument("comparison: measure condition violated (|A| = " + std::to_string(A.size()) +
                          " is not below |B| = " + std::to_string(B.size()) + ")");
  }
  if (!is_transitive(w, budget)) throw InvalidArgument("comparison: the stage is not transitive");

  const std::vector<StateSet> inputs{A, B};
  const Partition atoms = boolean_atoms(inputs, w, budget);
  const auto block = atoms.block_of(n);

  std::vector<std::vector<std::size_t>> atom_next(w.generators().size(), std::vector<std::size_t>(atoms.blocks.size()));
  for (std::size_t g = 0; g < atom_next.size(); ++g) {
    for (std::size_t a = 0; a < atoms.blocks.size(); ++a) {
      atom_next[g][a] = block[w.apply_generator(g, atoms.blocks[a].front(), budget)];
    }
  }

  ComparisonCertificate cert;
  cert.window = w.data();
  cert.ranks = w.ranks();
  cert.A = A;
  cert.B = B;
  cert.atom_count = atoms.blocks.size();
  cert.atom_size = atoms.blocks.front().size();

  std::vector<std::size_t> in_a;
  std::vector<std::size_t> in_b;
  for (std::size_t a = 0; a < atoms.blocks.size(); ++a) {
    if (subset(atoms.blocks[a], A)) in_a.push_back(a);
    if (subset(atoms.blocks[a], B)) in_b.push_back(a);
  }
  std::vector<bool> taken(atoms.blocks.size(), false);
  for (std::size_t a : in_a) {
    // Leave a piece in place when it already sits in B; otherwise take the
    // first free atom of B.
    std::size_t target = atoms.blocks.size();
    if (std::binary_search(in_b.begin(), in_b.end(), a) && !taken[a]) {
      target = a;
    } else {
      for (std::size_t b : in_b) {
        if (!taken[b]) {
          target = b;
          break;
        }
      }
    }
    if (target == atoms.blocks.size()) throw InvalidArgument("comparison: ran out of target atoms");
    taken[target] = true;
    Word word = transporter(atom_next, a, target);
    cert.pieces.push_back(atoms.blocks[a]);
    cert.images.push_back(image(w, word, atoms.blocks[a], budget));
    cert.transporters.push_back(std::move(word));
  }
  return cert;
}

nlohmann::ordered_json to_json(const ComparisonCertificate& c, const WindowSystem& w) {
  using json = nlohmann::ordered_json;
  auto states = [&](const StateSet& set) {
    json out = json::array();
    for (std::uint64_t s : set) out.push_back(w.index_to_string(s));
    return out;
  };
  json j;
  j["kind"] = "comparison";
  j["v"] = 1;
  j["inputs"] = {{"d", c.ranks.d}, {"m", c.ranks.m}};
  json window = json::array();
  for (const auto& d : c.window) window.push_back(to_json(d));
  j["window"] = std::move(window);
  j["A"] = states(c.A);
  j["B"] = states(c.B);
  j["measure_A"] = to_string(Rational(Integer(c.A.size()), w.size()));
  j["measure_B"] = to_string(Rational(Integer(c.B.size()), w.size()));
  j["atom_count"] = c.atom_count;
  j["atom_size"] = c.atom_size;
  json pieces = json::array();
  for (std::size_t i = 0; i < c.pieces.size(); ++i) {
    pieces.push_back({{"piece", states(c.pieces[i])}, {"word", c.transporters[i]}, {"image", states(c.images[i])}});
  }
  j["pieces"] = std::move(pieces);
  j["status"] = "valid";
  return j;
}

}  // namespace allostery
