#include "allostery/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <set>

#include "allostery/errors.hpp"

namespace allostery {

namespace {

std::uint64_t checked_u64(const Integer& n, const char* what) {
  auto v = to_u64(n);
  if (!v) throw InvalidArgument(std::string(what) + ": " + n.str() + " does not fit in 64 bits");
  return *v;
}

std::uint64_t upow(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

// Minimal reader for "(a,b)" tuples and "((a,b),(c,d))" tuple lists.
class TupleReader {
 public:
  explicit TupleReader(std::string_view text) : text_(text) {}

  std::vector<Integer> tuple() {
    expect('(');
    std::vector<Integer> out;
    do {
      out.push_back(integer());
    } while (accept(','));
    expect(')');
    return out;
  }

  std::vector<std::vector<Integer>> tuple_list() {
    expect('(');
    std::vector<std::vector<Integer>> out;
    if (peek('(')) {
      do {
        out.push_back(tuple());
      } while (accept(','));
    }
    expect(')');
    return out;
  }

  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "' in state", 0, pos_ + 1);
  }
  void finish() {
    skip();
    if (pos_ != text_.size()) throw ParseError("trailing characters in state", 0, pos_ + 1);
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  Integer integer() {
    skip();
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (digits == pos_) throw ParseError("expected an integer in state", 0, start + 1);
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

struct FiniteLevelSystem::TableCache {
  std::once_flag once;
  std::vector<std::vector<std::uint64_t>> tables;
};

FiniteLevelSystem::FiniteLevelSystem(SubgroupDatum datum)
    : datum_(std::move(datum)),
      h_(datum_.p, datum_.k, datum_.ranks.m),
      gens_(datum_.ranks),
      size_(index(datum_)),
      fiber_size_(ipow(datum_.p, datum_.l * datum_.ranks.d)),
      cache_(std::make_shared<TableCache>()) {
  if (datum_.E.size() != datum_.l) throw InvalidArgument("FiniteLevelSystem: |E| differs from l");
  for (std::size_t i = 0; i < datum_.E.size(); ++i) {
    const auto& q = datum_.E[i];
    if (q.rank() != datum_.ranks.m || reduce(BaseElement(q.coords()), h_) != q) {
      throw InvalidArgument("FiniteLevelSystem: E entry " + allostery::to_string(q) + " is not canonical");
    }
    if (i > 0 && !(datum_.E[i - 1] < q)) throw InvalidArgument("FiniteLevelSystem: E must be strictly sorted");
  }
}

CosetState FiniteLevelSystem::identity_state() const {
  return {BaseResidue::zero(datum_.ranks.m), std::vector<LampVector>(datum_.l, LampVector(datum_.ranks.d))};
}

CosetState FiniteLevelSystem::act(const WreathElement& x, const CosetState& s) const {
  if (x.ranks() != datum_.ranks) throw InvalidArgument("act: rank mismatch");
  CosetState out = s;
  out.base = residue_add(reduce(x.shift(), h_), s.base, h_);
  const BaseResidue shift_back = residue_negate(out.base, h_);
  for (const auto& [pos, value] : x.lamp().support()) {
    // pos lies in out.base + q for q = reduce(pos) - out.base.
    BaseResidue q = residue_add(reduce(pos, h_), shift_back, h_);
    auto it = std::lower_bound(datum_.E.begin(), datum_.E.end(), q);
    if (it == datum_.E.end() || *it != q) continue;
    auto& sum = out.sums[static_cast<std::size_t>(it - datum_.E.begin())];
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = floor_mod(sum[i] + value[i], datum_.p);
  }
  return out;
}

bool FiniteLevelSystem::is_valid(const CosetState& s) const {
  if (s.base.rank() != datum_.ranks.m || s.sums.size() != datum_.l) return false;
  for (const auto& c : s.base.coords()) {
    if (c < 0 || c >= h_.modulus()) return false;
  }
  for (const auto& v : s.sums) {
    if (v.size() != datum_.ranks.d) return false;
    for (const auto& c : v) {
      if (c < 0 || c >= datum_.p) return false;
    }
  }
  return true;
}

std::uint64_t FiniteLevelSystem::encode(const CosetState& s) const {
  if (!is_valid(s)) throw InvalidArgument("encode: state out of range");
  checked_u64(size_, "encode");
  Integer idx = 0;
  for (const auto& c : s.base.coords()) idx = idx * h_.modulus() + c;
  for (const auto& v : s.sums) {
    for (const auto& c : v) idx = idx * datum_.p + c;
  }
  return idx.convert_to<std::uint64_t>();
}

CosetState FiniteLevelSystem::decode(std::uint64_t index) const {
  if (Integer(index) >= size_) throw InvalidArgument("decode: index out of range");
  CosetState s = identity_state();
  const std::uint64_t p = checked_u64(datum_.p, "decode");
  const std::uint64_t modulus = checked_u64(h_.modulus(), "decode");
  for (std::size_t j = s.sums.size(); j-- > 0;) {
    for (std::size_t i = datum_.ranks.d; i-- > 0;) {
      s.sums[j][i] = index % p;
      index /= p;
    }
  }
  std::vector<Integer> base(datum_.ranks.m);
  for (std::size_t i = base.size(); i-- > 0;) {
    base[i] = index % modulus;
    index /= modulus;
  }
  s.base = BaseResidue(std::move(base));
  return s;
}

const std::vector<std::uint64_t>& FiniteLevelSystem::generator_table(std::size_t gen, std::size_t budget) const {
  if (gen >= gens_.size()) throw InvalidArgument("generator_table: generator index out of range");
  if (size_ > budget) throw BudgetExceeded("generator table", size_.str(), budget);
  std::call_once(cache_->once, [this] {
    const std::size_t m = datum_.ranks.m;
    const std::size_t d = datum_.ranks.d;
    const std::uint64_t p = checked_u64(datum_.p, "generator_table");
    const std::uint64_t modulus = checked_u64(h_.modulus(), "generator_table");
    const std::uint64_t fiber = checked_u64(fiber_size_, "generator_table");
    const std::uint64_t base_count = upow(modulus, m);
    const std::uint64_t total = base_count * fiber;

    // position in E of -b for each base index b, or l when absent
    std::vector<std::size_t> origin_slot(base_count, datum_.l);
    for (std::size_t j = 0; j < datum_.E.size(); ++j) {
      std::uint64_t b = 0;
      for (std::size_t c = 0; c < m; ++c) {
        std::uint64_t q = datum_.E[j][c].convert_to<std::uint64_t>();
        b = b * modulus + (q == 0 ? 0 : modulus - q);
      }
      origin_slot[b] = j;
    }

    auto& tables = cache_->tables;
    tables.assign(gens_.size(), std::vector<std::uint64_t>(total));
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      const bool inverse = (g & 1U) != 0;
      auto& table = tables[g];
      if (gens_.is_lamp(g)) {
        const std::size_t axis = g / 2;
        for (std::uint64_t idx = 0; idx < total; ++idx) {
          const std::size_t slot = origin_slot[idx / fiber];
          if (slot == datum_.l) {
            table[idx] = idx;
            continue;
          }
          const std::uint64_t place = upow(p, datum_.l * d - 1 - (slot * d + axis));
          const std::uint64_t digit = (idx / place) % p;
          const std::uint64_t moved = inverse ? (digit + p - 1) % p : (digit + 1) % p;
          table[idx] = idx - digit * place + moved * place;
        }
      } else {
        const std::size_t axis = (g - 2 * d) / 2;
        const std::uint64_t place = upow(modulus, m - 1 - axis) * fiber;
        for (std::uint64_t idx = 0; idx < total; ++idx) {
          const std::uint64_t digit = (idx / place) % modulus;
          const std::uint64_t moved = inverse ? (digit + modulus - 1) % modulus : (digit + 1) % modulus;
          table[idx] = idx - digit * place + moved * place;
        }
      }
    }
  });
  return cache_->tables[gen];
}

Integer FiniteLevelSystem::fixed_count(const WreathElement& x) const {
  if (x.ranks() != datum_.ranks) throw InvalidArgument("fixed_count: rank mismatch");
  if (!in_kernel(x.shift(), h_)) return 0;
  // A base b is moved iff some class b + E[j] carries a lamp sum outside
  // (pZ)^d; only bases b = reduce(pos) - E[j] can be moved.
  std::set<BaseResidue> candidates;
  for (const auto& entry : x.lamp().support()) {
    BaseResidue r = reduce(entry.first, h_);
    for (const auto& q : datum_.E) candidates.insert(residue_add(r, residue_negate(q, h_), h_));
  }
  Integer moved = 0;
  for (const auto& b : candidates) {
    CosetState s = identity_state();
    s.base = b;
    if (act(x, s) != s) ++moved;
  }
  return (datum_.base_index() - moved) * fiber_size_;
}

Integer FiniteLevelSystem::s_fixed_count() const { return (datum_.base_index() - datum_.l) * fiber_size_; }

std::string FiniteLevelSystem::to_string(const CosetState& s) const {
  std::string out = allostery::to_string(s.base) + "|(";
  for (std::size_t j = 0; j < s.sums.size(); ++j) {
    if (j) out += ',';
    out += allostery::to_string(s.sums[j]);
  }
  return out + ')';
}

CosetState FiniteLevelSystem::parse_state(std::string_view text) const {
  auto bar = text.find('|');
  if (bar == std::string_view::npos) throw ParseError("state must have the form base|(sums)", 0, 1);
  TupleReader base_reader(text.substr(0, bar));
  CosetState s;
  s.base = BaseResidue(base_reader.tuple());
  base_reader.finish();
  TupleReader sums_reader(text.substr(bar + 1));
  s.sums = sums_reader.tuple_list();
  sums_reader.finish();
  if (!is_valid(s)) throw ParseError("state " + std::string(text) + " is out of range for this level", 0, 1);
  return s;
}

WindowSystem::WindowSystem(std::vector<FiniteLevelSystem> levels, Ranks ranks)
    : levels_(std::move(levels)), gens_(ranks), size_(1) {
  for (const auto& level : levels_) {
    if (level.datum().ranks != ranks) throw InvalidArgument("WindowSystem: datum ranks differ from window ranks");
    size_ *= level.size();
  }
  if (to_u64(size_)) {
    strides_.assign(levels_.size(), 1);
    for (std::size_t i = levels_.size(); i-- > 1;) {
      strides_[i - 1] = strides_[i] * levels_[i].size().convert_to<std::uint64_t>();
    }
  }
}

WindowSystem WindowSystem::make(std::vector<SubgroupDatum> data, Ranks ranks) {
  std::set<Integer> primes;
  for (const auto& d : data) {
    if (!primes.insert(d.p).second) throw InvalidArgument("WindowSystem: prime " + d.p.str() + " repeats");
  }
  return unchecked(std::move(data), ranks);
}

WindowSystem WindowSystem::make(std::vector<SubgroupDatum> data) {
  if (data.empty()) throw InvalidArgument("WindowSystem: ranks required for an empty window");
  Ranks ranks = data.front().ranks;
  return make(std::move(data), ranks);
}

WindowSystem WindowSystem::unchecked(std::vector<SubgroupDatum> data, Ranks ranks) {
  std::vector<FiniteLevelSystem> levels;
  levels.reserve(data.size());
  for (auto& d : data) levels.emplace_back(std::move(d));
  return WindowSystem(std::move(levels), ranks);
}

std::vector<SubgroupDatum> WindowSystem::data() const {
  std::vector<SubgroupDatum> out;
  for (const auto& level : levels_) out.push_back(level.datum());
  return out;
}

bool WindowSystem::has_distinct_primes() const {
  std::set<Integer> primes;
  return std::all_of(levels_.begin(), levels_.end(),
                     [&](const FiniteLevelSystem& l) { return primes.insert(l.datum().p).second; });
}

WindowSystem::State WindowSystem::identity_state() const {
  State s;
  for (const auto& level : levels_) s.push_back(level.identity_state());
  return s;
}

WindowSystem::State WindowSystem::act(const WreathElement& x, const State& s) const {
  if (s.size() != levels_.size()) throw InvalidArgument("act: state has the wrong number of levels");
  State out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < levels_.size(); ++i) out.push_back(levels_[i].act(x, s[i]));
  return out;
}

void WindowSystem::require_enumerable(std::size_t budget, const std::string& what) const {
  if (size_ > budget) throw BudgetExceeded(what, size_.str(), budget);
}

std::uint64_t WindowSystem::encode(const State& s) const {
  if (strides_.size() != levels_.size()) throw InvalidArgument("encode: window too large to index");
  if (s.size() != levels_.size()) throw InvalidArgument("encode: state has the wrong number of levels");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < levels_.size(); ++i) idx += levels_[i].encode(s[i]) * strides_[i];
  return idx;
}

WindowSystem::State WindowSystem::decode(std::uint64_t index) const {
  if (Integer(index) >= size_) throw InvalidArgument("decode: index out of range");
  State s;
  for (std::size_t i = 0; i < levels_.size(); ++i) s.push_back(levels_[i].decode(level_index(index, i)));
  return s;
}

std::uint64_t WindowSystem::level_index(std::uint64_t index, std::size_t i) const {
  return (index / strides_[i]) % levels_[i].size().convert_to<std::uint64_t>();
}

std::uint64_t WindowSystem::apply_generator(std::size_t gen, std::uint64_t index, std::size_t budget) const {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    out += levels_[i].generator_table(gen, budget)[level_index(index, i)] * strides_[i];
  }
  return out;
}

std::uint64_t WindowSystem::apply_word(const Word& word, std::uint64_t index, std::size_t budget) const {
  for (auto it = word.rbegin(); it != word.rend(); ++it) index = apply_generator(*it, index, budget);
  return index;
}

std::uint64_t WindowSystem::apply(const WreathElement& x, std::uint64_t index) const {
  return encode(act(x, decode(index)));
}

std::string WindowSystem::to_string(const State& s) const {
  if (s.size() != levels_.size()) throw InvalidArgument("to_string: state has the wrong number of levels");
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += '&';
    out += levels_[i].to_string(s[i]);
  }
  return out;
}

WindowSystem::State WindowSystem::parse_state(std::string_view text) const {
  State s;
  std::size_t start = 0;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    std::size_t end = text.find('&', start);
    if (i + 1 < levels_.size() && end == std::string_view::npos) {
      throw ParseError("state has fewer levels than the window", 0, text.size() + 1);
    }
    if (i + 1 == levels_.size()) end = text.size();
    try {
      s.push_back(levels_[i].parse_state(text.substr(start, end - start)));
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()) + " (level " + std::to_string(i) + ")", 0, start + e.column());
    }
    start = end + 1;
  }
  if (levels_.empty() && !text.empty() && text != "()") throw ParseError("empty window has a single state '()'", 0, 1);
  return s;
}

UniformMeasure::UniformMeasure(Integer size) : size_(std::move(size)) {
  if (size_ <= 0) throw InvalidArgument("UniformMeasure: size must be positive");
}

std::vector<CosetState> enumerate_states(const FiniteLevelSystem& level, std::size_t budget) {
  if (level.size() > budget) throw BudgetExceeded("enumerate_states", level.size().str(), budget);
  const auto n = level.size().convert_to<std::uint64_t>();
  std::vector<CosetState> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(level.decode(i));
  return out;
}

bool Orbit::contains(std::uint64_t state) const { return state < parent_.size() && parent_[state] != kNone; }

Word Orbit::word_to(std::uint64_t state) const {
  if (!contains(state)) throw InvalidArgument("Orbit::word_to: state not in orbit");
  Word w;
  for (std::uint64_t cur = state; cur != start_; cur = parent_[cur]) w.push_back(via_[cur]);
  return w;
}

Orbit orbit(const WindowSystem& w, std::uint64_t start, std::span<const std::size_t> generators, std::size_t budget) {
  w.require_enumerable(budget, "orbit");
  const auto n = w.size().convert_to<std::uint64_t>();
  if (start >= n) throw InvalidArgument("orbit: start index out of range");
  for (std::size_t g : generators) {
    if (g >= w.generators().size()) throw InvalidArgument("orbit: generator index out of range");
  }
  Orbit o;
  o.start_ = start;
  o.parent_.assign(n, Orbit::kNone);
  o.via_.assign(n, 0);
  o.parent_[start] = start;
  o.order_.push_back(start);
  std::vector<std::uint64_t> layer{start};
  while (!layer.empty()) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t s : layer) {
      for (std::size_t g : generators) {
        std::uint64_t t = w.apply_generator(g, s, budget);
        if (o.parent_[t] != Orbit::kNone) continue;
        o.parent_[t] = s;
        o.via_[t] = static_cast<std::uint32_t>(g);
        next.push_back(t);
      }
    }
    std::sort(next.begin(), next.end());
    o.order_.insert(o.order_.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return o;
}

Orbit orbit(const WindowSystem& w, std::uint64_t start, std::size_t budget) {
  std::vector<std::size_t> all(w.generators().size());
  for (std::size_t g = 0; g < all.size(); ++g) all[g] = g;
  return orbit(w, start, all, budget);
}

bool is_transitive(const WindowSystem& w, std::size_t budget) {
  Orbit o = orbit(w, w.encode(w.identity_state()), budget);
  return Integer(o.size()) == w.size();
}

namespace {

std::vector<std::uint64_t> element_table(const FiniteLevelSystem& level, const WreathElement& x, std::size_t budget) {
  if (level.size() > budget) throw BudgetExceeded("element table", level.size().str(), budget);
  const auto n = level.size().convert_to<std::uint64_t>();
  std::vector<std::uint64_t> table(n);
  for (std::uint64_t i = 0; i < n; ++i) table[i] = level.encode(level.act(x, level.decode(i)));
  return table;
}

std::vector<std::vector<std::uint64_t>> element_tables(const WindowSystem& w, const WreathElement& x,
                                                       std::size_t budget) {
  std::vector<std::vector<std::uint64_t>> tables;
  for (std::size_t i = 0; i < w.level_count(); ++i) tables.push_back(element_table(w.level(i), x, budget));
  return tables;
}

}  // namespace

FixedPoints fixed_points(const WreathElement& x, const WindowSystem& w, std::size_t budget) {
  FixedPoints out;
  out.count = 1;
  for (std::size_t i = 0; i < w.level_count(); ++i) out.count *= w.level(i).fixed_count(x);
  if (w.size() > budget) return out;

  // A thread is fixed iff each coordinate is; expand the per-level fixed sets.
  std::vector<std::uint64_t> states{0};
  const auto tables = element_tables(w, x, budget);
  for (std::size_t i = 0; i < w.level_count(); ++i) {
    std::vector<std::uint64_t> next;
    const auto n = w.level(i).size().convert_to<std::uint64_t>();
    for (std::uint64_t prefix : states) {
      for (std::uint64_t digit = 0; digit < n; ++digit) {
        if (tables[i][digit] == digit) next.push_back(prefix * n + digit);
      }
    }
    states = std::move(next);
  }
  out.states = std::move(states);
  return out;
}

Integer count_fixed_by_enumeration(const WreathElement& x, const WindowSystem& w, std::size_t budget) {
  w.require_enumerable(budget, "count_fixed_by_enumeration");
  const auto tables = element_tables(w, x, budget);
  const auto n = w.size().convert_to<std::uint64_t>();
  std::uint64_t count = 0;
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    bool fixed = true;
    for (std::size_t i = 0; i < w.level_count() && fixed; ++i) {
      const std::uint64_t digit = w.level_index(idx, i);
      fixed = tables[i][digit] == digit;
    }
    if (fixed) ++count;
  }
  return count;
}

Rational s_fixed_fraction(const WindowSystem& w) {
  Rational out = 1;
  for (std::size_t i = 0; i < w.level_count(); ++i) {
    const auto& d = w.level(i).datum();
    out *= 1 - Rational(Integer(d.l), d.base_index());
  }
  return out;
}

Rational s_fixed_fraction_by_enumeration(const WindowSystem& w, std::size_t budget) {
  w.require_enumerable(budget, "s_fixed_fraction_by_enumeration");
  const auto n = w.size().convert_to<std::uint64_t>();
  const auto& gens = w.generators();
  std::uint64_t fixed = 0;
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    bool all = true;
    for (std::size_t i = 0; i < gens.ranks().d && all; ++i) {
      all = w.apply_generator(gens.lamp_index(i), idx, budget) == idx;
    }
    if (all) ++fixed;
  }
  return Rational(Integer(fixed), w.size());
}

Rational fixed_fraction(const WreathElement& x, const WindowSystem& w) {
  Integer count = 1;
  for (std::size_t i = 0; i < w.level_count(); ++i) count *= w.level(i).fixed_count(x);
  return Rational(count, w.size());
}

StructureMap::StructureMap(const WindowSystem& fine, const WindowSystem& coarse) {
  if (fine.ranks() != coarse.ranks()) throw InvalidArgument("StructureMap: rank mismatch");
  std::vector<bool> used(fine.level_count(), false);
  for (std::size_t i = 0; i < coarse.level_count(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < fine.level_count() && !found; ++j) {
      if (!used[j] && fine.level(j).datum() == coarse.level(i).datum()) {
        used[j] = true;
        positions_.push_back(j);
        found = true;
      }
    }
    if (!found) throw InvalidArgument("StructureMap: windows are not nested");
  }
}

WindowSystem::State StructureMap::apply(const WindowSystem::State& s) const {
  WindowSystem::State out;
  for (std::size_t pos : positions_) out.push_back(s.at(pos));
  return out;
}

std::uint64_t StructureMap::apply_index(const WindowSystem& fine, const WindowSystem& coarse,
                                        std::uint64_t index) const {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    out = out * coarse.level(i).size().convert_to<std::uint64_t>() + fine.level_index(index, positions_[i]);
  }
  return out;
}

InverseSystemReport check_inverse_system(std::span<const WindowSystem> chain, std::size_t budget) {
  InverseSystemReport report;
  for (const auto& w : chain) w.require_enumerable(budget, "check_inverse_system");
  if (chain.empty()) return report;
  const GeneratorSet& gens = chain.front().generators();

  auto projection = [&](std::size_t fine, std::size_t coarse) {
    StructureMap f(chain[fine], chain[coarse]);
    const auto n = chain[fine].size().convert_to<std::uint64_t>();
    std::vector<std::uint64_t> image(n);
    for (std::uint64_t x = 0; x < n; ++x) image[x] = f.apply_index(chain[fine], chain[coarse], x);
    return image;
  };

  for (std::size_t i = 0; i < chain.size(); ++i) {
    auto id = projection(i, i);
    for (std::uint64_t x = 0; x < id.size(); ++x) {
      if (id[x] != x) {
        report.identity_maps = false;
        report.failures.push_back("f_ii is not the identity at window " + std::to_string(i));
        break;
      }
    }
  }

  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
      const auto& coarse = chain[i];
      const auto& fine = chain[j];
      const auto f = projection(j, i);
      const auto n_coarse = coarse.size().convert_to<std::uint64_t>();
      std::vector<std::uint64_t> fiber(n_coarse, 0);
      for (std::uint64_t x = 0; x < f.size(); ++x) {
        ++fiber[f[x]];
        for (std::size_t g = 0; g < gens.size(); ++g) {
          if (f[fine.apply_generator(g, x, budget)] != coarse.apply_generator(g, f[x], budget)) {
            if (report.equivariant) {
              report.failures.push_back("f_" + std::to_string(i) + std::to_string(j) + " not equivariant at " +
                                        fine.index_to_string(x) + " under " + gens.name(g));
            }
            report.equivariant = false;
          }
        }
      }
      const Integer expected_fiber = fine.size() / coarse.size();
      for (std::uint64_t y = 0; y < n_coarse; ++y) {
        if (fiber[y] == 0 && report.surjective) {
          report.surjective = false;
          report.failures.push_back("f_" + std::to_string(i) + std::to_string(j) + " misses " +
                                    coarse.index_to_string(y));
        }
        // (f_ij)_* mu_j ({y}) = fiber / |X_j| must equal 1 / |X_i|.
        if (Rational(Integer(fiber[y]), fine.size()) != Rational(1, coarse.size()) && report.pushforward) {
          report.pushforward = false;
          report.failures.push_back("pushforward of uniform is not uniform at " + coarse.index_to_string(y) +
                                    " (fiber " + std::to_string(fiber[y]) + ", expected " +
                                    expected_fiber.str() + ")");
        }
      }
      for (std::size_t k = j + 1; k < chain.size(); ++k) {
        const auto f_ik = projection(k, i);
        const auto f_jk = projection(k, j);
        for (std::uint64_t x = 0; x < f_ik.size(); ++x) {
          if (f_ik[x] != f[f_jk[x]]) {
            report.composition = false;
            report.failures.push_back("f_ik != f_ij o f_jk for (" + std::to_string(i) + "," + std::to_string(j) +
                                      "," + std::to_string(k) + ")");
            break;
          }
        }
      }
    }
  }
  return report;
}

bool StabilizerReport::ok() const {
  return identity_fixed && std::all_of(window_gamma_moves.begin(), window_gamma_moves.end(), [](bool b) { return b; });
}

StabilizerReport stabilizer_witness(const WindowSystem& w, std::size_t ball_radius, std::size_t ball_budget) {
  StabilizerReport report;
  const auto y = w.identity_state();
  for (std::size_t i = 0; i < w.level_count(); ++i) {
    report.window_gamma_moves.push_back(w.act(w.level(i).datum().gamma, y) != y);
  }
  report.ball_radius = ball_radius;
  for (const auto& entry : ball(w.generators(), ball_radius, ball_budget)) {
    ++report.ball_size;
    const bool moves = w.act(entry.element, y) != y;
    if (entry.element.is_identity()) report.identity_fixed = !moves;
    if (moves) {
      ++report.movers;
    } else {
      ++report.fixers;
      report.fixing_elements.push_back(to_string(entry.element));
    }
  }
  return report;
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string orbit_csv(const WindowSystem& w, const Orbit& o) {
  std::string out = "index,state,word\n";
  for (std::uint64_t s : o.states()) {
    out += std::to_string(s) + ',' + csv_quote(w.index_to_string(s)) + ',' + csv_quote(to_string(o.word_to(s))) + '\n';
  }
  return out;
}

std::string states_csv(const WindowSystem& w, std::span<const std::uint64_t> states) {
  std::string out = "index,state\n";
  for (std::uint64_t s : states) out += std::to_string(s) + ',' + csv_quote(w.index_to_string(s)) + '\n';
  return out;
}

}  // namespace allostery
