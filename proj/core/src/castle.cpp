#include "allostery/castle.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace allostery {

CastleAudit audit_castle(const Castle& castle, const WreathElement& gamma, const WindowSystem& w, std::size_t budget,
                         std::optional<Rational> tolerance) {
  w.require_enumerable(budget, "audit_castle");
  if (gamma.ranks() != w.ranks()) throw InvalidArgument("audit_castle: rank mismatch");
  if (gamma.is_identity()) throw InvalidArgument("audit_castle: gamma must be nontrivial");
  const auto n = w.size().convert_to<std::uint64_t>();

  // owner[s] = (tower, shape) of the floor containing s
  constexpr std::size_t kFree = ~std::size_t{0};
  std::vector<std::pair<std::size_t, std::size_t>> owner(n, {kFree, kFree});
  for (std::size_t i = 0; i < castle.levels.size(); ++i) {
    const auto& level = castle.levels[i];
    if (level.base.empty()) throw MalformedCastle("empty base", "tower " + std::to_string(i));
    if (level.shapes.empty()) throw MalformedCastle("empty shape", "tower " + std::to_string(i));
    for (std::size_t k = 0; k < level.shapes.size(); ++k) {
      if (level.shapes[k].ranks() != w.ranks()) throw InvalidArgument("audit_castle: shape rank mismatch");
      for (std::uint64_t v : level.base) {
        if (v >= n) throw InvalidArgument("audit_castle: state index out of range");
        const std::uint64_t s = w.apply(level.shapes[k], v);
        if (owner[s].first != kFree) {
          const auto [ti, tk] = owner[s];
          throw MalformedCastle(
              "overlapping floors",
              "tower " + std::to_string(ti) + " shape " + to_string(castle.levels[ti].shapes[tk]) + " and tower " +
                  std::to_string(i) + " shape " + to_string(level.shapes[k]) + " both contain " + w.index_to_string(s));
        }
        owner[s] = {i, k};
      }
    }
  }
  for (std::uint64_t s = 0; s < n; ++s) {
    if (owner[s].first == kFree) throw MalformedCastle("floors do not cover the stage", "uncovered " + w.index_to_string(s));
  }

  CastleAudit audit;
  audit.gamma = gamma;
  audit.tolerance = tolerance;
  const UniformMeasure mu(w.size());
  const WreathElement gamma_inverse = invert(gamma);
  audit.bound = 0;
  bool within = true;
  for (const auto& level : castle.levels) {
    const std::set<WreathElement> shape(level.shapes.begin(), level.shapes.end());
    std::set<WreathElement> moved;
    for (const auto& s : shape) moved.insert(gamma_inverse * s);
    std::size_t sym = 0;
    for (const auto& x : moved) sym += shape.contains(x) ? 0 : 1;
    for (const auto& x : shape) sym += moved.contains(x) ? 0 : 1;
    const Rational defect(Integer(sym), Integer(shape.size()));
    const Rational base_measure = mu.of_count(level.base.size());
    audit.symmetric_differences.emplace_back(sym);
    audit.defects.push_back(defect);
    audit.base_measures.push_back(base_measure);
    audit.bound += Rational(Integer(sym)) * base_measure;
    if (tolerance) within = within && defect < *tolerance;
  }
  audit.fixed_count = fixed_points(gamma, w, budget).count;
  audit.fixed_measure = mu.of_count(audit.fixed_count);
  audit.inequality_holds = audit.fixed_measure <= audit.bound;
  if (tolerance) audit.within_tolerance = within;
  return audit;
}

Castle transversal_castle(const WindowSystem& w, std::uint64_t base_state, std::size_t budget) {
  Orbit o = orbit(w, base_state, budget);
  if (Integer(o.size()) != w.size()) throw InvalidArgument("transversal_castle: the stage is not transitive");
  CastleLevel level;
  level.base = {base_state};
  for (std::uint64_t s : o.states()) level.shapes.push_back(evaluate(w.generators(), o.word_to(s)));
  return Castle{{std::move(level)}};
}

Castle random_castle(const WindowSystem& w, std::mt19937_64& rng, const std::vector<WreathElement>& pool,
                     std::size_t budget) {
  w.require_enumerable(budget, "random_castle");
  const auto n = w.size().convert_to<std::uint64_t>();
  std::vector<bool> covered(n, false);
  std::uint64_t remaining = n;
  const WreathElement identity = WreathElement::identity(w.ranks());
  Castle castle;

  auto uncovered_states = [&] {
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 0; s < n; ++s) {
      if (!covered[s]) out.push_back(s);
    }
    return out;
  };

  while (remaining > 0) {
    auto free = uncovered_states();
    std::shuffle(free.begin(), free.end(), rng);
    CastleLevel level;
    // Base of one or two uncovered states; the identity floor is the base.
    std::size_t base_size = (free.size() > 1 && rng() % 2 == 0) ? 2 : 1;
    level.base = make_state_set({free.begin(), free.begin() + static_cast<std::ptrdiff_t>(base_size)});
    level.shapes.push_back(identity);
    for (std::uint64_t v : level.base) covered[v] = true;
    remaining -= level.base.size();

    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t want = 1 + rng() % 6;
    for (std::size_t idx : order) {
      if (level.shapes.size() >= want || remaining == 0) break;
      const auto& s = pool[idx];
      if (std::find(level.shapes.begin(), level.shapes.end(), s) != level.shapes.end()) continue;
      StateSet floor = image(w, s, level.base);
      if (floor.size() != level.base.size()) continue;
      if (std::any_of(floor.begin(), floor.end(), [&](std::uint64_t x) { return covered[x]; })) continue;
      for (std::uint64_t x : floor) covered[x] = true;
      remaining -= floor.size();
      level.shapes.push_back(s);
    }
    castle.levels.push_back(std::move(level));
  }
  return castle;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

}  // namespace

Castle parse_castle(std::string_view text, const WindowSystem& w) {
  Castle castle;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t offset = static_cast<std::size_t>(body.data() - line.data());
    if (!body.starts_with("V=")) throw ParseError("tower line must start with 'V='", line_no, offset + 1);
    const std::size_t sep = body.find("; S=");
    if (sep == std::string_view::npos) throw ParseError("missing '; S=' separator", line_no, offset + body.size() + 1);

    CastleLevel level;
    std::vector<std::uint64_t> base;
    const std::string_view states = body.substr(2, sep - 2);
    for (auto token : split_ws(states)) {
      const std::size_t column = offset + static_cast<std::size_t>(token.data() - body.data()) + 1;
      try {
        base.push_back(w.parse_index(token));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line_no, column);
      }
    }
    level.base = make_state_set(std::move(base));
    const std::string_view shapes = body.substr(sep + 4);
    for (auto token : split_ws(shapes)) {
      const std::size_t column = offset + static_cast<std::size_t>(token.data() - body.data()) + 1;
      try {
        if (token.front() == '[') {
          level.shapes.push_back(evaluate(w.generators(), parse_word(token)));
        } else {
          level.shapes.push_back(parse_element(token, w.ranks()));
        }
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line_no, column + (e.column() > 0 ? e.column() - 1 : 0));
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no, column);
      }
    }
    castle.levels.push_back(std::move(level));
    if (end == text.size()) break;
  }
  return castle;
}

std::string to_text(const Castle& c, const WindowSystem& w) {
  std::ostringstream out;
  for (const auto& level : c.levels) {
    out << "V=";
    for (std::size_t i = 0; i < level.base.size(); ++i) out << (i ? " " : "") << w.index_to_string(level.base[i]);
    out << "; S=";
    for (std::size_t i = 0; i < level.shapes.size(); ++i) out << (i ? " " : "") << to_string(level.shapes[i]);
    out << '\n';
  }
  return out.str();
}

nlohmann::ordered_json to_json(const CastleAudit& a, const Castle& c, const WindowSystem& w) {
  using json = nlohmann::ordered_json;
  json j;
  j["kind"] = "castle_audit";
  j["v"] = 1;
  j["inputs"] = {{"d", w.ranks().d}, {"m", w.ranks().m}};
  json window = json::array();
  for (const auto& d : w.data()) window.push_back(to_json(d));
  j["window"] = std::move(window);
  j["gamma"] = to_string(a.gamma);
  json towers = json::array();
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    json base = json::array();
    for (std::uint64_t s : c.levels[i].base) base.push_back(w.index_to_string(s));
    json shapes = json::array();
    for (const auto& s : c.levels[i].shapes) shapes.push_back(to_string(s));
    towers.push_back({{"V", std::move(base)},
                      {"S", std::move(shapes)},
                      {"symmetric_difference", a.symmetric_differences[i].str()},
                      {"defect", to_string(a.defects[i])},
                      {"measure_V", to_string(a.base_measures[i])}});
  }
  j["castle"] = std::move(towers);
  j["fixed_count"] = a.fixed_count.str();
  j["fixed_measure"] = to_string(a.fixed_measure);
  j["bound"] = to_string(a.bound);
  j["inequality_holds"] = a.inequality_holds;
  j["tolerance"] = a.tolerance ? json(to_string(*a.tolerance)) : json(nullptr);
  j["within_tolerance"] = a.within_tolerance ? json(*a.within_tolerance) : json(nullptr);
  j["status"] = a.inequality_holds ? "valid" : "invalid";
  return j;
}

}  // namespace allostery
