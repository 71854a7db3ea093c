#include "allostery/wreath.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "allostery/errors.hpp"

namespace allostery {

namespace {

bool is_zero_vector(const LampVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& c) { return c == 0; });
}

void require_ranks(Ranks a, Ranks b, const char* where) {
  if (a != b) {
    throw InvalidArgument(std::string(where) + ": rank mismatch (d=" + std::to_string(a.d) + ",m=" +
                          std::to_string(a.m) + " vs d=" + std::to_string(b.d) + ",m=" + std::to_string(b.m) + ")");
  }
}

BaseElement translate(const BaseElement& pos, const BaseElement& by, bool subtract) {
  std::vector<Integer> c(pos.rank());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = subtract ? Integer(pos[i] - by[i]) : Integer(pos[i] + by[i]);
  return BaseElement(std::move(c));
}

}  // namespace

LampConfig::LampConfig(Ranks ranks) : ranks_(ranks) {
  if (ranks.d < 1 || ranks.m < 1) throw InvalidArgument("LampConfig: ranks must be >= 1");
}

LampVector LampConfig::at(const BaseElement& pos) const {
  auto it = values_.find(pos);
  return it == values_.end() ? LampVector(ranks_.d) : it->second;
}

void LampConfig::set(const BaseElement& pos, LampVector value) {
  if (pos.rank() != ranks_.m || value.size() != ranks_.d) throw InvalidArgument("LampConfig::set: rank mismatch");
  if (is_zero_vector(value)) {
    values_.erase(pos);
  } else {
    values_[pos] = std::move(value);
  }
}

void LampConfig::add(const BaseElement& pos, const LampVector& value) {
  if (pos.rank() != ranks_.m || value.size() != ranks_.d) throw InvalidArgument("LampConfig::add: rank mismatch");
  auto it = values_.find(pos);
  if (it == values_.end()) {
    if (!is_zero_vector(value)) values_.emplace(pos, value);
    return;
  }
  for (std::size_t i = 0; i < value.size(); ++i) it->second[i] += value[i];
  if (is_zero_vector(it->second)) values_.erase(it);
}

WreathElement::WreathElement(LampConfig lamp, BaseElement shift) : lamp_(std::move(lamp)), shift_(std::move(shift)) {
  if (shift_.rank() != lamp_.ranks().m) throw InvalidArgument("WreathElement: shift rank differs from m");
}

WreathElement WreathElement::identity(Ranks ranks) { return {LampConfig(ranks), BaseElement::zero(ranks.m)}; }

WreathElement WreathElement::lamp_at_origin(Ranks ranks, LampVector value) {
  LampConfig f(ranks);
  f.set(BaseElement::zero(ranks.m), std::move(value));
  return {std::move(f), BaseElement::zero(ranks.m)};
}

WreathElement WreathElement::pure_shift(Ranks ranks, BaseElement shift) { return {LampConfig(ranks), std::move(shift)}; }

bool WreathElement::is_identity() const { return lamp_.empty() && shift_.is_identity(); }

bool operator<(const WreathElement& a, const WreathElement& b) {
  if (a.lamp_ < b.lamp_) return true;
  if (b.lamp_ < a.lamp_) return false;
  return a.shift_ < b.shift_;
}

WreathElement multiply(const WreathElement& a, const WreathElement& b) {
  require_ranks(a.ranks(), b.ranks(), "multiply");
  LampConfig f = a.lamp();
  // f'(a^{-1} mu) is supported on a + supp(f').
  for (const auto& [pos, value] : b.lamp().support()) f.add(translate(pos, a.shift(), false), value);
  return {std::move(f), compose(a.shift(), b.shift())};
}

WreathElement invert(const WreathElement& a) {
  LampConfig f(a.ranks());
  for (const auto& [pos, value] : a.lamp().support()) {
    LampVector neg(value.size());
    std::transform(value.begin(), value.end(), neg.begin(), [](const Integer& c) { return Integer(-c); });
    f.set(translate(pos, a.shift(), true), std::move(neg));
  }
  return {std::move(f), a.shift().inverse()};
}

GeneratorSet::GeneratorSet(Ranks ranks) : ranks_(ranks) {
  for (std::size_t i = 0; i < ranks.d; ++i) {
    for (int sign : {1, -1}) {
      LampVector v(ranks.d);
      v[i] = sign;
      elements_.push_back(WreathElement::lamp_at_origin(ranks, std::move(v)));
    }
  }
  for (std::size_t j = 0; j < ranks.m; ++j) {
    for (int sign : {1, -1}) elements_.push_back(WreathElement::pure_shift(ranks, BaseElement::unit(ranks.m, j, sign)));
  }
}

std::string GeneratorSet::name(std::size_t index) const {
  if (index >= size()) throw InvalidArgument("GeneratorSet::name: index out of range");
  std::string base = is_lamp(index) ? "s" + std::to_string(index / 2 + 1)
                                    : "t" + std::to_string((index - 2 * ranks_.d) / 2 + 1);
  return (index & 1U) ? base + "^-1" : base;
}

WreathElement evaluate(const GeneratorSet& gens, std::span<const std::size_t> word) {
  WreathElement x = WreathElement::identity(gens.ranks());
  for (std::size_t g : word) {
    if (g >= gens.size()) throw InvalidArgument("evaluate: generator index " + std::to_string(g) + " out of range");
    x = x * gens[g];
  }
  return x;
}

std::vector<BallEntry> ball(const GeneratorSet& gens, std::size_t radius, std::size_t max_elements) {
  std::vector<BallEntry> out;
  out.push_back({WreathElement::identity(gens.ranks()), {}});
  std::set<WreathElement> seen{out.front().element};
  std::size_t layer_begin = 0;
  for (std::size_t r = 1; r <= radius; ++r) {
    std::size_t layer_end = out.size();
    std::map<WreathElement, Word> next;
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (std::size_t g = 0; g < gens.size(); ++g) {
        WreathElement y = out[i].element * gens[g];
        if (seen.contains(y) || next.contains(y)) continue;
        Word w = out[i].word;
        w.push_back(g);
        next.emplace(std::move(y), std::move(w));
        if (seen.size() + next.size() > max_elements) {
          throw BudgetExceeded("ball radius " + std::to_string(radius), "> " + std::to_string(max_elements),
                               max_elements);
        }
      }
    }
    for (auto& [element, word] : next) {
      seen.insert(element);
      out.push_back({element, std::move(word)});
    }
    layer_begin = layer_end;
  }
  return out;
}

std::string to_string(const LampVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i].str();
  }
  return out + ')';
}

std::string to_string(const WreathElement& x) {
  std::string out = "{";
  bool first = true;
  for (const auto& [pos, value] : x.lamp().support()) {
    if (!first) out += ',';
    first = false;
    out += to_string(pos) + ':' + to_string(value);
  }
  return out + "};" + to_string(x.shift());
}

namespace {

class ElementParser {
 public:
  explicit ElementParser(std::string_view text) : text_(text) {}

  WreathElement parse(const Ranks* expected) {
    std::vector<std::pair<std::vector<Integer>, std::vector<Integer>>> entries;
    std::vector<std::size_t> entry_columns;
    expect('{');
    if (!peek('}')) {
      do {
        entry_columns.push_back(pos_ + 1);
        auto key = tuple();
        expect(':');
        auto value = tuple();
        entries.emplace_back(std::move(key), std::move(value));
      } while (accept(','));
    }
    expect('}');
    expect(';');
    std::size_t shift_column = pos_ + 1;
    auto shift = tuple();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");

    Ranks ranks{expected ? expected->d : 1, shift.size()};
    if (!entries.empty()) ranks.d = entries.front().second.size();
    if (expected && ranks != *expected) {
      throw ParseError("element ranks (d=" + std::to_string(ranks.d) + ",m=" + std::to_string(ranks.m) +
                           ") differ from configured (d=" + std::to_string(expected->d) +
                           ",m=" + std::to_string(expected->m) + ")",
                       0, shift_column);
    }
    LampConfig f(ranks);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto& [key, value] = entries[i];
      if (key.size() != ranks.m || value.size() != ranks.d) {
        throw ParseError("inconsistent tuple length in lamp entry", 0, entry_columns[i]);
      }
      BaseElement where(std::move(key));
      if (f.support().contains(where)) throw ParseError("duplicate lamp position", 0, entry_columns[i]);
      f.set(where, std::move(value));
    }
    return {std::move(f), BaseElement(std::move(shift))};
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, 0, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Integer integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected an integer");
    }
    std::string token(text_.substr(start, pos_ - start));
    if (token.front() == '+') token.erase(0, 1);
    return Integer(token);
  }

  std::vector<Integer> tuple() {
    expect('(');
    std::vector<Integer> out;
    do {
      out.push_back(integer());
    } while (accept(','));
    expect(')');
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

WreathElement parse_element(std::string_view text) { return ElementParser(text).parse(nullptr); }

WreathElement parse_element(std::string_view text, Ranks expected) { return ElementParser(text).parse(&expected); }

std::string to_string(const Word& w) {
  std::string out = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(w[i]);
  }
  return out + ']';
}

Word parse_word(std::string_view text) {
  Word w;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (i >= text.size() || text[i] != '[') throw ParseError("expected '[' to start a word", 0, i + 1);
  ++i;
  skip();
  if (i < text.size() && text[i] == ']') {
    ++i;
  } else {
    for (;;) {
      skip();
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start) throw ParseError("expected a generator index", 0, i + 1);
      w.push_back(std::stoul(std::string(text.substr(start, i - start))));
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ']') {
        ++i;
        break;
      }
      throw ParseError("expected ',' or ']' in word", 0, i + 1);
    }
  }
  skip();
  if (i != text.size()) throw ParseError("trailing characters after word", 0, i + 1);
  return w;
}

}  // namespace allostery
