#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "allostery/base_group.hpp"
#include "allostery/numeric.hpp"

namespace allostery {

/// A vector of the lamp group Z^d.
using LampVector = std::vector<Integer>;

/// Ranks of Z^d wr Z^m.
struct Ranks {
  std::size_t d = 1;
  std::size_t m = 1;

  friend bool operator==(const Ranks&, const Ranks&) = default;
};

/// Finitely supported function Z^m -> Z^d. Zero values are never stored, so
/// the key set is exactly the support.
class LampConfig {
 public:
  using Map = std::map<BaseElement, LampVector>;

  explicit LampConfig(Ranks ranks = {});

  Ranks ranks() const noexcept { return ranks_; }
  const Map& support() const noexcept { return values_; }
  std::size_t support_size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  /// Value at `pos`; the zero vector off the support.
  LampVector at(const BaseElement& pos) const;
  void set(const BaseElement& pos, LampVector value);
  void add(const BaseElement& pos, const LampVector& value);

  friend bool operator==(const LampConfig&, const LampConfig&) = default;
  friend bool operator<(const LampConfig& a, const LampConfig& b) { return a.values_ < b.values_; }

 private:
  Ranks ranks_;
  Map values_;
};

/// (f, shift) in (sum over Z^m of Z^d) x| Z^m.
class WreathElement {
 public:
  WreathElement() = default;
  WreathElement(LampConfig lamp, BaseElement shift);

  static WreathElement identity(Ranks ranks);
  /// (v placed at position 0, shift 0): the lamp-only element supported at the origin.
  static WreathElement lamp_at_origin(Ranks ranks, LampVector value);
  static WreathElement pure_shift(Ranks ranks, BaseElement shift);

  const LampConfig& lamp() const noexcept { return lamp_; }
  const BaseElement& shift() const noexcept { return shift_; }
  Ranks ranks() const noexcept { return lamp_.ranks(); }
  bool is_identity() const;

  friend bool operator==(const WreathElement&, const WreathElement&) = default;
  /// Canonical order: sorted support first, then shift.
  friend bool operator<(const WreathElement& a, const WreathElement& b);

 private:
  LampConfig lamp_;
  BaseElement shift_;
};

/// (f, a)(f', b) = (f + f'(a^{-1} .), a b)
WreathElement multiply(const WreathElement& a, const WreathElement& b);
/// (f, a)^{-1} = (-f(a .), a^{-1})
WreathElement invert(const WreathElement& a);

inline WreathElement operator*(const WreathElement& a, const WreathElement& b) { return multiply(a, b); }

/// Standard generators in a fixed order:
///   s_1, s_1^{-1}, ..., s_d, s_d^{-1}, t_1, t_1^{-1}, ..., t_m, t_m^{-1}
/// where s_i = (e_i at the origin, 0) and t_j = (0, e_j).
class GeneratorSet {
 public:
  explicit GeneratorSet(Ranks ranks);

  Ranks ranks() const noexcept { return ranks_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const WreathElement& operator[](std::size_t i) const { return elements_.at(i); }
  const std::vector<WreathElement>& elements() const noexcept { return elements_; }

  /// Index of s_i (0-based i) and of its inverse.
  std::size_t lamp_index(std::size_t i, bool inverse = false) const { return 2 * i + (inverse ? 1 : 0); }
  std::size_t shift_index(std::size_t j, bool inverse = false) const {
    return 2 * ranks_.d + 2 * j + (inverse ? 1 : 0);
  }
  bool is_lamp(std::size_t index) const noexcept { return index < 2 * ranks_.d; }
  /// Index of the inverse generator.
  std::size_t inverse_of(std::size_t index) const noexcept { return index ^ 1U; }

  /// "s1", "s1^-1", "t2", ...
  std::string name(std::size_t index) const;

 private:
  Ranks ranks_;
  std::vector<WreathElement> elements_;
};

/// A word over GeneratorSet indices. The word [w0, w1, ..., wn] denotes the
/// product w0 * w1 * ... * wn; applied to a point, wn acts first.
using Word = std::vector<std::size_t>;

WreathElement evaluate(const GeneratorSet& gens, std::span<const std::size_t> word);

struct BallEntry {
  WreathElement element;
  Word word;  ///< a geodesic word evaluating to `element`
};

/// All elements of word length <= radius, identity first, then by word length
/// and canonical order. Throws BudgetExceeded if more than `max_elements`
/// elements would be listed.
std::vector<BallEntry> ball(const GeneratorSet& gens, std::size_t radius, std::size_t max_elements);

/// Canonical text form `{pos:vec,...};shift`, e.g. `{(0):(1)};(0)`.
std::string to_string(const WreathElement& x);
std::string to_string(const LampVector& v);

/// Parses the canonical text form. Whitespace is ignored. Ranks are inferred
/// from the text; if `expected` is given they must match it.
WreathElement parse_element(std::string_view text);
WreathElement parse_element(std::string_view text, Ranks expected);

/// "[0,3,1]" style word text.
std::string to_string(const Word& w);
Word parse_word(std::string_view text);

}  // namespace allostery
