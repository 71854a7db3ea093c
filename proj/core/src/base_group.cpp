#include "allostery/base_group.hpp"

#include <algorithm>

#include "allostery/errors.hpp"

namespace allostery {

namespace {

void require_rank(std::size_t actual, std::size_t expected, const char* where) {
  if (actual != expected) {
    throw InvalidArgument(std::string(where) + ": rank mismatch (" + std::to_string(actual) +
                          " vs " + std::to_string(expected) + ")");
  }
}

template <class Range>
std::string tuple_text(const Range& coords) {
  std::string out = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += ',';
    out += coords[i].str();
  }
  out += ')';
  return out;
}

}  // namespace

BaseElement::BaseElement(std::vector<Integer> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidArgument("BaseElement: rank must be at least 1");
}

BaseElement BaseElement::zero(std::size_t rank) { return BaseElement(std::vector<Integer>(rank)); }

BaseElement BaseElement::unit(std::size_t rank, std::size_t axis, int sign) {
  if (axis >= rank) throw InvalidArgument("BaseElement::unit: axis out of range");
  std::vector<Integer> c(rank);
  c[axis] = sign;
  return BaseElement(std::move(c));
}

bool BaseElement::is_identity() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Integer& c) { return c == 0; });
}

BaseElement BaseElement::inverse() const {
  std::vector<Integer> c(coords_.size());
  std::transform(coords_.begin(), coords_.end(), c.begin(), [](const Integer& x) { return Integer(-x); });
  return BaseElement(std::move(c));
}

BaseElement compose(const BaseElement& a, const BaseElement& b) {
  require_rank(b.rank(), a.rank(), "compose");
  std::vector<Integer> c(a.rank());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return BaseElement(std::move(c));
}

CongruenceSubgroup::CongruenceSubgroup(Integer prime, std::size_t exponent, std::size_t rank)
    : prime_(std::move(prime)), exponent_(exponent), rank_(rank) {
  if (!is_prime(prime_)) throw InvalidArgument("CongruenceSubgroup: " + prime_.str() + " is not prime");
  if (exponent_ < 1) throw InvalidArgument("CongruenceSubgroup: exponent must be >= 1");
  if (rank_ < 1) throw InvalidArgument("CongruenceSubgroup: rank must be >= 1");
  modulus_ = ipow(prime_, exponent_);
}

Integer CongruenceSubgroup::index() const { return ipow(modulus_, rank_); }

BaseResidue BaseResidue::zero(std::size_t rank) { return BaseResidue(std::vector<Integer>(rank)); }

bool BaseResidue::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Integer& c) { return c == 0; });
}

BaseResidue reduce(const BaseElement& e, const CongruenceSubgroup& h) {
  require_rank(e.rank(), h.rank(), "reduce");
  std::vector<Integer> c(e.rank());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = floor_mod(e[i], h.modulus());
  return BaseResidue(std::move(c));
}

bool in_kernel(const BaseElement& e, const CongruenceSubgroup& h) {
  require_rank(e.rank(), h.rank(), "in_kernel");
  return std::all_of(e.coords().begin(), e.coords().end(),
                     [&](const Integer& c) { return c % h.modulus() == 0; });
}

BaseResidue residue_add(const BaseResidue& a, const BaseResidue& b, const CongruenceSubgroup& h) {
  require_rank(a.rank(), h.rank(), "residue_add");
  require_rank(b.rank(), h.rank(), "residue_add");
  std::vector<Integer> c(a.rank());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = a[i] + b[i];
    if (c[i] >= h.modulus()) c[i] -= h.modulus();
  }
  return BaseResidue(std::move(c));
}

BaseResidue residue_negate(const BaseResidue& a, const CongruenceSubgroup& h) {
  require_rank(a.rank(), h.rank(), "residue_negate");
  std::vector<Integer> c(a.rank());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] == 0 ? Integer(0) : Integer(h.modulus() - a[i]);
  return BaseResidue(std::move(c));
}

std::size_t minimal_exponent(const Integer& p, std::span<const BaseElement> avoid,
                             const Rational& index_bound, std::size_t rank) {
  if (!is_prime(p)) throw InvalidArgument("minimal_exponent: " + p.str() + " is not prime");
  for (const auto& a : avoid) {
    require_rank(a.rank(), rank, "minimal_exponent");
    if (a.is_identity()) throw InvalidArgument("minimal_exponent: identity cannot be separated");
  }
  for (std::size_t k = 1;; ++k) {
    CongruenceSubgroup h(p, k, rank);
    if (Rational(h.index()) <= index_bound) continue;
    bool separated = std::none_of(avoid.begin(), avoid.end(),
                                  [&](const BaseElement& a) { return in_kernel(a, h); });
    if (separated) return k;
  }
}

std::string to_string(const BaseElement& e) { return tuple_text(e.coords()); }
std::string to_string(const BaseResidue& r) { return tuple_text(r.coords()); }

}  // namespace allostery
