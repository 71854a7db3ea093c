#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "allostery/numeric.hpp"

namespace allostery {

/// An element of the base group Z^m, written additively.
class BaseElement {
 public:
  BaseElement() = default;
  explicit BaseElement(std::vector<Integer> coords);

  static BaseElement zero(std::size_t rank);
  /// sign * (axis-th standard basis vector).
  static BaseElement unit(std::size_t rank, std::size_t axis, int sign = 1);

  std::size_t rank() const noexcept { return coords_.size(); }
  const std::vector<Integer>& coords() const noexcept { return coords_; }
  const Integer& operator[](std::size_t i) const { return coords_[i]; }

  bool is_identity() const;
  BaseElement inverse() const;

  friend bool operator==(const BaseElement&, const BaseElement&) = default;
  friend bool operator<(const BaseElement& a, const BaseElement& b) { return a.coords_ < b.coords_; }

 private:
  std::vector<Integer> coords_;
};

/// Group law of Z^m. Throws InvalidArgument on rank mismatch.
BaseElement compose(const BaseElement& a, const BaseElement& b);

/// The congruence subgroup (p^k Z)^m of Z^m; normal, of index p^{km}.
class CongruenceSubgroup {
 public:
  CongruenceSubgroup(Integer prime, std::size_t exponent, std::size_t rank);

  const Integer& prime() const noexcept { return prime_; }
  std::size_t exponent() const noexcept { return exponent_; }
  std::size_t rank() const noexcept { return rank_; }
  /// p^k
  const Integer& modulus() const noexcept { return modulus_; }
  /// p^{km}
  Integer index() const;

  friend bool operator==(const CongruenceSubgroup&, const CongruenceSubgroup&) = default;

 private:
  Integer prime_;
  std::size_t exponent_;
  std::size_t rank_;
  Integer modulus_;
};

/// Canonical coset representative in Z^m / (p^k Z)^m, coordinates in [0, p^k).
class BaseResidue {
 public:
  BaseResidue() = default;
  explicit BaseResidue(std::vector<Integer> coords) : coords_(std::move(coords)) {}

  static BaseResidue zero(std::size_t rank);

  std::size_t rank() const noexcept { return coords_.size(); }
  const std::vector<Integer>& coords() const noexcept { return coords_; }
  const Integer& operator[](std::size_t i) const { return coords_[i]; }
  bool is_zero() const;

  friend bool operator==(const BaseResidue&, const BaseResidue&) = default;
  friend bool operator<(const BaseResidue& a, const BaseResidue& b) { return a.coords_ < b.coords_; }

 private:
  std::vector<Integer> coords_;
};

BaseResidue reduce(const BaseElement& e, const CongruenceSubgroup& h);
bool in_kernel(const BaseElement& e, const CongruenceSubgroup& h);

/// Group law of the residue group Z^m / (p^k Z)^m.
BaseResidue residue_add(const BaseResidue& a, const BaseResidue& b, const CongruenceSubgroup& h);
BaseResidue residue_negate(const BaseResidue& a, const CongruenceSubgroup& h);

/// Least k >= 1 such that p^{km} > index_bound and no element of `avoid`
/// lies in (p^k Z)^m. Throws InvalidArgument if `avoid` holds the identity
/// or a rank other than m.
std::size_t minimal_exponent(const Integer& p, std::span<const BaseElement> avoid,
                             const Rational& index_bound, std::size_t rank);

/// "(c1,...,cm)"
std::string to_string(const BaseElement& e);
std::string to_string(const BaseResidue& r);

}  // namespace allostery
