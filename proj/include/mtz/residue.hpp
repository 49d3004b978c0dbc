#pragma once

#include <cstdint>
#include <string>

#include "mtz/exact.hpp"

namespace mtz {

/// An element of Z / p^M Z. The value is always kept in [0, p^M).
class Residue {
 public:
  Residue(std::uint64_t p, unsigned exponent, const BigInt& value);
  Residue(std::uint64_t p, unsigned exponent, long value)
      : Residue(p, exponent, BigInt(value)) {}

  static Residue zero(std::uint64_t p, unsigned exponent) {
    return Residue(p, exponent, 0L);
  }
  static Residue one(std::uint64_t p, unsigned exponent) {
    return Residue(p, exponent, 1L);
  }

  [[nodiscard]] std::uint64_t prime() const noexcept { return p_; }
  [[nodiscard]] unsigned exponent() const noexcept { return exponent_; }
  [[nodiscard]] const BigInt& modulus() const noexcept { return modulus_; }
  [[nodiscard]] const BigInt& value() const noexcept { return value_; }

  [[nodiscard]] bool is_unit() const;
  /// Throws NonUnit when p divides the value.
  [[nodiscard]] Residue inverse() const;
  [[nodiscard]] Residue pow(std::uint64_t e) const;
  [[nodiscard]] Residue negate() const;

  /// Image in Z / p^e Z for e <= exponent().
  [[nodiscard]] Residue reduced_to(unsigned e) const;

  Residue& operator+=(const Residue& rhs);
  Residue& operator-=(const Residue& rhs);
  Residue& operator*=(const Residue& rhs);

  friend Residue operator+(Residue a, const Residue& b) { return a += b; }
  friend Residue operator-(Residue a, const Residue& b) { return a -= b; }
  friend Residue operator*(Residue a, const Residue& b) { return a *= b; }

  friend bool operator==(const Residue& a, const Residue& b) {
    return a.p_ == b.p_ && a.exponent_ == b.exponent_ && a.value_ == b.value_;
  }

  /// "v (mod m)", e.g. "3 (mod 5)".
  [[nodiscard]] std::string to_string() const;
  /// "p^e", e.g. "13^6".
  [[nodiscard]] std::string modulus_label() const;

 private:
  void check_compatible(const Residue& rhs) const;

  std::uint64_t p_;
  unsigned exponent_;
  BigInt modulus_;
  BigInt value_;
};

/// x mod p^M. Throws NonUnitDenominator when p divides the denominator.
Residue reduce_mod(const Rational& x, std::uint64_t p, unsigned exponent);

/// B_n mod p^M. Throws IrregularModulus when p divides the denominator of B_n.
Residue bernoulli_mod(unsigned n, std::uint64_t p, unsigned exponent);

}  // namespace mtz
