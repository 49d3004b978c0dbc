#include "mtz/residue.hpp"

namespace mtz {

Residue::Residue(std::uint64_t p, unsigned exponent, const BigInt& value)
    : p_(p), exponent_(exponent), modulus_(ipow(p, exponent)) {
  require_prime(p);
  if (exponent == 0) fail(ErrorCode::InvalidArgument, "precision exponent must be >= 1");
  mpz_mod(value_.get_mpz_t(), value.get_mpz_t(), modulus_.get_mpz_t());
}

void Residue::check_compatible(const Residue& rhs) const {
  if (p_ != rhs.p_ || exponent_ != rhs.exponent_) {
    fail(ErrorCode::PrecisionMismatch,
         "cannot combine residues mod " + modulus_label() + " and mod " + rhs.modulus_label());
  }
}

bool Residue::is_unit() const {
  return mpz_divisible_ui_p(value_.get_mpz_t(), p_) == 0;
}

Residue Residue::inverse() const {
  if (!is_unit()) fail(ErrorCode::NonUnit, to_string() + " is not a unit");
  BigInt inv;
  mpz_invert(inv.get_mpz_t(), value_.get_mpz_t(), modulus_.get_mpz_t());
  return Residue(p_, exponent_, inv);
}

Residue Residue::pow(std::uint64_t e) const {
  BigInt r;
  mpz_powm_ui(r.get_mpz_t(), value_.get_mpz_t(), e, modulus_.get_mpz_t());
  return Residue(p_, exponent_, r);
}

Residue Residue::negate() const { return Residue(p_, exponent_, BigInt(-value_)); }

Residue Residue::reduced_to(unsigned e) const {
  if (e > exponent_) {
    fail(ErrorCode::PrecisionMismatch, "cannot lift " + modulus_label() + " to " +
                                           std::to_string(p_) + "^" + std::to_string(e));
  }
  return Residue(p_, e, value_);
}

Residue& Residue::operator+=(const Residue& rhs) {
  check_compatible(rhs);
  value_ += rhs.value_;
  if (value_ >= modulus_) value_ -= modulus_;
  return *this;
}

Residue& Residue::operator-=(const Residue& rhs) {
  check_compatible(rhs);
  value_ -= rhs.value_;
  if (value_ < 0) value_ += modulus_;
  return *this;
}

Residue& Residue::operator*=(const Residue& rhs) {
  check_compatible(rhs);
  value_ *= rhs.value_;
  mpz_mod(value_.get_mpz_t(), value_.get_mpz_t(), modulus_.get_mpz_t());
  return *this;
}

std::string Residue::to_string() const {
  return value_.get_str() + " (mod " + modulus_.get_str() + ")";
}

std::string Residue::modulus_label() const {
  return std::to_string(p_) + "^" + std::to_string(exponent_);
}

Residue reduce_mod(const Rational& x, std::uint64_t p, unsigned exponent) {
  if (mpz_divisible_ui_p(x.get_den().get_mpz_t(), p) != 0) {
    fail(ErrorCode::NonUnitDenominator,
         mtz::to_string(x) + " has a denominator divisible by " + std::to_string(p));
  }
  const Residue den(p, exponent, x.get_den());
  return Residue(p, exponent, x.get_num()) * den.inverse();
}

}  // namespace mtz
