#pragma once

// Exact arithmetic: big integers and rationals (GMP), primality, binomial and
// multinomial coefficients, and Bernoulli numbers.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mtz/error.hpp"

namespace mtz {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Normalized num/den. Throws InvalidArgument on a zero denominator.
Rational make_rational(const BigInt& num, const BigInt& den);

/// "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& x);
std::string to_string(const BigInt& x);

/// Parses "n" or "n/d".
Rational parse_rational(const std::string& text);

/// Deterministic Miller-Rabin over 64-bit integers.
bool is_prime(std::uint64_t n) noexcept;

void require_prime(std::uint64_t p);

BigInt ipow(std::uint64_t base, unsigned exponent);

/// p-adic valuation of a nonzero integer.
unsigned valuation(const BigInt& x, std::uint64_t p);

/// C(n, k) with C(n, k) = 0 for k < 0 or k > n. Requires n >= 0.
BigInt binomial(long n, long k);

/// n! / (k_1! ... k_j!). Parts must be nonnegative and sum to n.
BigInt multinomial(long n, std::span<const long> parts);
BigInt multinomial(long n, std::initializer_list<long> parts);

/// Pascal triangle of exact coefficients up to a fixed row.
class BinomialTable {
 public:
  explicit BinomialTable(unsigned max_n);

  [[nodiscard]] unsigned max_n() const noexcept { return max_n_; }
  [[nodiscard]] const BigInt& operator()(unsigned n, unsigned k) const;

 private:
  unsigned max_n_;
  std::vector<std::vector<BigInt>> rows_;
};

/// B_n with B_1 = -1/2. Memoized; safe to call concurrently.
Rational bernoulli(unsigned n);

}  // namespace mtz
