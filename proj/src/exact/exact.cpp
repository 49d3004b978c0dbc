#include "mtz/exact.hpp"

#include <numeric>

namespace mtz {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::NonUnitDenominator: return "NonUnitDenominator";
    case ErrorCode::NonUnit: return "NonUnit";
    case ErrorCode::PrecisionMismatch: return "PrecisionMismatch";
    case ErrorCode::PartsMismatch: return "PartsMismatch";
    case ErrorCode::IrregularModulus: return "IrregularModulus";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NonIntegral: return "NonIntegral";
    case ErrorCode::ExactLimitExceeded: return "ExactLimitExceeded";
    case ErrorCode::UnsupportedDepth: return "UnsupportedDepth";
    case ErrorCode::DivergentTerm: return "DivergentTerm";
    case ErrorCode::UnsupportedTerm: return "UnsupportedTerm";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::PersistenceFailure: return "PersistenceFailure";
  }
  return "Unknown";
}

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) fail(ErrorCode::InvalidArgument, "zero denominator");
  Rational x(num, den);
  x.canonicalize();
  return x;
}

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    return make_rational(BigInt(text.substr(0, slash)),
                         BigInt(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::InvalidArgument, "not a rational: '" + text + "'");
  }
}

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are a deterministic witness set for all n < 2^64.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

void require_prime(std::uint64_t p) {
  if (!is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
}

BigInt ipow(std::uint64_t base, unsigned exponent) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exponent);
  return r;
}

unsigned valuation(const BigInt& x, std::uint64_t p) {
  if (x == 0) fail(ErrorCode::InvalidArgument, "valuation of zero");
  BigInt q = abs(x);
  unsigned v = 0;
  while (mpz_divisible_ui_p(q.get_mpz_t(), p) != 0) {
    mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), p);
    ++v;
  }
  return v;
}

BigInt binomial(long n, long k) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "binomial with negative n");
  if (k < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

BigInt multinomial(long n, std::span<const long> parts) {
  long total = 0;
  for (long k : parts) {
    if (k < 0) fail(ErrorCode::PartsMismatch, "negative multinomial part");
    total += k;
  }
  if (total != n) {
    fail(ErrorCode::PartsMismatch, "multinomial parts sum to " +
                                       std::to_string(total) + ", expected " +
                                       std::to_string(n));
  }
  BigInt r = 1;
  long remaining = n;
  for (long k : parts) {
    r *= binomial(remaining, k);
    remaining -= k;
  }
  return r;
}

BigInt multinomial(long n, std::initializer_list<long> parts) {
  return multinomial(n, std::span<const long>(parts.begin(), parts.size()));
}

BinomialTable::BinomialTable(unsigned max_n) : max_n_(max_n) {
  rows_.resize(max_n + 1);
  for (unsigned n = 0; n <= max_n; ++n) {
    rows_[n].resize(n + 1);
    rows_[n][0] = 1;
    rows_[n][n] = 1;
    for (unsigned k = 1; k < n; ++k) rows_[n][k] = rows_[n - 1][k - 1] + rows_[n - 1][k];
  }
}

const BigInt& BinomialTable::operator()(unsigned n, unsigned k) const {
  static const BigInt zero = 0;
  if (n > max_n_) fail(ErrorCode::InvalidArgument, "row beyond table");
  if (k > n) return zero;
  return rows_[n][k];
}

}  // namespace mtz
