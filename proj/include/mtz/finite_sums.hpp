#pragma once

// Direct evaluation of the finite sums: plain and p-restricted multiple
// harmonic sums, chain-restricted harmonic sums, Z-sums over compositions of
// p^r, and finite Mordell-Tornheim sums (plain and chain-restricted).
//
// Modular results are exact residues; the *_exact variants return rationals
// and are limited to small p^r.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtz/exact.hpp"
#include "mtz/residue.hpp"
#include "mtz/ring.hpp"

namespace mtz {

/// A composition (s_1, ..., s_d) with every s_i >= 1 and d >= 1.
class ExponentIndex {
 public:
  explicit ExponentIndex(std::vector<int> exponents);
  ExponentIndex(std::initializer_list<int> exponents)
      : ExponentIndex(std::vector<int>(exponents)) {}

  /// "1,2,3"
  static ExponentIndex parse(std::string_view text);

  [[nodiscard]] std::size_t depth() const noexcept { return e_.size(); }
  [[nodiscard]] int weight() const noexcept;
  [[nodiscard]] int operator[](std::size_t i) const { return e_[i]; }
  [[nodiscard]] const std::vector<int>& exponents() const noexcept { return e_; }
  [[nodiscard]] auto begin() const noexcept { return e_.begin(); }
  [[nodiscard]] auto end() const noexcept { return e_.end(); }

  [[nodiscard]] ExponentIndex sorted() const;
  [[nodiscard]] std::string to_string() const;

  friend auto operator<=>(const ExponentIndex&, const ExponentIndex&) = default;

 private:
  std::vector<int> e_;
};

/// (alpha_1..alpha_m ; lambda_1..lambda_n). Entries may be zero, as in
/// T(a, b, 0; l); a zero exponent still constrains its variable to be prime
/// to p.
struct MtIndex {
  std::vector<int> alphas;
  std::vector<int> lambdas;

  void validate() const;
  [[nodiscard]] int weight() const;
};

struct ExactLimits {
  std::uint64_t max_modulus = 2000;
  std::size_t max_depth = 4;
};

using ring::ParallelOptions;

Rational mhs(std::uint64_t n, const ExponentIndex& s);
Rational mhs_p_restricted(std::uint64_t n, std::uint64_t p, const ExponentIndex& s);

/// Chain-restricted harmonic sum: 0 < u_1 < ... < u_d < p^r with u_1, every
/// gap u_{i+1} - u_i and u_d prime to p. Intermediate u_i may be divisible by
/// p, so for depth >= 3 and r >= 2 the value need not be p-integral; this
/// throws NonIntegral in that case. Use chain_mhs_scaled for combinations.
Residue chain_mhs(std::uint64_t p, unsigned r, const ExponentIndex& s, unsigned precision);

/// Smallest K such that p^K times every term of the chain sum is p-integral.
unsigned chain_scale(unsigned r, const ExponentIndex& s);

/// p^K * H(s) mod p^(precision + K). Requires K >= chain_scale(r, s).
BigInt chain_mhs_scaled(std::uint64_t p, unsigned r, const ExponentIndex& s,
                        unsigned precision, unsigned scale);

Rational chain_mhs_exact(std::uint64_t p, unsigned r, const ExponentIndex& s,
                         const ExactLimits& limits = {});

/// Z_{p^r}(s): compositions k_1 + ... + k_d = p^r with all k_i prime to p.
Residue z_sum(std::uint64_t p, unsigned r, const ExponentIndex& s, unsigned precision,
              const ParallelOptions& opts = {});
Rational z_sum_exact(std::uint64_t p, unsigned r, const ExponentIndex& s,
                     const ExactLimits& limits = {});

/// T_{p^r}(alphas; lambda): k_i prime to p, u = sum k_i < p^r, u prime to p.
Residue mt_sum(std::uint64_t p, unsigned r, std::span<const int> alphas, int lambda,
               unsigned precision, const ParallelOptions& opts = {});
Rational mt_sum_exact(std::uint64_t p, unsigned r, std::span<const int> alphas, int lambda,
                      const ExactLimits& limits = {});

/// T_{p^r}(alphas; lambdas) with the chain restriction on u_1 < ... < u_n.
Residue mt_restricted(std::uint64_t p, unsigned r, const MtIndex& idx, unsigned precision);
Rational mt_restricted_exact(std::uint64_t p, unsigned r, const MtIndex& idx,
                             const ExactLimits& limits = {});

/// Number of compositions the nested loops of z_sum visit; used for
/// long-running warnings.
double z_sum_work_estimate(std::uint64_t p, unsigned r, std::size_t depth);

}  // namespace mtz
