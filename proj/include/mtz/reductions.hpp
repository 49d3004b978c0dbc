#pragma once

// Identities that rewrite Z-sums and finite Mordell-Tornheim sums in terms of
// chain-restricted harmonic sums, plus the closed forms that follow from
// them modulo p.

#include <string>
#include <vector>

#include "mtz/exact.hpp"
#include "mtz/finite_sums.hpp"
#include "mtz/residue.hpp"

namespace mtz::reductions {

struct ChainMhsTerm {
  BigInt coefficient;
  ExponentIndex index;
};

/// Integer combination of chain-restricted harmonic sums. Terms stay sorted
/// by index with duplicates merged and zero coefficients dropped.
class ChainMhsCombination {
 public:
  void add(const BigInt& coefficient, const ExponentIndex& index);

  [[nodiscard]] const std::vector<ChainMhsTerm>& terms() const noexcept { return terms_; }
  [[nodiscard]] BigInt coefficient_sum() const;
  /// "2*H(1,3) + 1*H(2,2)"
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const ChainMhsCombination& a, const ChainMhsCombination& b);

 private:
  std::vector<ChainMhsTerm> terms_;
};

/// T(a, b; c) as a combination of depth-2 chain sums H(x, w - x).
ChainMhsCombination reduce_t2_to_h(int alpha, int beta, int gamma);

/// T(a, b, 0; l) as a combination of depth-3 chain sums.
ChainMhsCombination reduce_t20_to_h3(int alpha, int beta, int lambda);

/// One term coefficient * T(x, y, 0; lambda) of the depth-3 expansion.
/// block is 0 for the (alpha, beta) pair, 1 for (alpha, gamma), 2 for
/// (beta, gamma).
struct T3Term {
  BigInt coefficient;
  int x;
  int y;
  int lambda;
  int block;
};

std::vector<T3Term> reduce_t3_to_t2(int alpha, int beta, int gamma, int lambda);

/// p^K * combination mod p^(precision + K), K = max chain scale over terms.
/// The result is divided back to mod p^precision; throws NonIntegral if the
/// combination is not p-integral.
Residue evaluate(const ChainMhsCombination& combo, std::uint64_t p, unsigned r,
                 unsigned precision);

/// (-1)^a_last * (T(a_1..a_n; a_last) + a_last p^r T(a_1..a_n; a_last + 1))
/// mod p^(2r), which is congruent to Z_{p^r}(s) mod p^(2r).
Residue decompose_z(const ExponentIndex& s, std::uint64_t p, unsigned r,
                    const ParallelOptions& opts = {});

/// The multinomial in the last of the six blocks of the depth-4 expansion.
/// Corrected uses (alpha - a, gamma - c, beta - 1), the mirror image of the
/// block before it. Literal follows the printed (alpha - a, beta - b,
/// beta - 1) with the unbound b read as the block's second loop variable c;
/// when those parts do not sum to the top entry the coefficient is the
/// factorial quotient, and zero if any part is negative.
enum class FourthBlock { Corrected, Literal };

const char* to_string(FourthBlock variant) noexcept;

struct Z4Term {
  Rational coefficient;
  int i;
  int j;
  int k;
};

/// Signless expansion of T(alpha, beta, gamma; lambda) into depth-3 chain
/// indices (i, j, k), all of weight alpha + beta + gamma + lambda.
std::vector<Z4Term> z4_expansion(int alpha, int beta, int gamma, int lambda, FourthBlock variant);

/// Z_{p^r}(alpha, beta, gamma, lambda) mod p^(2r) through the depth-4
/// expansion into chain sums. Requires p > weight.
Residue z4_via_chain_mhs(int alpha, int beta, int gamma, int lambda, std::uint64_t p, unsigned r,
                         FourthBlock variant = FourthBlock::Corrected);

/// Closed form for Z_p(alpha, beta, gamma) mod p, odd weight w < p.
Residue yang_cai_closed_form(int alpha, int beta, int gamma, std::uint64_t p);

/// (1 / 2n) ((-1)^a C(n, a) - (-1)^c C(n, c)), n = a + b + c.
Rational h_coeff(int a, int b, int c);
Rational t_coeff(int alpha, int beta, int lambda);

/// Closed form for Z_p(alpha, beta, gamma, lambda) mod p, odd weight w with
/// p > w + 2.
Residue z4_closed_form(int alpha, int beta, int gamma, int lambda, std::uint64_t p,
                       FourthBlock variant = FourthBlock::Corrected);

/// Z_{p^r}(s) mod p^precision by the reduction route: the depth-3 and depth-4
/// expansions into chain sums where they apply, the Z to MT decomposition
/// otherwise. Requires precision <= 2r.
Residue z_sum_via_reduction(std::uint64_t p, unsigned r, const ExponentIndex& s,
                            unsigned precision, const ParallelOptions& opts = {});

}  // namespace mtz::reductions
