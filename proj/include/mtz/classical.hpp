#pragma once

// Counting functions for Mordell-Tornheim values, the reduction of signed
// Mordell-Tornheim series to signed multiple zeta values, and a numeric
// evaluator for the latter.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <quadmath.h>

#include "mtz/exact.hpp"

namespace mtz::classical {

BigInt partition_count(unsigned n);
/// P_2 = P_3 = P_4 = 1, P_w = P_{w-2} + P_{w-3}.
BigInt padovan(unsigned w);
/// F_0 = F_1 = 1.
BigInt fibonacci(unsigned w);

/// N_w = sum_{j=2}^{w-1} (p(j) - 1)
BigInt count_mtzv(unsigned w);
/// Signed symbols of weight w, counted up to permuting equal (s, sign) pairs.
BigInt count_alternating_mtzv(unsigned w);
/// sum_{i=2}^{w-1} floor((sqrt(8i+1) - 1) / 2) (p(i) - 1)
BigInt bound_expression(unsigned w);
/// Number of Lyndon words of total weight n over the odd letters 1 < 3 < 5 ...
BigInt lyndon_count_odd(unsigned n);
BigInt count_deligne_generators(unsigned w);

struct BoundRow {
  unsigned w;
  BigInt p_sum;  // sum_{j=2}^{w-1} p(j)
  BigInt n_w;
  BigInt p_w;
  BigInt a_w;
  BigInt bound;
  BigInt f_w;
  bool n_below_p;      // N_w < P_w
  bool exact_below_f;  // A_w - N_w + P_w < F_w
  bool bound_below_f;  // bound - N_w + P_w < F_w
};

struct BoundReport {
  std::vector<BoundRow> rows;
  /// Least w0 such that the inequality holds for every scanned w >= w0.
  std::optional<unsigned> n_crossover;
  std::optional<unsigned> exact_crossover;
  std::optional<unsigned> bound_crossover;

  [[nodiscard]] std::string to_csv() const;
};

BoundReport bound_report(unsigned w_max);

struct SignedMzvTerm {
  std::vector<int> exponents;
  std::vector<int> signs;  // each +1 or -1

  [[nodiscard]] int weight() const;
  /// "zeta(1,-3)"; a negative entry marks sign -1.
  [[nodiscard]] std::string to_string() const;
  friend auto operator<=>(const SignedMzvTerm&, const SignedMzvTerm&) = default;
};

struct MzvTerm {
  Rational coefficient;
  SignedMzvTerm term;
};

/// Sorted by term, duplicates merged, zeros dropped.
class MzvCombination {
 public:
  void add(const Rational& coefficient, const SignedMzvTerm& term);
  [[nodiscard]] const std::vector<MzvTerm>& terms() const noexcept { return terms_; }
  [[nodiscard]] std::string to_string() const;

 private:
  std::vector<MzvTerm> terms_;
};

/// T(s_1..s_k; s_{k+1}) with signs on the first k arguments (the last sign
/// folded into them).
struct SignedMtIndex {
  std::vector<int> exponents;  // k + 1 entries
  std::vector<int> signs;      // k entries

  /// "-1,-1;2" style input: negative entries carry sign -1.
  static SignedMtIndex parse(const std::string& alphas, int lambda);
  [[nodiscard]] SignedMtIndex canonical() const;
  [[nodiscard]] int weight() const;
  [[nodiscard]] std::string to_string() const;
};

/// Depth 2 and 3 only; UnsupportedDepth otherwise.
MzvCombination mt_to_mzv(const SignedMtIndex& idx);

using Float = __float128;

struct Estimate {
  Float value;
  Float error;
};

inline constexpr std::uint64_t default_cutoff = 1000000;

/// Sum over 0 < k_1 < ... < k_d of prod sign_i^{k_i} / k_i^{s_i}, d <= 3.
/// Partial sums to N plus an integral tail estimate; error is a rigorous
/// bound on |value - true value|. Results are memoized per (term, N).
Estimate eval_mzv(const SignedMzvTerm& term, std::uint64_t cutoff = default_cutoff);
Estimate eval_combination(const MzvCombination& combo, std::uint64_t cutoff = default_cutoff);

Float pi_value();
Float zeta3_value();

std::string format(Float x, int digits = 20);

struct TableLine {
  std::string lhs_label;
  std::string rhs_label;
  Float lhs;
  Float rhs;
  Float deviation;
  Float error_bound;
  bool pass;
};

struct TableReport {
  std::vector<TableLine> lines;
  Float max_deviation;
  bool all_pass;
};

/// The 14 weight 3 and 4 evaluations, each checked to the given tolerance.
TableReport verify_value_table(double tolerance = 1e-6, std::uint64_t cutoff = default_cutoff);

}  // namespace mtz::classical
