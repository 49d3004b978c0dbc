#pragma once

// Executable congruence claims: each check evaluates both sides at the
// claim's modulus and returns a report. scan() drives a parameter grid and
// writes one JSON record per claim.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mtz/finite_sums.hpp"
#include "mtz/residue.hpp"

namespace mtz::verify {

enum class ClaimKind {
  Base,
  DblMhsOdd,
  DblMhsEven,
  ExtYangCaiOdd,
  ExtYangCaiEven,
  FourVars,
  ConjD4Odd,
  ConjD4Even,
  ConjD5Even,
  ConjGeneralOdd,
  ConjGeneralEven,
  Sharpness,
};

inline constexpr ClaimKind all_kinds[] = {
    ClaimKind::Base,           ClaimKind::DblMhsOdd,      ClaimKind::DblMhsEven,
    ClaimKind::ExtYangCaiOdd,  ClaimKind::ExtYangCaiEven, ClaimKind::FourVars,
    ClaimKind::ConjD4Odd,      ClaimKind::ConjD4Even,     ClaimKind::ConjD5Even,
    ClaimKind::ConjGeneralOdd, ClaimKind::ConjGeneralEven, ClaimKind::Sharpness,
};

const char* to_string(ClaimKind kind) noexcept;
std::optional<ClaimKind> parse_kind(std::string_view name);

enum class Oracle { Brute, Reduction };
const char* to_string(Oracle oracle) noexcept;
Oracle parse_oracle(std::string_view name);

struct CongruenceClaim {
  ClaimKind kind;
  std::uint64_t p;
  unsigned r;
  ExponentIndex index;
  unsigned modulus_exponent;

  /// kind|p|r|index with the index in canonical order.
  [[nodiscard]] std::string key() const;
};

/// Sorts the whole index for Z-sum kinds, the first three entries for
/// four-vars, and leaves the double chain sums alone.
ExponentIndex canonical_index(ClaimKind kind, const ExponentIndex& s);

struct CongruenceReport {
  CongruenceClaim claim;
  Residue lhs;
  Residue rhs;
  bool verdict;
  double elapsed_ms;
  std::string engine_version;
  Oracle oracle;
};

/// For sharpness: holds below the top exponent and fails at it. Otherwise
/// plain equality.
bool recompute_verdict(ClaimKind kind, const Residue& lhs, const Residue& rhs);

const char* engine_version() noexcept;

struct CheckOptions {
  Oracle oracle = Oracle::Brute;
  ParallelOptions parallel{};
};

CongruenceReport check_base(std::uint64_t p, const CheckOptions& opts = {});
CongruenceReport check_dbl_mhs(std::uint64_t p, unsigned r, int a, int b,
                               const CheckOptions& opts = {});
CongruenceReport check_ext_yang_cai(std::uint64_t p, unsigned r, int alpha, int beta, int gamma,
                                    const CheckOptions& opts = {});
CongruenceReport check_four_vars(std::uint64_t p, int alpha, int beta, int gamma, int lambda,
                                 const CheckOptions& opts = {});
/// Every conjecture item that applies to (p, r, s). Empty when none does.
std::vector<CongruenceReport> check_conjecture(std::uint64_t p, unsigned r, const ExponentIndex& s,
                                               const CheckOptions& opts = {});
/// Z_{p^r}(s) = p^(2r-2) Z_p(s) holds mod p^(2r-1) and fails mod p^(2r).
CongruenceReport check_sharpness(std::uint64_t p, unsigned r, const ExponentIndex& s,
                                 const CheckOptions& opts = {});

/// Runs the claim through the matching check above.
CongruenceReport run_claim(const CongruenceClaim& claim, const CheckOptions& opts = {});

std::string to_json_line(const CongruenceReport& report, bool with_timing = true);

struct ScanConfig {
  std::vector<ClaimKind> kinds;
  std::vector<std::uint64_t> primes;
  unsigned r_min = 1;
  unsigned r_max = 1;
  std::size_t depth_min = 2;
  std::size_t depth_max = 5;
  int weight_max = 6;
  unsigned workers = 1;
  std::filesystem::path out_path;
  bool include_sharpness = false;
  Oracle oracle = Oracle::Brute;
  bool timings = true;

  /// Accepts kind names ("base", "dbl-mhs-odd", ...) and the group names
  /// "dbl-mhs", "ext-yang-cai", "conjecture"; primes as a list or
  /// {"min": a, "max": b}; r_range and depth_range as [lo, hi].
  static ScanConfig from_json(const std::string& text);
  void validate() const;
};

struct KindSummary {
  ClaimKind kind;
  std::size_t checked = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

struct ScanResult {
  std::vector<CongruenceReport> reports;
  std::vector<KindSummary> summary;

  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] std::string summary_csv() const;
};

struct PlannedClaims {
  std::vector<CongruenceClaim> claims;
  std::vector<KindSummary> skipped;
};

/// The deduplicated claims of the grid in key order, plus precondition skips.
PlannedClaims plan(const ScanConfig& config);

/// Checks every planned claim and, when out_path is set, writes the records
/// there in key order. Throws PersistenceFailure if the file cannot be written.
ScanResult scan(const ScanConfig& config);

}  // namespace mtz::verify
