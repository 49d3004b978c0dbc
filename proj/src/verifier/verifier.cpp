#include "mtz/verifier.hpp"

#include <algorithm>
#include <chrono>

#include <nlohmann/json.hpp>

#include "mtz/reductions.hpp"

namespace mtz::verify {

namespace {

struct KindName {
  ClaimKind kind;
  const char* name;
};

constexpr KindName kind_names[] = {
    {ClaimKind::Base, "base"},
    {ClaimKind::DblMhsOdd, "dbl-mhs-odd"},
    {ClaimKind::DblMhsEven, "dbl-mhs-even"},
    {ClaimKind::ExtYangCaiOdd, "ext-yang-cai-odd"},
    {ClaimKind::ExtYangCaiEven, "ext-yang-cai-even"},
    {ClaimKind::FourVars, "four-vars"},
    {ClaimKind::ConjD4Odd, "conj-d4-odd"},
    {ClaimKind::ConjD4Even, "conj-d4-even"},
    {ClaimKind::ConjD5Even, "conj-d5-even"},
    {ClaimKind::ConjGeneralOdd, "conj-general-odd"},
    {ClaimKind::ConjGeneralEven, "conj-general-even"},
    {ClaimKind::Sharpness, "sharpness"},
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool odd(int x) { return x % 2 != 0; }

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::PreconditionViolated, what);
}

// Z_{p^r}(s) mod p^precision through the chosen oracle.
Residue z_value(std::uint64_t p, unsigned r, const ExponentIndex& s, unsigned precision,
                const CheckOptions& opts) {
  if (opts.oracle == Oracle::Reduction) {
    return reductions::z_sum_via_reduction(p, r, s, precision, opts.parallel);
  }
  return z_sum(p, r, s, precision, opts.parallel);
}

// p^k * x as an element mod p^e, where x is known mod p^(e - k).
Residue lift(const Residue& x, unsigned k, unsigned e) {
  return Residue(x.prime(), e, BigInt(x.value() * ipow(x.prime(), k)));
}

// p^k * Z_p(s) mod p^e.
Residue scaled_z_p(std::uint64_t p, const ExponentIndex& s, unsigned k, unsigned e,
                   const CheckOptions& opts) {
  if (k >= e) return Residue::zero(p, e);
  return lift(z_value(p, 1, s, e - k, opts), k, e);
}

CongruenceReport make_report(CongruenceClaim claim, Residue lhs, Residue rhs, double ms,
                             Oracle oracle) {
  const bool verdict = recompute_verdict(claim.kind, lhs, rhs);
  return CongruenceReport{std::move(claim), std::move(lhs), std::move(rhs), verdict, ms,
                          engine_version(), oracle};
}

struct ConjItem {
  ClaimKind kind;
  unsigned exponent;
  // rhs is p^shift * Z_p(s); nullopt means the rhs is 0.
  std::optional<unsigned> shift;
};

std::vector<ConjItem> conjecture_items(unsigned r, const ExponentIndex& s) {
  const std::size_t d = s.depth();
  const int w = s.weight();
  std::vector<ConjItem> items;
  if (d == 4 && odd(w)) items.push_back({ClaimKind::ConjD4Odd, 2 * r - 1, 2 * r - 2});
  if (d == 4 && !odd(w)) items.push_back({ClaimKind::ConjD4Even, r, r - 1});
  if (d == 5 && !odd(w)) items.push_back({ClaimKind::ConjD5Even, 2 * r - 1, 2 * r - 2});
  if (r >= 2) {
    if (odd(static_cast<int>(d) + w)) {
      items.push_back({ClaimKind::ConjGeneralOdd, 2 * r - 2, std::nullopt});
    } else {
      items.push_back({ClaimKind::ConjGeneralEven, r - 1, std::nullopt});
    }
  }
  return items;
}

void check_conjecture_pre(std::uint64_t p, unsigned r, const ExponentIndex& s) {
  require_prime(p);
  require(r >= 1, "r must be positive");
  require(p > static_cast<std::uint64_t>(s.weight()) + 1, "needs p > weight + 1");
}

}  // namespace

const char* to_string(ClaimKind kind) noexcept {
  for (const auto& k : kind_names) {
    if (k.kind == kind) return k.name;
  }
  return "?";
}

std::optional<ClaimKind> parse_kind(std::string_view name) {
  for (const auto& k : kind_names) {
    if (name == k.name) return k.kind;
  }
  return std::nullopt;
}

const char* to_string(Oracle oracle) noexcept {
  return oracle == Oracle::Brute ? "brute" : "reduction";
}

Oracle parse_oracle(std::string_view name) {
  if (name == "brute") return Oracle::Brute;
  if (name == "reduction") return Oracle::Reduction;
  fail(ErrorCode::InvalidArgument, "unknown oracle: " + std::string(name));
}

const char* engine_version() noexcept { return MTZ_VERSION; }

ExponentIndex canonical_index(ClaimKind kind, const ExponentIndex& s) {
  switch (kind) {
    case ClaimKind::DblMhsOdd:
    case ClaimKind::DblMhsEven:
      return s;
    case ClaimKind::FourVars: {
      std::vector<int> e = s.exponents();
      std::sort(e.begin(), e.begin() + std::min<std::size_t>(3, e.size()));
      return ExponentIndex(std::move(e));
    }
    default:
      return s.sorted();
  }
}

std::string CongruenceClaim::key() const {
  return std::string(to_string(kind)) + "|" + std::to_string(p) + "|" + std::to_string(r) + "|" +
         canonical_index(kind, index).to_string();
}

bool recompute_verdict(ClaimKind kind, const Residue& lhs, const Residue& rhs) {
  if (kind == ClaimKind::Sharpness) {
    const unsigned top = lhs.exponent();
    return top >= 2 && lhs.reduced_to(top - 1) == rhs.reduced_to(top - 1) && !(lhs == rhs);
  }
  return lhs == rhs;
}

CongruenceReport check_base(std::uint64_t p, const CheckOptions& opts) {
  require_prime(p);
  require(p >= 5, "needs p >= 5");
  const auto start = Clock::now();
  const ExponentIndex s{1, 1, 1};
  Residue lhs = z_value(p, 1, s, 1, opts);
  Residue rhs = (Residue(p, 1, -2L) * bernoulli_mod(static_cast<unsigned>(p - 3), p, 1));
  return make_report({ClaimKind::Base, p, 1, s, 1}, lhs, rhs, ms_since(start), opts.oracle);
}

CongruenceReport check_dbl_mhs(std::uint64_t p, unsigned r, int a, int b,
                               const CheckOptions& /*opts*/) {
  require_prime(p);
  require(r >= 1 && a >= 1 && b >= 1, "arguments must be positive");
  require(p > static_cast<std::uint64_t>(a + b), "needs p > a + b");
  const auto start = Clock::now();
  const ExponentIndex s{a, b};
  const bool w_odd = odd(a + b);
  const unsigned e = w_odd ? r : 2 * r;
  const unsigned k = w_odd ? r - 1 : 2 * r - 2;
  Residue lhs = chain_mhs(p, r, s, e);
  Residue rhs = k >= e ? Residue::zero(p, e) : lift(chain_mhs(p, 1, s, e - k), k, e);
  return make_report({w_odd ? ClaimKind::DblMhsOdd : ClaimKind::DblMhsEven, p, r, s, e}, lhs, rhs,
                     ms_since(start), Oracle::Brute);
}

CongruenceReport check_ext_yang_cai(std::uint64_t p, unsigned r, int alpha, int beta, int gamma,
                                    const CheckOptions& opts) {
  require_prime(p);
  require(r >= 1 && alpha >= 1 && beta >= 1 && gamma >= 1, "arguments must be positive");
  const ExponentIndex s{alpha, beta, gamma};
  require(p > static_cast<std::uint64_t>(s.weight()), "needs p > weight");
  const auto start = Clock::now();
  const bool w_odd = odd(s.weight());
  const unsigned e = w_odd ? r : 2 * r;
  const unsigned k = w_odd ? r - 1 : 2 * r - 2;
  Residue lhs = z_value(p, r, s, e, opts);
  Residue rhs = scaled_z_p(p, s, k, e, opts);
  return make_report({w_odd ? ClaimKind::ExtYangCaiOdd : ClaimKind::ExtYangCaiEven, p, r, s, e},
                     lhs, rhs, ms_since(start), opts.oracle);
}

CongruenceReport check_four_vars(std::uint64_t p, int alpha, int beta, int gamma, int lambda,
                                 const CheckOptions& opts) {
  require_prime(p);
  require(alpha >= 1 && beta >= 1 && gamma >= 1 && lambda >= 1, "arguments must be positive");
  const ExponentIndex s{alpha, beta, gamma, lambda};
  const int w = s.weight();
  require(odd(w), "weight must be odd");
  require(p > static_cast<std::uint64_t>(w) + 2, "needs p > weight + 2");
  const auto start = Clock::now();
  Residue lhs = z_value(p, 1, s, 1, opts);
  Residue rhs = reductions::z4_closed_form(alpha, beta, gamma, lambda, p);
  return make_report({ClaimKind::FourVars, p, 1, s, 1}, lhs, rhs, ms_since(start), opts.oracle);
}

std::vector<CongruenceReport> check_conjecture(std::uint64_t p, unsigned r, const ExponentIndex& s,
                                               const CheckOptions& opts) {
  check_conjecture_pre(p, r, s);
  const auto items = conjecture_items(r, s);
  std::vector<CongruenceReport> out;
  if (items.empty()) return out;
  unsigned top = 1;
  for (const auto& item : items) top = std::max(top, item.exponent);
  const auto start = Clock::now();
  const Residue z = z_value(p, r, s, top, opts);
  std::optional<Residue> zp;
  for (const auto& item : items) {
    Residue lhs = z.reduced_to(item.exponent);
    Residue rhs = Residue::zero(p, item.exponent);
    if (item.shift) {
      if (!zp) zp = z_value(p, 1, s, 1, opts);
      rhs = *item.shift >= item.exponent ? Residue::zero(p, item.exponent)
                                         : lift(*zp, *item.shift, item.exponent);
    }
    out.push_back(make_report({item.kind, p, r, s, item.exponent}, lhs, rhs, ms_since(start),
                              opts.oracle));
  }
  return out;
}

CongruenceReport check_sharpness(std::uint64_t p, unsigned r, const ExponentIndex& s,
                                 const CheckOptions& opts) {
  check_conjecture_pre(p, r, s);
  std::optional<ConjItem> hold;
  for (const auto& item : conjecture_items(r, s)) {
    if (item.shift) hold = item;
  }
  require(hold.has_value(), "no conjecture item with a p-power right side applies");
  const auto start = Clock::now();
  const unsigned top = hold->exponent + 1;
  Residue lhs = z_value(p, r, s, top, opts);
  Residue rhs = scaled_z_p(p, s, *hold->shift, top, opts);
  return make_report({ClaimKind::Sharpness, p, r, s, top}, lhs, rhs, ms_since(start), opts.oracle);
}

CongruenceReport run_claim(const CongruenceClaim& c, const CheckOptions& opts) {
  const auto& s = c.index;
  auto need_depth = [&](std::size_t d) {
    if (s.depth() != d) fail(ErrorCode::InvalidArgument, "index has the wrong depth for its kind");
  };
  switch (c.kind) {
    case ClaimKind::Base:
      return check_base(c.p, opts);
    case ClaimKind::DblMhsOdd:
    case ClaimKind::DblMhsEven:
      need_depth(2);
      return check_dbl_mhs(c.p, c.r, s[0], s[1], opts);
    case ClaimKind::ExtYangCaiOdd:
    case ClaimKind::ExtYangCaiEven:
      need_depth(3);
      return check_ext_yang_cai(c.p, c.r, s[0], s[1], s[2], opts);
    case ClaimKind::FourVars:
      need_depth(4);
      return check_four_vars(c.p, s[0], s[1], s[2], s[3], opts);
    case ClaimKind::Sharpness:
      return check_sharpness(c.p, c.r, s, opts);
    default:
      for (auto& report : check_conjecture(c.p, c.r, s, opts)) {
        if (report.claim.kind == c.kind) return report;
      }
      fail(ErrorCode::PreconditionViolated, "conjecture item does not apply to this index");
  }
}

std::string to_json_line(const CongruenceReport& rep, bool with_timing) {
  nlohmann::ordered_json j;
  j["key"] = rep.claim.key();
  j["kind"] = to_string(rep.claim.kind);
  j["p"] = rep.claim.p;
  j["r"] = rep.claim.r;
  j["s"] = rep.claim.index.exponents();
  j["modulus"] = rep.lhs.modulus_label();
  j["lhs"] = rep.lhs.value().get_str();
  j["rhs"] = rep.rhs.value().get_str();
  j["verdict"] = rep.verdict;
  if (with_timing) j["elapsed_ms"] = rep.elapsed_ms;
  j["engine_version"] = rep.engine_version;
  j["oracle"] = to_string(rep.oracle);
  return j.dump();
}

}  // namespace mtz::verify
