#include "mtz/reductions.hpp"

#include <algorithm>

namespace mtz::reductions {

void ChainMhsCombination::add(const BigInt& coefficient, const ExponentIndex& index) {
  if (coefficient == 0) return;
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                                   [](const ChainMhsTerm& t, const ExponentIndex& i) {
                                     return t.index < i;
                                   });
  if (it != terms_.end() && it->index == index) {
    it->coefficient += coefficient;
    if (it->coefficient == 0) terms_.erase(it);
    return;
  }
  terms_.insert(it, ChainMhsTerm{coefficient, index});
}

BigInt ChainMhsCombination::coefficient_sum() const {
  BigInt total = 0;
  for (const auto& t : terms_) total += t.coefficient;
  return total;
}

std::string ChainMhsCombination::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (i != 0) out += t.coefficient < 0 ? " - " : " + ";
    else if (t.coefficient < 0) out += "-";
    out += BigInt(abs(t.coefficient)).get_str() + "*H(" + t.index.to_string() + ")";
  }
  return out;
}

bool operator==(const ChainMhsCombination& a, const ChainMhsCombination& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coefficient != b.terms_[i].coefficient ||
        a.terms_[i].index != b.terms_[i].index) {
      return false;
    }
  }
  return true;
}

namespace {

void require_positive(std::initializer_list<int> values) {
  for (int v : values) {
    if (v < 1) fail(ErrorCode::InvalidArgument, "arguments must be positive");
  }
}

int sign(int e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace

ChainMhsCombination reduce_t2_to_h(int alpha, int beta, int gamma) {
  require_positive({alpha, beta, gamma});
  const int w = alpha + beta + gamma;
  ChainMhsCombination out;
  for (int a = 1; a <= alpha; ++a) {
    out.add(binomial(alpha + beta - a - 1, alpha - a), ExponentIndex{a, w - a});
  }
  for (int b = 1; b <= beta; ++b) {
    out.add(binomial(alpha + beta - b - 1, beta - b), ExponentIndex{b, w - b});
  }
  return out;
}

ChainMhsCombination reduce_t20_to_h3(int alpha, int beta, int lambda) {
  require_positive({alpha, beta, lambda});
  ChainMhsCombination out;
  for (int s = 0; s < alpha; ++s) {
    out.add(binomial(s + beta - 1, s), ExponentIndex{alpha - s, beta + s, lambda});
  }
  for (int t = 0; t < beta; ++t) {
    out.add(binomial(t + alpha - 1, t), ExponentIndex{beta - t, alpha + t, lambda});
  }
  return out;
}

std::vector<T3Term> reduce_t3_to_t2(int alpha, int beta, int gamma, int lambda) {
  require_positive({alpha, beta, gamma, lambda});
  const int n = alpha + beta + gamma;
  const int w = n + lambda;
  std::vector<T3Term> out;
  // (x range, y range, spectator) for each of the three pairs.
  const int pairs[3][3] = {{alpha, beta, gamma}, {alpha, gamma, beta}, {beta, gamma, alpha}};
  for (int block = 0; block < 3; ++block) {
    const auto [xmax, ymax, rest] = pairs[block];
    for (int x = 1; x <= xmax; ++x) {
      for (int y = 1; y <= ymax; ++y) {
        BigInt c = multinomial(n - x - y - 1, {xmax - x, ymax - y, rest - 1});
        out.push_back(T3Term{c, x, y, w - x - y, block});
      }
    }
  }
  return out;
}

const char* to_string(FourthBlock variant) noexcept {
  return variant == FourthBlock::Corrected ? "corrected" : "literal";
}

namespace {

Rational factorial_quotient(long top, std::initializer_list<long> parts) {
  for (long k : parts) {
    if (k < 0) return 0;
  }
  if (top < 0) return 0;
  BigInt num;
  mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(top));
  BigInt den = 1;
  for (long k : parts) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
    den *= f;
  }
  return make_rational(num, den);
}

}  // namespace

std::vector<Z4Term> z4_expansion(int alpha, int beta, int gamma, int lambda, FourthBlock variant) {
  require_positive({alpha, beta, gamma, lambda});
  const int n = alpha + beta + gamma;
  const int w = n + lambda;
  std::vector<Z4Term> out;
  // T(x, y, 0; k) = sum_s C(s+y-1, s) H(x-s, y+s, k) + sum_t C(t+x-1, t) H(y-t, x+t, k)
  auto emit_s_half = [&](const Rational& m, int x, int y) {
    for (int s = 0; s < x; ++s) {
      out.push_back(Z4Term{m * Rational(binomial(s + y - 1, s)), x - s, y + s, w - x - y});
    }
  };
  auto emit_t_half = [&](const Rational& m, int x, int y) {
    for (int t = 0; t < y; ++t) {
      out.push_back(Z4Term{m * Rational(binomial(t + x - 1, t)), y - t, x + t, w - x - y});
    }
  };
  for (int a = 1; a <= alpha; ++a) {
    for (int b = 1; b <= beta; ++b) {
      const Rational m(multinomial(n - a - b - 1, {alpha - a, beta - b, gamma - 1}));
      emit_s_half(m, a, b);
      emit_t_half(m, a, b);
    }
  }
  for (int a = 1; a <= alpha; ++a) {
    for (int c = 1; c <= gamma; ++c) {
      const Rational m(multinomial(n - a - c - 1, {alpha - a, gamma - c, beta - 1}));
      emit_s_half(m, a, c);
      if (variant == FourthBlock::Corrected) {
        emit_t_half(m, a, c);
      } else {
        emit_t_half(factorial_quotient(n - a - c - 1, {alpha - a, beta - c, beta - 1}), a, c);
      }
    }
  }
  for (int b = 1; b <= beta; ++b) {
    for (int c = 1; c <= gamma; ++c) {
      const Rational m(multinomial(n - b - c - 1, {beta - b, gamma - c, alpha - 1}));
      emit_s_half(m, b, c);
      emit_t_half(m, b, c);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Z4Term& t) { return t.coefficient == 0; }),
            out.end());
  return out;
}

Residue evaluate(const ChainMhsCombination& combo, std::uint64_t p, unsigned r,
                 unsigned precision) {
  unsigned scale = 0;
  for (const auto& t : combo.terms()) scale = std::max(scale, chain_scale(r, t.index));
  const BigInt pk = ipow(p, scale);
  Residue acc = Residue::zero(p, precision + scale);
  for (const auto& t : combo.terms()) {
    acc += Residue(p, precision + scale, t.coefficient) *
           Residue(p, precision + scale, chain_mhs_scaled(p, r, t.index, precision, scale));
  }
  if (mpz_divisible_p(acc.value().get_mpz_t(), pk.get_mpz_t()) == 0) {
    fail(ErrorCode::NonIntegral, "combination is not p-integral");
  }
  return Residue(p, precision, BigInt(acc.value() / pk));
}

Residue decompose_z(const ExponentIndex& s, std::uint64_t p, unsigned r,
                    const ParallelOptions& opts) {
  if (s.depth() < 2) fail(ErrorCode::InvalidArgument, "Z-sums need depth >= 2");
  require_prime(p);
  const unsigned m = 2 * r;
  const std::vector<int> alphas(s.begin(), s.end() - 1);
  const int last = s[s.depth() - 1];
  Residue out = mt_sum(p, r, alphas, last, m, opts) +
                Residue(p, m, BigInt(ipow(p, r) * last)) * mt_sum(p, r, alphas, last + 1, m, opts);
  return sign(last) < 0 ? out.negate() : out;
}

Residue z4_via_chain_mhs(int alpha, int beta, int gamma, int lambda, std::uint64_t p, unsigned r,
                         FourthBlock variant) {
  require_prime(p);
  const int w = alpha + beta + gamma + lambda;
  if (p <= static_cast<std::uint64_t>(w)) {
    fail(ErrorCode::PreconditionViolated, "needs p > weight");
  }
  const auto terms = z4_expansion(alpha, beta, gamma, lambda, variant);
  const unsigned m = 2 * r;
  unsigned scale = 0;
  for (const auto& t : terms) {
    scale = std::max(scale, chain_scale(r, ExponentIndex{t.i, t.j, t.k + 1}));
  }
  const unsigned big = m + scale;
  const Residue lift = Residue(p, big, BigInt(ipow(p, r) * lambda));
  Residue acc = Residue::zero(p, big);
  for (const auto& t : terms) {
    const Residue h0(p, big, chain_mhs_scaled(p, r, ExponentIndex{t.i, t.j, t.k}, m, scale));
    const Residue h1(p, big, chain_mhs_scaled(p, r, ExponentIndex{t.i, t.j, t.k + 1}, m, scale));
    acc += reduce_mod(t.coefficient, p, big) * (h0 + lift * h1);
  }
  const BigInt pk = ipow(p, scale);
  if (mpz_divisible_p(acc.value().get_mpz_t(), pk.get_mpz_t()) == 0) {
    fail(ErrorCode::NonIntegral, "expansion is not p-integral");
  }
  const Residue out(p, m, BigInt(acc.value() / pk));
  return sign(lambda) < 0 ? out.negate() : out;
}

Residue yang_cai_closed_form(int alpha, int beta, int gamma, std::uint64_t p) {
  require_positive({alpha, beta, gamma});
  require_prime(p);
  const int w = alpha + beta + gamma;
  if (w % 2 == 0) fail(ErrorCode::PreconditionViolated, "weight must be odd");
  if (p <= static_cast<std::uint64_t>(w)) fail(ErrorCode::PreconditionViolated, "needs p > weight");
  Rational c = 0;
  for (int j = 1; j <= std::max(alpha, beta); ++j) {
    const BigInt inner =
        binomial(alpha + beta - j - 1, alpha - 1) + binomial(alpha + beta - j - 1, beta - 1);
    c += make_rational(BigInt(sign(alpha + beta - j) * inner * binomial(w, j)), BigInt(w));
  }
  if (p - 1 == static_cast<std::uint64_t>(w)) {
    c += Rational(2 * sign(gamma) * binomial(alpha + beta, alpha));
  }
  return reduce_mod(c, p, 1) * bernoulli_mod(static_cast<unsigned>(p - w), p, 1);
}

Rational h_coeff(int a, int b, int c) {
  require_positive({a, b, c});
  const int n = a + b + c;
  const BigInt num = sign(a) * binomial(n, a) - sign(c) * binomial(n, c);
  return make_rational(num, BigInt(2 * n));
}

Rational t_coeff(int alpha, int beta, int lambda) {
  require_positive({alpha, beta, lambda});
  Rational out = 0;
  for (int s = 0; s < alpha; ++s) out += Rational(binomial(s + beta - 1, s)) * h_coeff(alpha - s, beta + s, lambda);
  for (int t = 0; t < beta; ++t) out += Rational(binomial(t + alpha - 1, t)) * h_coeff(beta - t, alpha + t, lambda);
  return out;
}

Residue z4_closed_form(int alpha, int beta, int gamma, int lambda, std::uint64_t p,
                       FourthBlock variant) {
  require_prime(p);
  const int w = alpha + beta + gamma + lambda;
  if (w % 2 == 0) fail(ErrorCode::PreconditionViolated, "weight must be odd");
  if (p <= static_cast<std::uint64_t>(w) + 2) fail(ErrorCode::PreconditionViolated, "needs p > weight + 2");
  Rational total = 0;
  for (const auto& t : z4_expansion(alpha, beta, gamma, lambda, variant)) {
    total += t.coefficient * h_coeff(t.i, t.j, t.k);
  }
  if (sign(lambda) < 0) total = -total;
  return reduce_mod(total, p, 1) * bernoulli_mod(static_cast<unsigned>(p - w), p, 1);
}

Residue z_sum_via_reduction(std::uint64_t p, unsigned r, const ExponentIndex& s,
                            unsigned precision, const ParallelOptions& opts) {
  require_prime(p);
  if (precision > 2 * r) {
    fail(ErrorCode::InvalidArgument, "the reduction route is exact only mod p^(2r)");
  }
  const unsigned m = 2 * r;
  const std::size_t d = s.depth();
  if (d == 3) {
    const int a = s[0], b = s[1], c = s[2];
    Residue out = evaluate(reduce_t2_to_h(a, b, c), p, r, m) +
                  Residue(p, m, BigInt(ipow(p, r) * c)) * evaluate(reduce_t2_to_h(a, b, c + 1), p, r, m);
    if (sign(c) < 0) out = out.negate();
    return out.reduced_to(precision);
  }
  if (d == 4 && p > static_cast<std::uint64_t>(s.weight())) {
    return z4_via_chain_mhs(s[0], s[1], s[2], s[3], p, r).reduced_to(precision);
  }
  return decompose_z(s, p, r, opts).reduced_to(precision);
}

}  // namespace mtz::reductions
