#include <map>
#include <mutex>

#include "mtz/classical.hpp"

namespace mtz::classical {

namespace {

// sum of c * y^a * log(y)^b
using LogPoly = std::map<std::pair<int, int>, Rational>;

// integral from 1 to Y of y^a log(y)^b dy, as a function of Y
LogPoly integrate_to(int a, int b, const Rational& c) {
  LogPoly out;
  if (a == -1) {
    out[{0, b + 1}] += c / Rational(b + 1);
    return out;
  }
  const Rational e = a + 1;
  Rational fall = 1;  // b! / (b - i)!
  Rational epow = e;  // e^(i + 1)
  for (int i = 0; i <= b; ++i) {
    const Rational term = c * fall / epow;
    out[{a + 1, b - i}] += (i % 2 == 0) ? term : Rational(-term);
    fall *= (b - i);
    epow *= e;
  }
  Rational at_one = c;
  for (int i = 1; i <= b; ++i) at_one *= i;
  for (int i = 0; i <= b; ++i) at_one /= e;
  out[{0, 0}] -= (b % 2 == 0) ? at_one : Rational(-at_one);
  return out;
}

// J(t) = integral over 1 < y_1 < ... < y_m of prod y_i^{-t_i}
Rational scaled_tail_integral(const std::vector<int>& t) {
  LogPoly f{{{0, 0}, Rational(1)}};
  for (std::size_t i = 0; i < t.size(); ++i) {
    LogPoly g;
    for (const auto& [key, c] : f) {
      if (c != 0) g[{key.first - t[i], key.second}] += c;
    }
    if (i + 1 < t.size()) {
      LogPoly next;
      for (const auto& [key, c] : g) {
        if (c == 0) continue;
        for (const auto& [k2, c2] : integrate_to(key.first, key.second, c)) next[k2] += c2;
      }
      f = std::move(next);
      continue;
    }
    Rational total = 0;
    for (const auto& [key, c] : g) {
      if (c == 0) continue;
      const auto [a, b] = key;
      if (a >= -1) fail(ErrorCode::DivergentTerm, "tail integral diverges");
      // integral from 1 to infinity of y^a log^b = b! / (-(a+1))^(b+1)
      Rational v = c;
      for (int k = 1; k <= b; ++k) v *= k;
      for (int k = 0; k <= b; ++k) v /= Rational(-(a + 1));
      total += v;
    }
    return total;
  }
  return 0;
}

Float to_float(const BigInt& x) { return strtoflt128(x.get_str().c_str(), nullptr); }
Float to_float(const Rational& x) { return to_float(x.get_num()) / to_float(x.get_den()); }

struct Memo {
  std::mutex mutex;
  std::map<std::pair<SignedMzvTerm, std::uint64_t>, Estimate> values;
  std::map<std::pair<int, std::uint64_t>, std::vector<Float>> inverse_powers;
};

Memo& memo() {
  static Memo m;
  return m;
}

const std::vector<Float>& inverse_powers(int s, std::uint64_t n) {
  auto& m = memo();
  std::lock_guard lock(m.mutex);
  auto it = m.inverse_powers.find({s, n});
  if (it != m.inverse_powers.end()) return it->second;
  std::vector<Float> v(n + 1, 0);
  for (std::uint64_t k = 1; k <= n; ++k) {
    const Float inv = Float(1) / Float(k);
    Float x = 1;
    for (int e = 0; e < s; ++e) x *= inv;
    v[k] = x;
  }
  return m.inverse_powers.emplace(std::pair{s, n}, std::move(v)).first->second;
}

void validate(const SignedMzvTerm& term, std::uint64_t cutoff) {
  const std::size_t d = term.exponents.size();
  if (d == 0 || d != term.signs.size()) fail(ErrorCode::InvalidArgument, "malformed term");
  if (d > 3) fail(ErrorCode::UnsupportedDepth, "evaluation supports depth <= 3");
  for (std::size_t i = 0; i < d; ++i) {
    if (term.exponents[i] < 1) fail(ErrorCode::InvalidArgument, "exponents must be positive");
    if (term.signs[i] != 1 && term.signs[i] != -1) fail(ErrorCode::InvalidArgument, "bad sign");
  }
  if (term.exponents.back() == 1) {
    if (term.signs.back() == 1) fail(ErrorCode::DivergentTerm, term.to_string() + " diverges");
    fail(ErrorCode::UnsupportedTerm, "last exponent 1 with a sign is not supported");
  }
  if (cutoff <= 2 * d) fail(ErrorCode::InvalidArgument, "cutoff too small");
}

Estimate compute(const SignedMzvTerm& term, std::uint64_t n) {
  const std::size_t d = term.exponents.size();
  std::vector<const std::vector<Float>*> inv(d);
  for (std::size_t i = 0; i < d; ++i) inv[i] = &inverse_powers(term.exponents[i], n);

  // h[j]: sum over 0 < k_1 < ... < k_j < k of the first j factors
  Float h[4] = {1, 0, 0, 0};
  for (std::uint64_t k = 1; k <= n; ++k) {
    const bool odd = (k & 1) != 0;
    for (std::size_t j = d; j >= 1; --j) {
      Float x = h[j - 1] * (*inv[j - 1])[k];
      if (odd && term.signs[j - 1] < 0) x = -x;
      h[j] += x;
    }
  }

  const Float nf = Float(n);
  Float value = h[d];
  Float error = 0;
  for (std::size_t j = 1; j <= d; ++j) {
    const std::vector<int> suffix(term.exponents.begin() + static_cast<long>(j - 1),
                                  term.exponents.end());
    const int m = static_cast<int>(suffix.size());
    int w = 0, negatives = 0;
    for (std::size_t i = j - 1; i < d; ++i) {
      w += term.exponents[i];
      if (term.signs[i] < 0) ++negatives;
    }
    const Float integral = to_float(scaled_tail_integral(suffix)) * powq(nf, Float(m - w));
    const Float mn = Float(m) / nf;
    const Float delta = fmaxq(powq(1 - mn, Float(-w)) - 1, 1 - powq(1 + 2 * mn, Float(-w)));
    if (negatives == 0) value += h[j - 1] * integral;
    error += fabsq(h[j - 1]) * ldexpq(delta * integral, negatives) * (1 + Float(1e-20));
  }
  // rounding: a few ulps per step at magnitudes below (1 + log n)^d
  const Float scale = powq(1 + logq(nf), Float(d));
  error += 16 * nf * Float(d) * FLT128_EPSILON * scale;
  return {value, error};
}

}  // namespace

Estimate eval_mzv(const SignedMzvTerm& term, std::uint64_t cutoff) {
  validate(term, cutoff);
  {
    auto& m = memo();
    std::lock_guard lock(m.mutex);
    auto it = m.values.find({term, cutoff});
    if (it != m.values.end()) return it->second;
  }
  const Estimate e = compute(term, cutoff);
  auto& m = memo();
  std::lock_guard lock(m.mutex);
  m.values.emplace(std::pair{term, cutoff}, e);
  return e;
}

Estimate eval_combination(const MzvCombination& combo, std::uint64_t cutoff) {
  Estimate total{0, 0};
  for (const auto& t : combo.terms()) {
    const Estimate e = eval_mzv(t.term, cutoff);
    const Float c = to_float(t.coefficient);
    total.value += c * e.value;
    total.error += fabsq(c) * e.error;
  }
  total.error *= 1 + Float(1e-20);
  return total;
}

Float pi_value() {
  // 16 atan(1/5) - 4 atan(1/239)
  auto atan_inv = [](int x) {
    const Float x2 = Float(x) * Float(x);
    Float power = Float(1) / Float(x);
    Float sum = 0;
    for (int k = 0; k < 200; ++k) {
      const Float term = power / Float(2 * k + 1);
      sum += (k % 2 == 0) ? term : -term;
      if (term < FLT128_EPSILON * Float(1e-6)) break;
      power /= x2;
    }
    return sum;
  };
  return 16 * atan_inv(5) - 4 * atan_inv(239);
}

Float zeta3_value() {
  // (5/2) sum_{k >= 1} (-1)^(k+1) / (k^3 C(2k, k))
  Float sum = 0;
  Float central = 1;  // C(2k, k)
  for (int k = 1; k < 200; ++k) {
    central = central * Float(2 * k) * Float(2 * k - 1) / (Float(k) * Float(k));
    const Float term = Float(1) / (Float(k) * Float(k) * Float(k) * central);
    sum += (k % 2 == 1) ? term : -term;
    if (term < FLT128_EPSILON * Float(1e-6)) break;
  }
  return Float(5) / 2 * sum;
}

std::string format(Float x, int digits) {
  char buf[128];
  quadmath_snprintf(buf, sizeof buf, "%.*Qg", digits, x);
  return buf;
}

}  // namespace mtz::classical
