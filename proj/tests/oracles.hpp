#pragma once

// Naive reference implementations. They share nothing with the library
// kernels: plain enumeration over rationals or over 128-bit residues.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Q = mpq_class;
using Z = mpz_class;

inline std::uint64_t upow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline Q inv_pow(std::uint64_t k, int s) {
  Z den = 1;
  for (int i = 0; i < s; ++i) den *= static_cast<unsigned long>(k);
  return Q(Z(1), den);
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  __int128 t = 0, nt = 1, r = m, nr = a % m;
  while (nr != 0) {
    const __int128 q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_inv_mod(std::uint64_t k, int s, std::uint64_t m) {
  const std::uint64_t inv = inv_mod(k, m);
  std::uint64_t r = 1 % m;
  for (int i = 0; i < s; ++i) r = mul_mod(r, inv, m);
  return r;
}

// Reduces a rational with denominator prime to p into [0, m).
inline std::uint64_t reduce(const Q& x, std::uint64_t m) {
  Z num = x.get_num() % Z(static_cast<unsigned long>(m));
  if (num < 0) num += static_cast<unsigned long>(m);
  Z den = x.get_den() % Z(static_cast<unsigned long>(m));
  const std::uint64_t n = num.get_ui();
  const std::uint64_t d = den.get_ui();
  return mul_mod(n, inv_mod(d, m), m);
}

// H_n(s): 0 < k_1 < ... < k_d < n
inline Q mhs(std::uint64_t n, const std::vector<int>& s, std::uint64_t p = 0) {
  Q total = 0;
  std::function<void(std::size_t, std::uint64_t, Q)> rec = [&](std::size_t i, std::uint64_t lo, Q acc) {
    if (i == s.size()) {
      total += acc;
      return;
    }
    for (std::uint64_t k = lo + 1; k < n; ++k) {
      if (p != 0 && k % p == 0) continue;
      rec(i + 1, k, acc * inv_pow(k, s[i]));
    }
  };
  rec(0, 0, 1);
  return total;
}

// chain sum: u_1, gaps and u_d prime to p, u_d < p^r
inline Q chain_mhs(std::uint64_t p, unsigned r, const std::vector<int>& s) {
  const std::uint64_t n = upow(p, r);
  Q total = 0;
  std::function<void(std::size_t, std::uint64_t, Q)> rec = [&](std::size_t i, std::uint64_t prev, Q acc) {
    if (i == s.size()) {
      if (prev % p != 0) total += acc;
      return;
    }
    for (std::uint64_t u = prev + 1; u < n; ++u) {
      if ((u - prev) % p == 0) continue;
      rec(i + 1, u, acc * inv_pow(u, s[i]));
    }
  };
  rec(0, 0, 1);
  return total;
}

// Z_{p^r}(s) mod m by enumerating compositions.
inline std::uint64_t z_sum_mod(std::uint64_t p, unsigned r, const std::vector<int>& s, std::uint64_t m) {
  const std::uint64_t n = upow(p, r);
  std::map<std::pair<std::uint64_t, int>, std::uint64_t> cache;
  auto term = [&](std::uint64_t k, int e) {
    auto [it, fresh] = cache.try_emplace({k, e}, 0);
    if (fresh) it->second = pow_inv_mod(k, e, m);
    return it->second;
  };
  std::uint64_t total = 0;
  std::function<void(std::size_t, std::uint64_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t left,
                                                                          std::uint64_t acc) {
    if (i + 1 == s.size()) {
      if (left % p != 0) total = (total + mul_mod(acc, term(left, s[i]), m)) % m;
      return;
    }
    const std::uint64_t rest = s.size() - i - 1;
    for (std::uint64_t k = 1; k + rest <= left; ++k) {
      if (k % p == 0) continue;
      rec(i + 1, left - k, mul_mod(acc, term(k, s[i]), m));
    }
  };
  rec(0, n, 1 % m);
  return total;
}

inline Q z_sum(std::uint64_t p, unsigned r, const std::vector<int>& s) {
  const std::uint64_t n = upow(p, r);
  Q total = 0;
  std::function<void(std::size_t, std::uint64_t, Q)> rec = [&](std::size_t i, std::uint64_t left, Q acc) {
    if (i + 1 == s.size()) {
      if (left % p != 0) total += acc * inv_pow(left, s[i]);
      return;
    }
    for (std::uint64_t k = 1; k + (s.size() - i - 1) <= left; ++k) {
      if (k % p == 0) continue;
      rec(i + 1, left - k, acc * inv_pow(k, s[i]));
    }
  };
  rec(0, n, 1);
  return total;
}

// T_{p^r}(alphas; lambda): k_i and their sum u prime to p, u < p^r
inline Q mt_sum(std::uint64_t p, unsigned r, const std::vector<int>& alphas, int lambda) {
  const std::uint64_t n = upow(p, r);
  Q total = 0;
  std::function<void(std::size_t, std::uint64_t, Q)> rec = [&](std::size_t i, std::uint64_t used, Q acc) {
    if (i == alphas.size()) {
      if (used % p != 0) total += acc * inv_pow(used, lambda);
      return;
    }
    for (std::uint64_t k = 1; used + k < n; ++k) {
      if (k % p == 0) continue;
      rec(i + 1, used + k, acc * inv_pow(k, alphas[i]));
    }
  };
  rec(0, 0, 1);
  return total;
}

// Signed Mordell-Tornheim series summed directly over m_1 + ... + m_k < cutoff:
// prod sign_i^m_i / m_i^e_i times (sum m_i)^(-e_{k+1}).
inline double mt_series(const std::vector<int>& e, const std::vector<int>& signs, unsigned cutoff) {
  const std::size_t k = signs.size();
  double total = 0;
  std::function<void(std::size_t, unsigned, double)> rec = [&](std::size_t i, unsigned used, double acc) {
    if (i == k) {
      total += acc / std::pow(static_cast<double>(used), e[k]);
      return;
    }
    for (unsigned m = 1; used + m + (k - i - 1) < cutoff; ++m) {
      const double sg = (signs[i] < 0 && m % 2 == 1) ? -1.0 : 1.0;
      rec(i + 1, used + m, acc * sg / std::pow(static_cast<double>(m), e[i]));
    }
  };
  rec(0, 0, 1.0);
  return total;
}

// Akiyama-Tanigawa; gives B_1 = +1/2, so callers flip it.
inline Q bernoulli(unsigned n) {
  std::vector<Q> a(n + 1);
  for (unsigned m = 0; m <= n; ++m) {
    a[m] = Q(1, m + 1);
    for (unsigned j = m; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
  }
  return n == 1 ? Q(-1, 2) : a[0];
}

// coin-change count of partitions
inline Z partitions(unsigned n) {
  std::vector<Z> c(n + 1, 0);
  c[0] = 1;
  for (unsigned part = 1; part <= n; ++part) {
    for (unsigned i = part; i <= n; ++i) c[i] += c[i - part];
  }
  return c[n];
}

// Multisets of (exponent, sign) pairs with total exponent i and at least two
// entries, by direct enumeration in nonincreasing order.
inline Z signed_symbols(unsigned i) {
  Z count = 0;
  std::function<void(int, int, int, int)> rec = [&](int left, int max_s, int max_sign, int parts) {
    if (left == 0) {
      if (parts >= 2) ++count;
      return;
    }
    for (int s = std::min(left, max_s); s >= 1; --s) {
      for (int sign = 1; sign >= 0; --sign) {
        if (s == max_s && sign > max_sign) continue;
        rec(left - s, s, sign, parts + 1);
      }
    }
  };
  rec(static_cast<int>(i), static_cast<int>(i), 1, 0);
  return count;
}

// Lyndon words over odd letters with letter sum n, by generating all words.
inline std::uint64_t lyndon_odd(unsigned n) {
  std::uint64_t count = 0;
  std::vector<int> w;
  auto is_lyndon = [&]() {
    for (std::size_t k = 1; k < w.size(); ++k) {
      std::vector<int> rot(w.begin() + static_cast<long>(k), w.end());
      rot.insert(rot.end(), w.begin(), w.begin() + static_cast<long>(k));
      if (!(w < rot)) return false;
    }
    return true;
  };
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      if (is_lyndon()) ++count;
      return;
    }
    for (int letter = 1; letter <= left; letter += 2) {
      w.push_back(letter);
      rec(left - letter);
      w.pop_back();
    }
  };
  rec(static_cast<int>(n));
  return count;
}

}  // namespace oracle
