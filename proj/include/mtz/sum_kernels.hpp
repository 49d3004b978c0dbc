#pragma once

// Ring-generic loops behind finite_sums.hpp. Exposed so tests can run the
// same kernel under every ring and compare results.

#include <map>
#include <span>
#include <vector>

#include "mtz/exact.hpp"
#include "mtz/ring.hpp"

namespace mtz {

/// For each exponent s: table[s][k] = k^(-s) mod m for 0 < k < p^r prime to p,
/// and 0 at every k divisible by p (including k = 0). The zeros double as the
/// coprimality mask in the summation loops.
template <class Ring>
class InversePowerTable {
 public:
  using value_type = typename Ring::value_type;

  InversePowerTable(const Ring& ring, std::uint64_t p, unsigned r, const BigInt& modulus,
                    std::span<const int> exponents)
      : p_(p), r_(r), n_(ipow(p, r).get_ui()) {
    std::vector<value_type> inv(n_, ring.zero());
    for (std::uint64_t k = 1; k < n_; ++k) {
      if (k % p == 0) continue;
      BigInt x;
      const BigInt kk(static_cast<unsigned long>(k));
      mpz_invert(x.get_mpz_t(), kk.get_mpz_t(), modulus.get_mpz_t());
      inv[k] = ring.from(x);
    }
    for (int s : exponents) {
      if (s < 0) fail(ErrorCode::InvalidArgument, "negative exponent");
      if (tables_.contains(s)) continue;
      std::vector<value_type> t(n_, ring.zero());
      for (std::uint64_t k = 1; k < n_; ++k) {
        if (k % p == 0) continue;
        value_type v = ring.one();
        for (int e = 0; e < s; ++e) v = ring.mul(v, inv[k]);
        t[k] = v;
      }
      tables_.emplace(s, std::move(t));
    }
  }

  [[nodiscard]] const std::vector<value_type>& operator[](int s) const {
    const auto it = tables_.find(s);
    if (it == tables_.end()) fail(ErrorCode::InvalidArgument, "exponent not tabulated");
    return it->second;
  }
  [[nodiscard]] std::uint64_t size() const noexcept { return n_; }
  [[nodiscard]] std::uint64_t prime() const noexcept { return p_; }
  [[nodiscard]] unsigned power() const noexcept { return r_; }

 private:
  std::uint64_t p_;
  unsigned r_;
  std::uint64_t n_;
  std::map<int, std::vector<value_type>> tables_;
};

template <class Ring>
InversePowerTable<Ring> build_inverse_tables(const Ring& ring, std::uint64_t p, unsigned r,
                                             const BigInt& modulus,
                                             std::span<const int> exponents) {
  return InversePowerTable<Ring>(ring, p, r, modulus, exponents);
}

namespace kernel {

/// table[u] = p^(c - v(u) s) * w^(-s) mod m where u = p^v w and
/// c = (r - 1) s, for every 0 < u < p^r. This is p^c * u^(-s), which is
/// p-integral for all u below p^r.
template <class Ring>
std::vector<typename Ring::value_type> scaled_power_table(const Ring& ring, std::uint64_t p,
                                                          unsigned r, const BigInt& modulus,
                                                          int s) {
  using V = typename Ring::value_type;
  const std::uint64_t n = ipow(p, r).get_ui();
  const unsigned c = (r - 1) * static_cast<unsigned>(s);
  std::vector<V> t(n, ring.zero());
  for (std::uint64_t u = 1; u < n; ++u) {
    std::uint64_t w = u;
    unsigned v = 0;
    while (w % p == 0) {
      w /= p;
      ++v;
    }
    BigInt x;
    const BigInt ww(static_cast<unsigned long>(w));
    mpz_invert(x.get_mpz_t(), ww.get_mpz_t(), modulus.get_mpz_t());
    mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(s), modulus.get_mpz_t());
    x *= ipow(p, c - v * static_cast<unsigned>(s));
    t[u] = ring.from(x);
  }
  return t;
}

/// sum over k_1..k_j >= 1 with P = k_1 + ... + k_j < n of
///   f_1[k_1] ... f_j[k_j] * tail[P].
/// The last factor is folded into a dot product against tail.
template <class Ring>
typename Ring::value_type nested_dot(const Ring& ring,
                                     std::span<const std::vector<typename Ring::value_type>* const> f,
                                     const std::vector<typename Ring::value_type>& tail,
                                     std::int64_t n, const ring::ParallelOptions& opts) {
  using V = typename Ring::value_type;
  const auto j = static_cast<std::int64_t>(f.size());
  if (j == 0) fail(ErrorCode::InvalidArgument, "nested_dot needs at least one factor");
  if (n <= j) return ring.zero();

  if (j == 1) {
    const V* a = f[0]->data();
    return ring::parallel_sum(ring, 1, n, opts, [&](std::int64_t b, std::int64_t e) {
      return ring.dot(a + b, tail.data() + b, e - b);
    });
  }

  auto rec = [&](auto&& self, std::int64_t level, std::int64_t used, const V& prod) -> V {
    if (level == j - 1) {
      const std::int64_t len = n - used - 1;
      if (len <= 0) return ring.zero();
      return ring.mul(prod, ring.dot(f[level]->data() + 1, tail.data() + used + 1, len));
    }
    const std::int64_t kmax = n - 1 - used - (j - 1 - level);
    const auto& t = *f[level];
    V acc = ring.zero();
    for (std::int64_t k = 1; k <= kmax; ++k) {
      if (ring.is_zero(t[k])) continue;
      acc = ring.add(acc, self(self, level + 1, used + k, ring.mul(prod, t[k])));
    }
    return acc;
  };

  const auto& first = *f[0];
  return ring::parallel_sum(ring, 1, n - (j - 1), opts, [&](std::int64_t b, std::int64_t e) {
    V acc = ring.zero();
    for (std::int64_t k = b; k < e; ++k) {
      if (ring.is_zero(first[k])) continue;
      acc = ring.add(acc, rec(rec, 1, k, first[k]));
    }
    return acc;
  });
}

/// out[u] = g[u] * sum_{v < u, v != u mod p} f[v]
template <class Ring>
std::vector<typename Ring::value_type> chain_step(const Ring& ring,
                                                  const std::vector<typename Ring::value_type>& f,
                                                  const std::vector<typename Ring::value_type>& g,
                                                  std::uint64_t p) {
  using V = typename Ring::value_type;
  const std::size_t n = f.size();
  std::vector<V> out(n, ring.zero());
  std::vector<V> by_class(p, ring.zero());
  V total = ring.zero();
  for (std::size_t u = 1; u < n; ++u) {
    // total and by_class hold sums over v < u here.
    const std::size_t c = u % p;
    if (!ring.is_zero(g[u])) out[u] = ring.mul(g[u], ring.sub(total, by_class[c]));
    total = ring.add(total, f[u]);
    by_class[c] = ring.add(by_class[c], f[u]);
  }
  return out;
}

/// out[u] = sum_{k=1}^{u-1} a[k] * b[u - k]
template <class Ring>
std::vector<typename Ring::value_type> convolve(const Ring& ring,
                                                const std::vector<typename Ring::value_type>& a,
                                                const std::vector<typename Ring::value_type>& b) {
  using V = typename Ring::value_type;
  const std::size_t n = a.size();
  std::vector<V> rb(n, ring.zero());
  for (std::size_t i = 0; i < n; ++i) rb[i] = b[n - 1 - i];
  std::vector<V> out(n, ring.zero());
  for (std::size_t u = 2; u < n; ++u) {
    out[u] = ring.dot(a.data() + 1, rb.data() + (n - u), static_cast<std::int64_t>(u - 1));
  }
  return out;
}

template <class Ring>
typename Ring::value_type total(const Ring& ring, const std::vector<typename Ring::value_type>& f) {
  auto acc = ring.zero();
  for (const auto& x : f) acc = ring.add(acc, x);
  return acc;
}

}  // namespace kernel

}  // namespace mtz
