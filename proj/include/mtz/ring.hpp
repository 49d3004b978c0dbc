#pragma once

// Arithmetic policies for the hot summation loops. All three rings compute in
// Z / m Z and must agree bit for bit; the word rings are specializations of
// BigRing for moduli that fit machine words.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "mtz/exact.hpp"

namespace mtz::ring {

using u128 = unsigned __int128;

/// m < 2^32. Values fit 32 bits, so a dot product can accumulate many
/// 64-bit products before it has to reduce.
class Word32Ring {
 public:
  using value_type = std::uint32_t;

  explicit Word32Ring(const BigInt& m)
      : m_(static_cast<std::uint32_t>(m.get_ui())) {
    const std::uint64_t sq = static_cast<std::uint64_t>(m_ - 1) * (m_ - 1);
    block_ = sq == 0 ? SIZE_MAX : static_cast<std::size_t>(UINT64_MAX / sq);
    if (block_ == 0) block_ = 1;
  }

  static bool fits(const BigInt& m) { return m > 1 && m < BigInt(1UL << 32); }

  [[nodiscard]] value_type zero() const { return 0; }
  [[nodiscard]] value_type one() const { return m_ == 1 ? 0 : 1; }
  [[nodiscard]] value_type from(const BigInt& x) const {
    BigInt r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), m_);
    return static_cast<value_type>(r.get_ui());
  }
  [[nodiscard]] BigInt to_big(value_type x) const { return BigInt(static_cast<unsigned long>(x)); }
  [[nodiscard]] value_type add(value_type a, value_type b) const {
    const std::uint64_t s = static_cast<std::uint64_t>(a) + b;
    return static_cast<value_type>(s >= m_ ? s - m_ : s);
  }
  [[nodiscard]] value_type sub(value_type a, value_type b) const {
    return a >= b ? a - b : static_cast<value_type>(static_cast<std::uint64_t>(a) + m_ - b);
  }
  [[nodiscard]] value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % m_);
  }
  [[nodiscard]] bool is_zero(value_type a) const { return a == 0; }

  [[nodiscard]] value_type dot(const value_type* a, const value_type* b, std::int64_t n) const {
    std::uint64_t total = 0;
    std::int64_t i = 0;
    while (i < n) {
      const std::int64_t end = std::min<std::int64_t>(n, i + static_cast<std::int64_t>(std::min<std::size_t>(block_, INT64_MAX)));
      std::uint64_t acc = 0;
      for (; i < end; ++i) acc += static_cast<std::uint64_t>(a[i]) * b[i];
      total = (total + acc % m_) % m_;
    }
    return static_cast<value_type>(total);
  }

 private:
  std::uint32_t m_;
  std::size_t block_;
};

/// m < 2^63, products through 128-bit integers.
class Word64Ring {
 public:
  using value_type = std::uint64_t;

  explicit Word64Ring(const BigInt& m) {
    mpz_export(&m_, nullptr, -1, sizeof(m_), 0, 0, m.get_mpz_t());
  }

  static bool fits(const BigInt& m) { return m > 1 && mpz_sizeinbase(m.get_mpz_t(), 2) <= 63; }

  [[nodiscard]] value_type zero() const { return 0; }
  [[nodiscard]] value_type one() const { return 1; }
  [[nodiscard]] value_type from(const BigInt& x) const {
    BigInt r = x % big();
    if (r < 0) r += big();
    value_type v = 0;
    mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, r.get_mpz_t());
    return v;
  }
  [[nodiscard]] BigInt to_big(value_type x) const {
    BigInt r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof(x), 0, 0, &x);
    return r;
  }
  [[nodiscard]] value_type add(value_type a, value_type b) const {
    const value_type s = a + b;
    return s >= m_ ? s - m_ : s;
  }
  [[nodiscard]] value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + m_ - b; }
  [[nodiscard]] value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>(static_cast<u128>(a) * b % m_);
  }
  [[nodiscard]] bool is_zero(value_type a) const { return a == 0; }

  [[nodiscard]] value_type dot(const value_type* a, const value_type* b, std::int64_t n) const {
    value_type acc = 0;
    for (std::int64_t i = 0; i < n; ++i) acc = add(acc, mul(a[i], b[i]));
    return acc;
  }

 private:
  [[nodiscard]] BigInt big() const { return to_big(m_); }
  value_type m_ = 0;
};

/// General path, any modulus.
class BigRing {
 public:
  using value_type = BigInt;

  explicit BigRing(BigInt m) : m_(std::move(m)) {}

  [[nodiscard]] value_type zero() const { return 0; }
  [[nodiscard]] value_type one() const { return m_ == 1 ? BigInt(0) : BigInt(1); }
  [[nodiscard]] value_type from(const BigInt& x) const {
    BigInt r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m_.get_mpz_t());
    return r;
  }
  [[nodiscard]] BigInt to_big(const value_type& x) const { return x; }
  [[nodiscard]] value_type add(const value_type& a, const value_type& b) const {
    BigInt s = a + b;
    if (s >= m_) s -= m_;
    return s;
  }
  [[nodiscard]] value_type sub(const value_type& a, const value_type& b) const {
    BigInt s = a - b;
    if (s < 0) s += m_;
    return s;
  }
  [[nodiscard]] value_type mul(const value_type& a, const value_type& b) const {
    BigInt s = a * b;
    mpz_mod(s.get_mpz_t(), s.get_mpz_t(), m_.get_mpz_t());
    return s;
  }
  [[nodiscard]] bool is_zero(const value_type& a) const { return a == 0; }

  [[nodiscard]] value_type dot(const value_type* a, const value_type* b, std::int64_t n) const {
    BigInt acc = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      if (a[i] != 0 && b[i] != 0) mpz_addmul(acc.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
    }
    return from(acc);
  }

 private:
  BigInt m_;
};

/// Invokes fn with the narrowest ring that can hold residues mod m.
template <class Fn>
decltype(auto) dispatch(const BigInt& m, Fn&& fn) {
  if (Word32Ring::fits(m)) return fn(Word32Ring(m));
  if (Word64Ring::fits(m)) return fn(Word64Ring(m));
  return fn(BigRing(m));
}

/// Work split for the outermost summation index.
struct ParallelOptions {
  unsigned workers = 1;
  /// Outer indices per chunk. Chunk boundaries are fixed by this value alone,
  /// never by the worker count.
  std::size_t chunk = 16;
};

/// Sums chunk(begin, end) over [first, last) in fixed-size chunks. Partial
/// results are combined in chunk order, so the result does not depend on
/// the number of workers.
template <class Ring, class ChunkFn>
typename Ring::value_type parallel_sum(const Ring& ring, std::int64_t first, std::int64_t last,
                                       const ParallelOptions& opts, ChunkFn&& chunk_fn) {
  using V = typename Ring::value_type;
  if (last <= first) return ring.zero();
  const auto chunk = static_cast<std::int64_t>(std::max<std::size_t>(1, opts.chunk));
  const std::int64_t count = (last - first + chunk - 1) / chunk;
  std::vector<V> partial(static_cast<std::size_t>(count), ring.zero());
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t c = next++; c < count; c = next++) {
      const std::int64_t b = first + c * chunk;
      partial[static_cast<std::size_t>(c)] = chunk_fn(b, std::min(last, b + chunk));
    }
  };
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::int64_t>(std::max(1U, opts.workers), count));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  V total = ring.zero();
  for (const V& v : partial) total = ring.add(total, v);
  return total;
}

}  // namespace mtz::ring
