#include "mtz/finite_sums.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "mtz/sum_kernels.hpp"

namespace mtz {

ExponentIndex::ExponentIndex(std::vector<int> exponents) : e_(std::move(exponents)) {
  if (e_.empty()) fail(ErrorCode::InvalidArgument, "exponent index must have depth >= 1");
  for (int s : e_) {
    if (s < 1) fail(ErrorCode::InvalidArgument, "exponents must be positive");
  }
}

ExponentIndex ExponentIndex::parse(std::string_view text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view piece = text.substr(pos, comma - pos);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc() || ptr != piece.data() + piece.size() || piece.empty()) {
      fail(ErrorCode::InvalidArgument, "bad exponent list '" + std::string(text) + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return ExponentIndex(std::move(out));
}

int ExponentIndex::weight() const noexcept { return std::accumulate(e_.begin(), e_.end(), 0); }

ExponentIndex ExponentIndex::sorted() const {
  std::vector<int> v = e_;
  std::sort(v.begin(), v.end());
  return ExponentIndex(std::move(v));
}

std::string ExponentIndex::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i != 0) out += ',';
    out += std::to_string(e_[i]);
  }
  return out;
}

void MtIndex::validate() const {
  if (alphas.empty() || lambdas.empty()) {
    fail(ErrorCode::InvalidArgument, "MT index needs at least one alpha and one lambda");
  }
  for (int v : alphas) {
    if (v < 0) fail(ErrorCode::InvalidArgument, "negative alpha");
  }
  for (int v : lambdas) {
    if (v < 0) fail(ErrorCode::InvalidArgument, "negative lambda");
  }
}

int MtIndex::weight() const {
  return std::accumulate(alphas.begin(), alphas.end(), 0) +
         std::accumulate(lambdas.begin(), lambdas.end(), 0);
}

namespace {

void check_modular_args(std::uint64_t p, unsigned r, unsigned precision) {
  require_prime(p);
  if (r == 0) fail(ErrorCode::InvalidArgument, "r must be >= 1");
  if (precision == 0) fail(ErrorCode::InvalidArgument, "precision must be >= 1");
  if (ipow(p, r) > BigInt(1UL << 26)) {
    fail(ErrorCode::InvalidArgument, "p^r too large to enumerate");
  }
}

void check_exact_args(std::uint64_t p, unsigned r, std::size_t depth, const ExactLimits& limits) {
  require_prime(p);
  if (r == 0) fail(ErrorCode::InvalidArgument, "r must be >= 1");
  if (ipow(p, r) > BigInt(static_cast<unsigned long>(limits.max_modulus)) ||
      depth > limits.max_depth) {
    fail(ErrorCode::ExactLimitExceeded,
         "exact evaluation limited to p^r <= " + std::to_string(limits.max_modulus) +
             " and depth <= " + std::to_string(limits.max_depth));
  }
}

Rational inv_pow(std::uint64_t k, int s) {
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), k, static_cast<unsigned long>(s));
  return Rational(BigInt(1), den);
}

// Shared rational tables: t[u] = u^(-s) when u is prime to p (or always when
// unit_only is false), otherwise 0.
std::vector<Rational> rational_table(std::uint64_t n, std::uint64_t p, int s, bool unit_only) {
  std::vector<Rational> t(n, Rational(0));
  for (std::uint64_t u = 1; u < n; ++u) {
    if (unit_only && u % p == 0) continue;
    t[u] = inv_pow(u, s);
  }
  return t;
}

std::vector<Rational> rational_chain_step(const std::vector<Rational>& f,
                                          const std::vector<Rational>& g, std::uint64_t p) {
  const std::size_t n = f.size();
  std::vector<Rational> out(n, Rational(0));
  std::vector<Rational> by_class(p, Rational(0));
  Rational total = 0;
  for (std::size_t u = 1; u < n; ++u) {
    const std::size_t c = u % p;
    if (g[u] != 0) out[u] = g[u] * (total - by_class[c]);
    total += f[u];
    by_class[c] += f[u];
  }
  return out;
}

std::vector<Rational> rational_convolve(const std::vector<Rational>& a,
                                        const std::vector<Rational>& b) {
  const std::size_t n = a.size();
  std::vector<Rational> out(n, Rational(0));
  for (std::size_t u = 2; u < n; ++u) {
    Rational acc = 0;
    for (std::size_t k = 1; k < u; ++k) {
      if (a[k] != 0 && b[u - k] != 0) acc += a[k] * b[u - k];
    }
    out[u] = acc;
  }
  return out;
}

Rational rational_total(const std::vector<Rational>& f) {
  Rational acc = 0;
  for (const auto& x : f) acc += x;
  return acc;
}

// Divides a value computed as p^K * x mod p^(M + K) back down to x mod p^M.
Residue unscale(std::uint64_t p, unsigned precision, unsigned scale, const BigInt& scaled) {
  if (scale == 0) return Residue(p, precision, scaled);
  const BigInt pk = ipow(p, scale);
  if (mpz_divisible_p(scaled.get_mpz_t(), pk.get_mpz_t()) == 0) {
    fail(ErrorCode::NonIntegral, "sum is not p-integral");
  }
  return Residue(p, precision, BigInt(scaled / pk));
}

template <class Ring>
typename Ring::value_type chain_kernel(const Ring& ring, std::uint64_t p, unsigned r,
                                       const BigInt& modulus, const ExponentIndex& s,
                                       unsigned spare_scale) {
  const InversePowerTable<Ring> tables(ring, p, r, modulus, s.exponents());
  const std::size_t d = s.depth();
  auto f = tables[s[0]];
  for (std::size_t i = 1; i < d; ++i) {
    if (i + 1 < d) {
      f = kernel::chain_step(ring, f, kernel::scaled_power_table(ring, p, r, modulus, s[i]), p);
    } else {
      f = kernel::chain_step(ring, f, tables[s[i]], p);
    }
  }
  return ring.mul(kernel::total(ring, f), ring.from(ipow(p, spare_scale)));
}

}  // namespace

Rational mhs(std::uint64_t n, const ExponentIndex& s) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  const std::size_t d = s.depth();
  std::vector<Rational> acc(d + 1, Rational(0));
  acc[0] = 1;
  for (std::uint64_t k = 1; k < n; ++k) {
    for (std::size_t i = d; i >= 1; --i) {
      if (acc[i - 1] != 0) acc[i] += acc[i - 1] * inv_pow(k, s[i - 1]);
    }
  }
  return acc[d];
}

Rational mhs_p_restricted(std::uint64_t n, std::uint64_t p, const ExponentIndex& s) {
  require_prime(p);
  if (n == 0) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  const std::size_t d = s.depth();
  std::vector<Rational> acc(d + 1, Rational(0));
  acc[0] = 1;
  for (std::uint64_t k = 1; k < n; ++k) {
    if (k % p == 0) continue;
    for (std::size_t i = d; i >= 1; --i) {
      if (acc[i - 1] != 0) acc[i] += acc[i - 1] * inv_pow(k, s[i - 1]);
    }
  }
  return acc[d];
}

unsigned chain_scale(unsigned r, const ExponentIndex& s) {
  unsigned k = 0;
  for (std::size_t i = 1; i + 1 < s.depth(); ++i) k += (r - 1) * static_cast<unsigned>(s[i]);
  return k;
}

BigInt chain_mhs_scaled(std::uint64_t p, unsigned r, const ExponentIndex& s, unsigned precision,
                        unsigned scale) {
  check_modular_args(p, r, precision);
  const unsigned needed = chain_scale(r, s);
  if (scale < needed) fail(ErrorCode::InvalidArgument, "scale below chain_scale");
  const BigInt modulus = ipow(p, precision + scale);
  return ring::dispatch(modulus, [&](const auto& ring) {
    return ring.to_big(chain_kernel(ring, p, r, modulus, s, scale - needed));
  });
}

Residue chain_mhs(std::uint64_t p, unsigned r, const ExponentIndex& s, unsigned precision) {
  const unsigned k = chain_scale(r, s);
  return unscale(p, precision, k, chain_mhs_scaled(p, r, s, precision, k));
}

Rational chain_mhs_exact(std::uint64_t p, unsigned r, const ExponentIndex& s,
                         const ExactLimits& limits) {
  check_exact_args(p, r, s.depth(), limits);
  const std::uint64_t n = ipow(p, r).get_ui();
  auto f = rational_table(n, p, s[0], true);
  for (std::size_t i = 1; i < s.depth(); ++i) {
    const bool last = i + 1 == s.depth();
    f = rational_chain_step(f, rational_table(n, p, s[i], last), p);
  }
  return rational_total(f);
}

Residue z_sum(std::uint64_t p, unsigned r, const ExponentIndex& s, unsigned precision,
              const ParallelOptions& opts) {
  check_modular_args(p, r, precision);
  if (s.depth() < 2) fail(ErrorCode::InvalidArgument, "Z-sums need depth >= 2");
  const BigInt modulus = ipow(p, precision);
  const auto n = static_cast<std::int64_t>(ipow(p, r).get_ui());
  const BigInt value = ring::dispatch(modulus, [&](const auto& ring) {
    using Ring = std::decay_t<decltype(ring)>;
    using V = typename Ring::value_type;
    const InversePowerTable<Ring> tables(ring, p, r, modulus, s.exponents());
    // The last part is fixed by the others: k_d = n - (k_1 + ... + k_{d-1}).
    const auto& last = tables[s[s.depth() - 1]];
    std::vector<V> tail(static_cast<std::size_t>(n), ring.zero());
    for (std::int64_t used = 1; used < n; ++used) tail[used] = last[n - used];
    std::vector<const std::vector<V>*> factors;
    for (std::size_t i = 0; i + 1 < s.depth(); ++i) factors.push_back(&tables[s[i]]);
    return ring.to_big(kernel::nested_dot(ring, std::span<const std::vector<V>* const>(factors),
                                          tail, n, opts));
  });
  return Residue(p, precision, value);
}

Rational z_sum_exact(std::uint64_t p, unsigned r, const ExponentIndex& s,
                     const ExactLimits& limits) {
  check_exact_args(p, r, s.depth(), limits);
  if (s.depth() < 2) fail(ErrorCode::InvalidArgument, "Z-sums need depth >= 2");
  const std::uint64_t n = ipow(p, r).get_ui();
  auto g = rational_table(n, p, s[0], true);
  for (std::size_t i = 1; i + 1 < s.depth(); ++i) g = rational_convolve(g, rational_table(n, p, s[i], true));
  const int last = s[s.depth() - 1];
  Rational acc = 0;
  for (std::uint64_t used = 1; used < n; ++used) {
    const std::uint64_t k = n - used;
    if (g[used] != 0 && k % p != 0) acc += g[used] * inv_pow(k, last);
  }
  return acc;
}

Residue mt_sum(std::uint64_t p, unsigned r, std::span<const int> alphas, int lambda,
               unsigned precision, const ParallelOptions& opts) {
  check_modular_args(p, r, precision);
  MtIndex{{alphas.begin(), alphas.end()}, {lambda}}.validate();
  const BigInt modulus = ipow(p, precision);
  const auto n = static_cast<std::int64_t>(ipow(p, r).get_ui());
  std::vector<int> exps(alphas.begin(), alphas.end());
  exps.push_back(lambda);
  const BigInt value = ring::dispatch(modulus, [&](const auto& ring) {
    using Ring = std::decay_t<decltype(ring)>;
    using V = typename Ring::value_type;
    const InversePowerTable<Ring> tables(ring, p, r, modulus, exps);
    std::vector<const std::vector<V>*> factors;
    for (int a : alphas) factors.push_back(&tables[a]);
    return ring.to_big(kernel::nested_dot(ring, std::span<const std::vector<V>* const>(factors),
                                          tables[lambda], n, opts));
  });
  return Residue(p, precision, value);
}

Rational mt_sum_exact(std::uint64_t p, unsigned r, std::span<const int> alphas, int lambda,
                      const ExactLimits& limits) {
  MtIndex{{alphas.begin(), alphas.end()}, {lambda}}.validate();
  check_exact_args(p, r, alphas.size() + 1, limits);
  const std::uint64_t n = ipow(p, r).get_ui();
  auto g = rational_table(n, p, alphas[0], true);
  for (std::size_t i = 1; i < alphas.size(); ++i) g = rational_convolve(g, rational_table(n, p, alphas[i], true));
  Rational acc = 0;
  for (std::uint64_t u = 1; u < n; ++u) {
    if (g[u] != 0 && u % p != 0) acc += g[u] * inv_pow(u, lambda);
  }
  return acc;
}

Residue mt_restricted(std::uint64_t p, unsigned r, const MtIndex& idx, unsigned precision) {
  check_modular_args(p, r, precision);
  idx.validate();
  unsigned scale = 0;
  for (std::size_t j = 1; j + 1 < idx.lambdas.size(); ++j) {
    scale += (r - 1) * static_cast<unsigned>(idx.lambdas[j]);
  }
  const BigInt modulus = ipow(p, precision + scale);
  std::vector<int> exps = idx.alphas;
  exps.insert(exps.end(), idx.lambdas.begin(), idx.lambdas.end());
  const BigInt value = ring::dispatch(modulus, [&](const auto& ring) {
    using Ring = std::decay_t<decltype(ring)>;
    const InversePowerTable<Ring> tables(ring, p, r, modulus, exps);
    auto g = tables[idx.alphas[0]];
    for (std::size_t i = 1; i < idx.alphas.size(); ++i) {
      g = kernel::convolve(ring, g, tables[idx.alphas[i]]);
    }
    // u_1 = k_1 + ... + k_m must be prime to p.
    const auto& first = tables[idx.lambdas[0]];
    for (std::size_t u = 0; u < g.size(); ++u) g[u] = ring.mul(g[u], first[u]);
    const std::size_t n_chain = idx.lambdas.size();
    for (std::size_t j = 1; j < n_chain; ++j) {
      if (j + 1 < n_chain) {
        g = kernel::chain_step(ring, g,
                               kernel::scaled_power_table(ring, p, r, modulus, idx.lambdas[j]), p);
      } else {
        g = kernel::chain_step(ring, g, tables[idx.lambdas[j]], p);
      }
    }
    return ring.to_big(kernel::total(ring, g));
  });
  return unscale(p, precision, scale, value);
}

Rational mt_restricted_exact(std::uint64_t p, unsigned r, const MtIndex& idx,
                             const ExactLimits& limits) {
  idx.validate();
  check_exact_args(p, r, idx.alphas.size() + idx.lambdas.size(), limits);
  const std::uint64_t n = ipow(p, r).get_ui();
  auto g = rational_table(n, p, idx.alphas[0], true);
  for (std::size_t i = 1; i < idx.alphas.size(); ++i) {
    g = rational_convolve(g, rational_table(n, p, idx.alphas[i], true));
  }
  const auto first = rational_table(n, p, idx.lambdas[0], true);
  for (std::size_t u = 0; u < n; ++u) g[u] *= first[u];
  for (std::size_t j = 1; j < idx.lambdas.size(); ++j) {
    const bool last = j + 1 == idx.lambdas.size();
    g = rational_chain_step(g, rational_table(n, p, idx.lambdas[j], last), p);
  }
  return rational_total(g);
}

double z_sum_work_estimate(std::uint64_t p, unsigned r, std::size_t depth) {
  // Number of compositions of p^r into depth parts, C(p^r - 1, depth - 1).
  const double n = std::pow(static_cast<double>(p), static_cast<double>(r));
  double c = 1.0;
  for (std::size_t i = 1; i < depth; ++i) c = c * (n - static_cast<double>(i)) / static_cast<double>(i);
  return c;
}

}  // namespace mtz
