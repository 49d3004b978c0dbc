#include <doctest.h>

#include <algorithm>
#include <random>

#include "mtz/finite_sums.hpp"
#include "mtz/sum_kernels.hpp"
#include "oracles.hpp"

using namespace mtz;

namespace {

Residue res(std::uint64_t p, unsigned e, const Rational& q) { return reduce_mod(q, p, e); }

std::vector<std::vector<int>> small_indices(std::size_t depth, int max_entry) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(depth, 1);
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < depth && cur[i] == max_entry) cur[i++] = 1;
    if (i == depth) break;
    ++cur[i];
  }
  return out;
}

}  // namespace

TEST_CASE("mhs") {
  CHECK(mhs(1, {1}) == 0);
  CHECK(mhs(5, {1}) == Rational(25, 12));
  CHECK(mhs(5, {1, 2}) == Rational(17, 32));
  CHECK(mhs_p_restricted(6, 5, {1}) == Rational(25, 12));
  CHECK(mhs_p_restricted(5, 7, {1, 2}) == Rational(17, 32));
  CHECK(mhs_p_restricted(1, 3, {2}) == 0);
  for (auto s : small_indices(3, 3)) {
    CHECK(mhs(12, ExponentIndex(s)) == oracle::mhs(12, s));
    CHECK(mhs_p_restricted(14, 3, ExponentIndex(s)) == oracle::mhs(14, s, 3));
  }
}

TEST_CASE("chain mhs") {
  CHECK(chain_mhs(5, 1, {1, 1}, 1).value() == 0);
  CHECK(chain_mhs_exact(5, 1, {1, 1}) == Rational(35, 24));
  CHECK(chain_mhs_exact(3, 2, {1, 1}) == Rational(1287, 1120));
  CHECK(chain_mhs(3, 2, {1, 1}, 2) == res(3, 2, Rational(1287, 1120)));
  for (auto s : small_indices(3, 2)) {
    const ExponentIndex idx(s);
    CHECK(chain_mhs(7, 1, idx, 2) == res(7, 2, oracle::mhs(7, s)));
    CHECK(chain_mhs_exact(3, 2, idx) == oracle::chain_mhs(3, 2, s));
  }
  for (auto s : small_indices(2, 3)) {
    CHECK(chain_mhs(5, 2, ExponentIndex(s), 3) == res(5, 3, oracle::chain_mhs(5, 2, s)));
  }
}

TEST_CASE("chain mhs scaling") {
  const ExponentIndex s{1, 2, 1};
  const Rational exact = oracle::chain_mhs(3, 2, s.exponents());
  const unsigned k = chain_scale(2, s);
  const BigInt scaled = chain_mhs_scaled(3, 2, s, 2, k);
  const BigInt mod = ipow(3, 2 + k);
  Rational shifted = exact * Rational(ipow(3, k));
  CHECK(shifted.get_den() % 3 != 0);
  CHECK(res(3, 2 + k, shifted).value() == ((scaled % mod) + mod) % mod);
}

TEST_CASE("z sums") {
  CHECK(z_sum(5, 1, {1, 1, 1}, 1).value() == 3);
  CHECK(z_sum(5, 1, {1, 1}, 1).value() == 0);
  CHECK(z_sum(5, 1, {1, 1, 1}, 2).value() == 8);
  CHECK(z_sum_exact(5, 1, {1, 1, 1}) == Rational(7, 4));
  for (std::size_t d = 2; d <= 4; ++d) {
    for (auto s : small_indices(d, 3)) {
      const ExponentIndex idx(s);
      CHECK(z_sum(7, 1, idx, 3).value() == oracle::z_sum_mod(7, 1, s, 343));
      CHECK(z_sum(3, 2, idx, 4).value() == oracle::z_sum_mod(3, 2, s, 81));
    }
  }
  for (auto s : small_indices(3, 2)) {
    const ExponentIndex idx(s);
    const Rational exact = z_sum_exact(11, 1, idx);
    CHECK(exact == oracle::z_sum(11, 1, s));
    CHECK(z_sum(11, 1, idx, 2) == res(11, 2, exact));
  }
}

TEST_CASE("moduli beyond one machine word agree with the oracle") {
  const std::vector<int> s{2, 1, 3};
  // 5^14 > 2^32, 5^28 > 2^63
  CHECK(z_sum(5, 2, ExponentIndex(s), 14).value() ==
        res(5, 14, oracle::z_sum(5, 2, s)).value());
  CHECK(z_sum(5, 2, ExponentIndex(s), 28).value() ==
        res(5, 28, oracle::z_sum(5, 2, s)).value());
}

TEST_CASE("rings agree on random dot products") {
  std::mt19937_64 gen(7);
  const BigInt m(4294967291UL);  // prime below 2^32
  ring::Word32Ring a(m);
  ring::Word64Ring b(m);
  ring::BigRing c(m);
  std::vector<std::uint32_t> x32(1000), y32(1000);
  std::vector<std::uint64_t> x64(1000), y64(1000);
  std::vector<BigInt> xb(1000), yb(1000);
  for (int i = 0; i < 1000; ++i) {
    x64[i] = gen() % 4294967291UL;
    y64[i] = gen() % 4294967291UL;
    x32[i] = static_cast<std::uint32_t>(x64[i]);
    y32[i] = static_cast<std::uint32_t>(y64[i]);
    xb[i] = BigInt(static_cast<unsigned long>(x64[i]));
    yb[i] = BigInt(static_cast<unsigned long>(y64[i]));
  }
  BigInt expect = 0;
  for (int i = 0; i < 1000; ++i) expect += xb[i] * yb[i];
  expect %= m;
  CHECK(a.to_big(a.dot(x32.data(), y32.data(), 1000)) == expect);
  CHECK(b.to_big(b.dot(x64.data(), y64.data(), 1000)) == expect);
  CHECK(c.to_big(c.dot(xb.data(), yb.data(), 1000)) == expect);
}

TEST_CASE("inverse power tables") {
  ring::dispatch(BigInt(5), [](const auto& ring) {
    const int one[] = {1};
    auto t = build_inverse_tables(ring, 5, 1, BigInt(5), one);
    CHECK(ring.to_big(t[1][1]) == 1);
    CHECK(ring.to_big(t[1][2]) == 3);
    CHECK(ring.to_big(t[1][3]) == 2);
    CHECK(ring.to_big(t[1][4]) == 4);
    return 0;
  });
  ring::dispatch(BigInt(25), [](const auto& ring) {
    const int two[] = {2, 3};
    auto t = build_inverse_tables(ring, 5, 2, BigInt(25), two);
    CHECK(ring.to_big(t[2][2]) == 19);
    for (std::uint64_t k = 1; k < 25; ++k) {
      if (k % 5 == 0) continue;
      BigInt back = ring.to_big(t[3][k]) * BigInt(static_cast<unsigned long>(k * k * k));
      CHECK(back % 25 == 1);
    }
    return 0;
  });
}

TEST_CASE("worker count never changes a residue") {
  const ExponentIndex s{1, 2, 1, 1};
  const Residue one = z_sum(7, 2, s, 4, {1, 16});
  for (unsigned w : {2U, 3U, 5U}) CHECK(z_sum(7, 2, s, 4, {w, 16}) == one);
  const int alphas[] = {1, 2};
  const Residue m1 = mt_sum(5, 3, alphas, 3, 6, {1, 8});
  CHECK(mt_sum(5, 3, alphas, 3, 6, {3, 8}) == m1);
}

TEST_CASE("permutation symmetry") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> s{1, 2, 3, 1};
    std::shuffle(s.begin(), s.end(), gen);
    CHECK(z_sum(5, 2, ExponentIndex(s), 4) == z_sum(5, 2, {1, 1, 2, 3}, 4));
    std::vector<int> a{1, 3, 2};
    std::shuffle(a.begin(), a.end(), gen);
    const int sorted[] = {1, 2, 3};
    CHECK(mt_sum(7, 1, a, 2, 3) == mt_sum(7, 1, sorted, 2, 3));
  }
}

TEST_CASE("finite Mordell-Tornheim sums") {
  const int a11[] = {1, 1};
  CHECK(mt_sum_exact(5, 1, a11, 1) == Rational(17, 16));
  CHECK(mt_sum(5, 1, a11, 1, 1).value() == 2);
  CHECK(mt_sum(3, 1, a11, 1, 1).value() == 2);
  CHECK(mt_sum(5, 1, a11, 2, 2) == res(5, 2, Rational(241, 576)));
  for (auto a : small_indices(2, 3)) {
    for (int l = 1; l <= 3; ++l) {
      CHECK(mt_sum(3, 2, a, l, 3) == res(3, 3, oracle::mt_sum(3, 2, a, l)));
      CHECK(mt_sum_exact(7, 1, a, l) == oracle::mt_sum(7, 1, a, l));
    }
  }
}

TEST_CASE("chain-restricted Mordell-Tornheim sums") {
  CHECK(mt_restricted(3, 1, {{1, 1}, {1, 1}}, 1).value() == 0);
  const Rational by_hand = Rational(1, 2) + Rational(1, 3) + Rational(1, 4) + Rational(1, 12) +
                           Rational(1, 16) + Rational(1, 36);
  CHECK(mt_restricted(5, 1, {{1}, {1, 1}}, 1) == res(5, 1, by_hand));
  CHECK(mt_restricted_exact(5, 1, {{1}, {1, 1}}) == by_hand);
  // with one alpha the sum is the chain sum of (alpha + lambda_1, lambda_2, ...)
  CHECK(mt_restricted_exact(3, 2, {{2}, {1, 1}}) == oracle::chain_mhs(3, 2, {3, 1}));

  std::mt19937 gen(3);
  const std::uint64_t primes[] = {3, 5, 7};
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t p = primes[gen() % 3];
    const unsigned r = p == 3 ? 1 + gen() % 2 : 1;
    std::vector<int> a(1 + gen() % 3);
    for (int& x : a) x = static_cast<int>(gen() % 4);
    const int l = 1 + static_cast<int>(gen() % 3);
    const unsigned prec = 1 + gen() % 3;
    CHECK(mt_restricted(p, r, {a, {l}}, prec) == mt_sum(p, r, a, l, prec));
  }
}

TEST_CASE("exact evaluation limits") {
  CHECK_THROWS_AS(z_sum_exact(5, 5, {1, 1}), Error);
  ExactLimits wide{4000, 4};
  CHECK_NOTHROW(mt_sum_exact(3, 7, std::vector<int>{1, 1}, 1, wide));
  try {
    (void)z_sum_exact(3, 2, {1, 1, 1, 1, 1});
    FAIL("expected a limit error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExactLimitExceeded);
  }
}

TEST_CASE("index validation") {
  CHECK_THROWS_AS(ExponentIndex(std::vector<int>{}), Error);
  CHECK_THROWS_AS(ExponentIndex({1, 0}), Error);
  CHECK(ExponentIndex::parse("1,2,3").weight() == 6);
  CHECK(ExponentIndex{3, 1, 2}.sorted().to_string() == "1,2,3");
  CHECK_THROWS_AS(z_sum(6, 1, {1, 1}, 1), Error);
}
