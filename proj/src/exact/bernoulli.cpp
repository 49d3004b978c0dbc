#include <mutex>
#include <shared_mutex>
#include <vector>

#include "mtz/exact.hpp"
#include "mtz/residue.hpp"

namespace mtz {

namespace {

// Single-writer / multi-reader memo. Entries are never modified once
// appended, so any reader sees the same values a sequential run would.
class BernoulliCache {
 public:
  Rational get(unsigned n) {
    {
      std::shared_lock lock(mutex_);
      if (n < values_.size()) return values_[n];
    }
    std::unique_lock lock(mutex_);
    extend(n);
    return values_[n];
  }

 private:
  // B_m = -1/(m+1) * sum_{k<m} C(m+1, k) B_k
  void extend(unsigned n) {
    if (values_.empty()) values_.emplace_back(1);
    while (values_.size() <= n) {
      const unsigned m = static_cast<unsigned>(values_.size());
      if (m >= 3 && (m & 1) != 0) {
        values_.emplace_back(0);
        continue;
      }
      Rational acc = 0;
      BigInt c = 1;  // C(m+1, k), updated incrementally
      for (unsigned k = 0; k < m; ++k) {
        if (values_[k] != 0) acc += Rational(c) * values_[k];
        c = c * (m + 1 - k) / (k + 1);
      }
      acc /= -static_cast<long>(m + 1);
      values_.push_back(acc);
    }
  }

  std::shared_mutex mutex_;
  std::vector<Rational> values_;
};

BernoulliCache& cache() {
  static BernoulliCache instance;
  return instance;
}

}  // namespace

Rational bernoulli(unsigned n) { return cache().get(n); }

Residue bernoulli_mod(unsigned n, std::uint64_t p, unsigned exponent) {
  const Rational b = bernoulli(n);
  if (mpz_divisible_ui_p(b.get_den().get_mpz_t(), p) != 0) {
    fail(ErrorCode::IrregularModulus, "p = " + std::to_string(p) +
                                          " divides the denominator of B_" +
                                          std::to_string(n));
  }
  return reduce_mod(b, p, exponent);
}

}  // namespace mtz
