#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "mtz/classical.hpp"

namespace mtz::classical {

namespace {

class PartitionCache {
 public:
  BigInt get(unsigned n) {
    {
      std::shared_lock lock(mutex_);
      if (n < values_.size()) return values_[n];
    }
    std::unique_lock lock(mutex_);
    if (values_.empty()) values_.push_back(1);
    while (values_.size() <= n) {
      const long m = static_cast<long>(values_.size());
      BigInt acc = 0;
      for (long k = 1;; ++k) {
        const long g1 = k * (3 * k - 1) / 2;
        if (g1 > m) break;
        const BigInt& a = values_[m - g1];
        if (k % 2 == 1) acc += a; else acc -= a;
        const long g2 = k * (3 * k + 1) / 2;
        if (g2 <= m) {
          const BigInt& b = values_[m - g2];
          if (k % 2 == 1) acc += b; else acc -= b;
        }
      }
      values_.push_back(acc);
    }
    return values_[n];
  }

 private:
  std::shared_mutex mutex_;
  std::vector<BigInt> values_;
};

PartitionCache& partitions() {
  static PartitionCache cache;
  return cache;
}

// Coefficients of prod_{s >= 1} (1 - x^s)^{-2} up to x^n.
std::vector<BigInt> two_colour_partitions(unsigned n) {
  std::vector<BigInt> c(n + 1, 0);
  c[0] = 1;
  for (unsigned s = 1; s <= n; ++s) {
    for (int pass = 0; pass < 2; ++pass) {
      for (unsigned i = s; i <= n; ++i) c[i] += c[i - s];
    }
  }
  return c;
}

int mobius(unsigned n) {
  int mu = 1;
  for (unsigned q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      n /= q;
      if (n % q == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

std::optional<unsigned> crossover(const std::vector<BoundRow>& rows, bool BoundRow::*flag) {
  if (rows.empty() || !(rows.back().*flag)) return std::nullopt;
  unsigned w0 = rows.back().w;
  for (auto it = rows.rbegin(); it != rows.rend() && (*it).*flag; ++it) w0 = it->w;
  return w0;
}

}  // namespace

BigInt partition_count(unsigned n) { return partitions().get(n); }

BigInt padovan(unsigned w) {
  if (w < 2) fail(ErrorCode::InvalidArgument, "Padovan numbers start at w = 2");
  BigInt a = 1, b = 1, c = 1;  // P_{w-2}, P_{w-1}, P_w for w = 4
  if (w <= 4) return 1;
  for (unsigned k = 5; k <= w; ++k) {
    BigInt next = b + a;
    a = b;
    b = c;
    c = next;
  }
  return c;
}

BigInt fibonacci(unsigned w) {
  BigInt a = 1, b = 1;
  for (unsigned k = 2; k <= w; ++k) {
    BigInt next = a + b;
    a = b;
    b = next;
  }
  return b;
}

BigInt count_mtzv(unsigned w) {
  if (w < 3) fail(ErrorCode::InvalidArgument, "weight must be at least 3");
  BigInt total = 0;
  for (unsigned j = 2; j + 1 <= w; ++j) total += partition_count(j) - 1;
  return total;
}

BigInt count_alternating_mtzv(unsigned w) {
  if (w < 3) fail(ErrorCode::InvalidArgument, "weight must be at least 3");
  const auto c = two_colour_partitions(w);
  BigInt total = 0;
  // The single-part partition of i contributes (1 + 1) and is not a symbol.
  for (unsigned i = 2; i + 1 <= w; ++i) total += c[i] - 2;
  return total;
}

BigInt bound_expression(unsigned w) {
  if (w < 3) fail(ErrorCode::InvalidArgument, "weight must be at least 3");
  BigInt total = 0;
  for (unsigned i = 2; i + 1 <= w; ++i) {
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), BigInt(8 * i + 1).get_mpz_t());
    total += BigInt((root - 1) / 2) * (partition_count(i) - 1);
  }
  return total;
}

BigInt lyndon_count_odd(unsigned n) {
  if (n == 0) return 0;
  // c[m][k]: compositions of k into m odd parts.
  auto words_of_weight = [](unsigned k) {
    std::vector<std::vector<BigInt>> c(k + 1, std::vector<BigInt>(k + 1, 0));
    c[0][0] = 1;
    for (unsigned m = 1; m <= k; ++m) {
      for (unsigned total = 1; total <= k; ++total) {
        for (unsigned part = 1; part <= total; part += 2) c[m][total] += c[m - 1][total - part];
      }
    }
    return c;
  };
  const auto c = words_of_weight(n);
  BigInt acc = 0;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int mu = mobius(n / d);
    if (mu == 0) continue;
    // a_d = sum_m (d / m) c_m(d): letters-weighted count of cyclic words.
    Rational a = 0;
    for (unsigned m = 1; m <= d; ++m) {
      if (c[m][d] != 0) a += make_rational(c[m][d] * d, BigInt(m));
    }
    if (a.get_den() != 1) fail(ErrorCode::InvalidArgument, "non-integral necklace count");
    acc += mu * a.get_num();
  }
  return BigInt(acc / n);
}

BigInt count_deligne_generators(unsigned w) {
  if (w < 1) fail(ErrorCode::InvalidArgument, "weight must be positive");
  // Even powers of 2 pi i, then multisets of Lyndon words.
  std::vector<BigInt> series(w + 1, 0);
  for (unsigned k = 0; k <= w; k += 2) series[k] = 1;
  for (unsigned n = 1; n <= w; ++n) {
    const BigInt l = lyndon_count_odd(n);
    if (l == 0) continue;
    // multiply by (1 - x^n)^{-l}, one factor at a time
    for (unsigned copy = 0; copy < l.get_ui(); ++copy) {
      for (unsigned i = n; i <= w; ++i) series[i] += series[i - n];
    }
  }
  return series[w];
}

BoundReport bound_report(unsigned w_max) {
  if (w_max < 3) fail(ErrorCode::InvalidArgument, "w_max must be at least 3");
  BoundReport report;
  const auto c = two_colour_partitions(w_max);
  BigInt p_sum = 0, n_w = 0, a_w = 0, bound = 0;
  for (unsigned w = 3; w <= w_max; ++w) {
    const unsigned i = w - 1;
    const BigInt p_i = partition_count(i);
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), BigInt(8 * i + 1).get_mpz_t());
    p_sum += p_i;
    n_w += p_i - 1;
    a_w += c[i] - 2;
    bound += BigInt((root - 1) / 2) * (p_i - 1);
    BoundRow row{w, p_sum, n_w, padovan(w), a_w, bound, fibonacci(w), false, false, false};
    row.n_below_p = row.n_w < row.p_w;
    row.exact_below_f = row.a_w - row.n_w + row.p_w < row.f_w;
    row.bound_below_f = row.bound - row.n_w + row.p_w < row.f_w;
    report.rows.push_back(std::move(row));
  }
  report.n_crossover = crossover(report.rows, &BoundRow::n_below_p);
  report.exact_crossover = crossover(report.rows, &BoundRow::exact_below_f);
  report.bound_crossover = crossover(report.rows, &BoundRow::bound_below_f);
  return report;
}

std::string BoundReport::to_csv() const {
  std::ostringstream os;
  os << "w,p_sum,N_w,P_w,A_w,bound_expr,F_w,flags\n";
  for (const auto& r : rows) {
    std::string flags;
    if (r.n_below_p) flags += "N<P";
    if (r.exact_below_f) flags += std::string(flags.empty() ? "" : "|") + "A<F";
    if (r.bound_below_f) flags += std::string(flags.empty() ? "" : "|") + "B<F";
    if (flags.empty()) flags = "-";
    os << r.w << ',' << r.p_sum << ',' << r.n_w << ',' << r.p_w << ',' << r.a_w << ',' << r.bound
       << ',' << r.f_w << ',' << flags << '\n';
  }
  return os.str();
}

}  // namespace mtz::classical
