#include <algorithm>
#include <sstream>

#include "mtz/classical.hpp"
#include "mtz/finite_sums.hpp"

namespace mtz::classical {

int SignedMzvTerm::weight() const {
  int w = 0;
  for (int s : exponents) w += s;
  return w;
}

std::string SignedMzvTerm::to_string() const {
  std::string out = "zeta(";
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (i != 0) out += ",";
    out += std::to_string(signs[i] * exponents[i]);
  }
  return out + ")";
}

void MzvCombination::add(const Rational& coefficient, const SignedMzvTerm& term) {
  if (coefficient == 0) return;
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), term,
                                   [](const MzvTerm& t, const SignedMzvTerm& x) { return t.term < x; });
  if (it != terms_.end() && it->term == term) {
    it->coefficient += coefficient;
    if (it->coefficient == 0) terms_.erase(it);
    return;
  }
  terms_.insert(it, MzvTerm{coefficient, term});
}

std::string MzvCombination::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (i != 0) out += t.coefficient < 0 ? " - " : " + ";
    else if (t.coefficient < 0) out += "-";
    out += mtz::to_string(Rational(abs(t.coefficient))) + "*" + t.term.to_string();
  }
  return out;
}

SignedMtIndex SignedMtIndex::parse(const std::string& alphas, int lambda) {
  SignedMtIndex idx;
  std::stringstream ss(alphas);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "bad exponent: " + item);
    }
    if (v == 0) fail(ErrorCode::InvalidArgument, "exponents must be nonzero");
    idx.exponents.push_back(std::abs(v));
    idx.signs.push_back(v < 0 ? -1 : 1);
  }
  if (lambda == 0) fail(ErrorCode::InvalidArgument, "last exponent must be nonzero");
  // A sign on the last argument folds into all the others.
  if (lambda < 0) {
    for (int& s : idx.signs) s = -s;
  }
  idx.exponents.push_back(std::abs(lambda));
  return idx;
}

SignedMtIndex SignedMtIndex::canonical() const {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < signs.size(); ++i) pairs.emplace_back(exponents[i], signs[i]);
  std::sort(pairs.begin(), pairs.end());
  SignedMtIndex out;
  for (auto [s, e] : pairs) {
    out.exponents.push_back(s);
    out.signs.push_back(e);
  }
  out.exponents.push_back(exponents.back());
  return out;
}

int SignedMtIndex::weight() const {
  int w = 0;
  for (int s : exponents) w += s;
  return w;
}

std::string SignedMtIndex::to_string() const {
  std::string out = "T(";
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (i != 0) out += ",";
    out += std::to_string(signs[i] * exponents[i]);
  }
  return out + ";" + std::to_string(exponents.back()) + ")";
}

namespace {

void validate(const SignedMtIndex& idx) {
  if (idx.exponents.size() != idx.signs.size() + 1 || idx.signs.size() < 2) {
    fail(ErrorCode::InvalidArgument, "need k >= 2 signed arguments and a last exponent");
  }
  for (int s : idx.exponents) {
    if (s < 1) fail(ErrorCode::InvalidArgument, "exponents must be positive");
  }
  for (int e : idx.signs) {
    if (e != 1 && e != -1) fail(ErrorCode::InvalidArgument, "signs must be +1 or -1");
  }
}

// sum_{m1, m2 >= 1} t1^m1 t2^m2 / (m1^a m2^b (m1 + m2)^c)
void depth2(MzvCombination& out, const Rational& coeff, int a, int b, int c, int t1, int t2) {
  const int w = a + b + c;
  for (int x = 1; x <= a; ++x) {
    out.add(coeff * Rational(binomial(a + b - x - 1, a - x)), {{x, w - x}, {t1 * t2, t2}});
  }
  for (int y = 1; y <= b; ++y) {
    out.add(coeff * Rational(binomial(a + b - y - 1, b - y)), {{y, w - y}, {t1 * t2, t1}});
  }
}

// sum_{m1, m2, m3 >= 1} t1^m1 t2^m2 t0^m3 / (m1^a m2^b (m1 + m2 + m3)^mu)
void depth3_spectator(MzvCombination& out, const Rational& coeff, int a, int b, int mu, int t1,
                      int t2, int t0) {
  for (int s = 0; s < a; ++s) {
    out.add(coeff * Rational(binomial(s + b - 1, s)),
            {{a - s, b + s, mu}, {t1 * t2, t2 * t0, t0}});
  }
  for (int t = 0; t < b; ++t) {
    out.add(coeff * Rational(binomial(t + a - 1, t)),
            {{b - t, a + t, mu}, {t1 * t2, t1 * t0, t0}});
  }
}

}  // namespace

MzvCombination mt_to_mzv(const SignedMtIndex& raw) {
  validate(raw);
  const SignedMtIndex idx = raw.canonical();
  const auto& s = idx.exponents;
  const auto& e = idx.signs;
  MzvCombination out;
  if (e.size() == 2) {
    depth2(out, 1, s[0], s[1], s[2], e[0], e[1]);
    return out;
  }
  if (e.size() != 3) fail(ErrorCode::UnsupportedDepth, "only depths 2 and 3 are supported");
  const int n = s[0] + s[1] + s[2];
  const int lambda = s[3];
  // (first, second, spectator) positions for the three pairs
  constexpr int blocks[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
  for (const auto& blk : blocks) {
    const int i = blk[0], j = blk[1], k = blk[2];
    for (int x = 1; x <= s[i]; ++x) {
      for (int y = 1; y <= s[j]; ++y) {
        const Rational m(multinomial(n - x - y - 1, {s[i] - x, s[j] - y, s[k] - 1}));
        depth3_spectator(out, m, x, y, n - x - y + lambda, e[i], e[j], e[k]);
      }
    }
  }
  return out;
}

}  // namespace mtz::classical
