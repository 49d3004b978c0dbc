#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mtz/verifier.hpp"

namespace mtz::verify {

namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& what) { fail(ErrorCode::ConfigInvalid, what); }

std::vector<ClaimKind> expand_kind(const std::string& name) {
  if (name == "dbl-mhs") return {ClaimKind::DblMhsOdd, ClaimKind::DblMhsEven};
  if (name == "ext-yang-cai" || name == "yang-cai") {
    return {ClaimKind::ExtYangCaiOdd, ClaimKind::ExtYangCaiEven};
  }
  if (name == "conjecture") {
    return {ClaimKind::ConjD4Odd, ClaimKind::ConjD4Even, ClaimKind::ConjD5Even,
            ClaimKind::ConjGeneralOdd, ClaimKind::ConjGeneralEven};
  }
  if (auto k = parse_kind(name)) return {*k};
  bad_config("unknown claim kind: " + name);
}

std::pair<long, long> read_range(const json& j, const char* field) {
  if (j.is_number_integer()) return {j.get<long>(), j.get<long>()};
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    return {j[0].get<long>(), j[1].get<long>()};
  }
  if (j.is_object() && j.contains("min") && j.contains("max")) {
    return {j["min"].get<long>(), j["max"].get<long>()};
  }
  bad_config(std::string(field) + " must be an integer, [lo, hi] or {min, max}");
}

// All s of the given depth and weight with entries >= 1, in lexicographic
// order.
void compositions(int depth, int weight, std::vector<int>& prefix,
                  std::vector<std::vector<int>>& out) {
  if (depth == 0) {
    if (weight == 0) out.push_back(prefix);
    return;
  }
  for (int v = 1; v <= weight - (depth - 1); ++v) {
    prefix.push_back(v);
    compositions(depth - 1, weight - v, prefix, out);
    prefix.pop_back();
  }
}

bool is_sorted_block(ClaimKind kind, const std::vector<int>& s) {
  if (kind == ClaimKind::DblMhsOdd || kind == ClaimKind::DblMhsEven) return true;
  const auto end = kind == ClaimKind::FourVars ? s.begin() + 3 : s.end();
  return std::is_sorted(s.begin(), end);
}

struct Shape {
  std::size_t depth;
  bool odd_weight;
  unsigned slack;   // precondition is p > weight + slack
  bool fixed_r1;    // only r = 1 is meaningful
};

std::optional<Shape> shape_of(ClaimKind kind) {
  switch (kind) {
    case ClaimKind::DblMhsOdd: return Shape{2, true, 0, false};
    case ClaimKind::DblMhsEven: return Shape{2, false, 0, false};
    case ClaimKind::ExtYangCaiOdd: return Shape{3, true, 0, false};
    case ClaimKind::ExtYangCaiEven: return Shape{3, false, 0, false};
    case ClaimKind::FourVars: return Shape{4, true, 2, true};
    case ClaimKind::ConjD4Odd: return Shape{4, true, 1, false};
    case ClaimKind::ConjD4Even: return Shape{4, false, 1, false};
    case ClaimKind::ConjD5Even: return Shape{5, false, 1, false};
    default: return std::nullopt;
  }
}

KindSummary& summary_for(std::vector<KindSummary>& v, ClaimKind kind) {
  for (auto& s : v) {
    if (s.kind == kind) return s;
  }
  v.push_back(KindSummary{kind});
  return v.back();
}

bool claim_less(const CongruenceClaim& a, const CongruenceClaim& b) {
  const auto ia = canonical_index(a.kind, a.index);
  const auto ib = canonical_index(b.kind, b.index);
  return std::tie(a.kind, a.p, a.r, ia, a.modulus_exponent) <
         std::tie(b.kind, b.p, b.r, ib, b.modulus_exponent);
}

}  // namespace

ScanConfig ScanConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad_config(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad_config("config must be a JSON object");
  ScanConfig c;
  try {
    for (const auto& [field, value] : j.items()) {
      if (field == "kinds") {
        for (const auto& k : value) {
          for (ClaimKind kind : expand_kind(k.get<std::string>())) {
            if (kind == ClaimKind::Sharpness) c.include_sharpness = true;
            if (std::find(c.kinds.begin(), c.kinds.end(), kind) == c.kinds.end()) {
              c.kinds.push_back(kind);
            }
          }
        }
      } else if (field == "primes") {
        if (value.is_array()) {
          for (const auto& p : value) c.primes.push_back(p.get<std::uint64_t>());
        } else {
          const auto [lo, hi] = read_range(value, "primes");
          for (long p = std::max(lo, 2L); p <= hi; ++p) {
            if (is_prime(static_cast<std::uint64_t>(p))) c.primes.push_back(static_cast<std::uint64_t>(p));
          }
        }
      } else if (field == "r_range") {
        const auto [lo, hi] = read_range(value, "r_range");
        if (lo < 1 || hi < lo) bad_config("r_range must satisfy 1 <= lo <= hi");
        c.r_min = static_cast<unsigned>(lo);
        c.r_max = static_cast<unsigned>(hi);
      } else if (field == "depth_range") {
        const auto [lo, hi] = read_range(value, "depth_range");
        if (lo < 1 || hi < lo) bad_config("depth_range must satisfy 1 <= lo <= hi");
        c.depth_min = static_cast<std::size_t>(lo);
        c.depth_max = static_cast<std::size_t>(hi);
      } else if (field == "weight_max") {
        c.weight_max = value.get<int>();
      } else if (field == "workers") {
        const long w = value.get<long>();
        if (w < 1) bad_config("workers must be positive");
        c.workers = static_cast<unsigned>(w);
      } else if (field == "out_path" || field == "out") {
        c.out_path = value.get<std::string>();
      } else if (field == "include_sharpness") {
        c.include_sharpness = value.get<bool>();
      } else if (field == "oracle") {
        c.oracle = parse_oracle(value.get<std::string>());
      } else if (field == "timings") {
        c.timings = value.get<bool>();
      } else {
        bad_config("unknown config field: " + field);
      }
    }
  } catch (const json::exception& e) {
    bad_config(std::string("bad config value: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    bad_config(e.what());
  }
  c.validate();
  return c;
}

void ScanConfig::validate() const {
  if (weight_max < 3) bad_config("weight_max must be at least 3");
  if (r_min < 1 || r_max < r_min) bad_config("r range must satisfy 1 <= lo <= hi");
  if (depth_min < 1 || depth_max < depth_min) bad_config("depth range must satisfy 1 <= lo <= hi");
  if (workers < 1) bad_config("workers must be positive");
  for (auto p : primes) {
    if (!is_prime(p)) bad_config(std::to_string(p) + " is not prime");
  }
}

PlannedClaims plan(const ScanConfig& config) {
  config.validate();
  std::map<std::string, CongruenceClaim> unique;
  PlannedClaims out;
  auto add = [&](CongruenceClaim claim) { unique.try_emplace(claim.key(), std::move(claim)); };
  auto skip = [&](ClaimKind kind) { ++summary_for(out.skipped, kind).skipped; };

  for (ClaimKind kind : config.kinds) {
    summary_for(out.skipped, kind);
    if (kind == ClaimKind::Sharpness) continue;
    for (auto p : config.primes) {
      if (kind == ClaimKind::Base) {
        if (config.depth_min > 3 || config.depth_max < 3) continue;
        if (p < 5) {
          skip(kind);
        } else {
          add({kind, p, 1, ExponentIndex{1, 1, 1}, 1});
        }
        continue;
      }
      for (unsigned r = config.r_min; r <= config.r_max; ++r) {
        std::vector<std::size_t> depths;
        std::optional<Shape> shape = shape_of(kind);
        if (shape) {
          if (shape->fixed_r1 && r != 1) break;
          if (shape->depth < config.depth_min || shape->depth > config.depth_max) break;
          depths.push_back(shape->depth);
        } else {
          // General conjecture items: any depth in range, r >= 2.
          if (r < 2) continue;
          for (auto d = std::max<std::size_t>(config.depth_min, 2); d <= config.depth_max; ++d) {
            depths.push_back(d);
          }
        }
        for (std::size_t d : depths) {
          for (int w = static_cast<int>(d); w <= config.weight_max; ++w) {
            const bool w_odd = w % 2 != 0;
            unsigned slack = 1;
            if (shape) {
              if (shape->odd_weight != w_odd) continue;
              slack = shape->slack;
            } else {
              const bool parity_odd = (static_cast<int>(d) + w) % 2 != 0;
              if (parity_odd != (kind == ClaimKind::ConjGeneralOdd)) continue;
            }
            std::vector<int> prefix;
            std::vector<std::vector<int>> all;
            compositions(static_cast<int>(d), w, prefix, all);
            for (auto& s : all) {
              if (!is_sorted_block(kind, s)) continue;
              if (p <= static_cast<std::uint64_t>(w) + slack) {
                skip(kind);
                continue;
              }
              const ExponentIndex idx(s);
              const unsigned e = [&]() -> unsigned {
                switch (kind) {
                  case ClaimKind::DblMhsOdd:
                  case ClaimKind::ExtYangCaiOdd: return r;
                  case ClaimKind::DblMhsEven:
                  case ClaimKind::ExtYangCaiEven: return 2 * r;
                  case ClaimKind::FourVars: return 1;
                  case ClaimKind::ConjD4Odd:
                  case ClaimKind::ConjD5Even: return 2 * r - 1;
                  case ClaimKind::ConjD4Even: return r;
                  case ClaimKind::ConjGeneralOdd: return 2 * r - 2;
                  default: return r - 1;
                }
              }();
              add({kind, p, r, idx, e});
            }
          }
        }
      }
    }
  }
  if (config.include_sharpness) {
    summary_for(out.skipped, ClaimKind::Sharpness);
    add({ClaimKind::Sharpness, 13, 3, ExponentIndex{8, 1, 1, 1}, 6});
  }
  for (auto& [key, claim] : unique) out.claims.push_back(std::move(claim));
  std::sort(out.claims.begin(), out.claims.end(), claim_less);
  return out;
}

bool ScanResult::all_passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.verdict; });
}

std::string ScanResult::summary_csv() const {
  std::ostringstream os;
  os << "kind,checked,passed,failed,skipped\n";
  for (const auto& s : summary) {
    os << to_string(s.kind) << ',' << s.checked << ',' << s.passed << ',' << s.failed << ','
       << s.skipped << '\n';
  }
  return os.str();
}

ScanResult scan(const ScanConfig& config) {
  PlannedClaims planned = plan(config);
  const auto& claims = planned.claims;
  std::vector<std::optional<CongruenceReport>> slots(claims.size());

  const unsigned workers = std::max(1U, config.workers);
  if (claims.size() <= 1 || workers == 1) {
    CheckOptions opts{config.oracle, ParallelOptions{workers}};
    for (std::size_t i = 0; i < claims.size(); ++i) slots[i] = run_claim(claims[i], opts);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < std::min<std::size_t>(workers, claims.size()); ++t) {
        pool.emplace_back([&] {
          const CheckOptions opts{config.oracle, ParallelOptions{1}};
          for (std::size_t i = next++; i < claims.size(); i = next++) {
            try {
              slots[i] = run_claim(claims[i], opts);
            } catch (...) {
              std::lock_guard lock(error_mutex);
              if (!error) error = std::current_exception();
            }
          }
        });
      }
    }
    if (error) std::rethrow_exception(error);
  }

  ScanResult result;
  result.summary = planned.skipped;
  for (auto& slot : slots) {
    auto& s = summary_for(result.summary, slot->claim.kind);
    ++s.checked;
    ++(slot->verdict ? s.passed : s.failed);
    result.reports.push_back(std::move(*slot));
  }

  if (!config.out_path.empty()) {
    std::ofstream out(config.out_path, std::ios::trunc);
    if (!out) fail(ErrorCode::PersistenceFailure, "cannot open " + config.out_path.string());
    for (const auto& r : result.reports) out << to_json_line(r, config.timings) << '\n';
    out.flush();
    if (!out) fail(ErrorCode::PersistenceFailure, "cannot write " + config.out_path.string());
  }
  return result;
}

}  // namespace mtz::verify
