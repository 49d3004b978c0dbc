#include "mtz/mtz.h"

#include <cstring>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "mtz/classical.hpp"
#include "mtz/finite_sums.hpp"
#include "mtz/reductions.hpp"
#include "mtz/verifier.hpp"

struct mtz_context {
  unsigned workers = 1;
  mtz::ExactLimits limits{};
  std::string last_error;
};

namespace {

using nlohmann::ordered_json;
using namespace mtz;

mtz_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return MTZ_INVALID_ARGUMENT;
    case ErrorCode::NotPrime: return MTZ_NOT_PRIME;
    case ErrorCode::NonUnitDenominator: return MTZ_NON_UNIT_DENOMINATOR;
    case ErrorCode::NonUnit: return MTZ_NON_UNIT;
    case ErrorCode::PrecisionMismatch: return MTZ_PRECISION_MISMATCH;
    case ErrorCode::PartsMismatch: return MTZ_PARTS_MISMATCH;
    case ErrorCode::IrregularModulus: return MTZ_IRREGULAR_MODULUS;
    case ErrorCode::PreconditionViolated: return MTZ_PRECONDITION_VIOLATED;
    case ErrorCode::NonIntegral: return MTZ_NON_INTEGRAL;
    case ErrorCode::ExactLimitExceeded: return MTZ_EXACT_LIMIT_EXCEEDED;
    case ErrorCode::UnsupportedDepth: return MTZ_UNSUPPORTED_DEPTH;
    case ErrorCode::DivergentTerm: return MTZ_DIVERGENT_TERM;
    case ErrorCode::UnsupportedTerm: return MTZ_UNSUPPORTED_TERM;
    case ErrorCode::ConfigInvalid: return MTZ_CONFIG_INVALID;
    case ErrorCode::PersistenceFailure: return MTZ_PERSISTENCE_FAILURE;
  }
  return MTZ_INTERNAL_ERROR;
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

// Runs fn, storing its string result in *out and mapping exceptions to
// status codes.
template <class Fn>
mtz_status guarded(mtz_context* ctx, char** out, Fn&& fn) {
  if (ctx == nullptr || out == nullptr) return MTZ_INVALID_ARGUMENT;
  *out = nullptr;
  ctx->last_error.clear();
  try {
    *out = copy_out(fn());
    return MTZ_OK;
  } catch (const Error& e) {
    ctx->last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    ctx->last_error = e.what();
    return MTZ_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return MTZ_INTERNAL_ERROR;
  }
}

ExponentIndex index_from(const int* s, std::size_t depth) {
  if (s == nullptr || depth == 0) fail(ErrorCode::InvalidArgument, "empty index");
  return ExponentIndex(std::vector<int>(s, s + depth));
}

ParallelOptions parallel(const mtz_context* ctx) { return ParallelOptions{ctx->workers}; }

ordered_json report_json(const verify::CongruenceReport& r) {
  auto j = ordered_json::parse(verify::to_json_line(r, true));
  j["lhs_text"] = r.lhs.to_string();
  j["rhs_text"] = r.rhs.to_string();
  return j;
}

ordered_json combo_json(const reductions::ChainMhsCombination& c) {
  ordered_json terms = ordered_json::array();
  for (const auto& t : c.terms()) {
    terms.push_back({{"coefficient", t.coefficient.get_str()}, {"index", t.index.exponents()}});
  }
  return {{"text", c.to_string()}, {"terms", terms}};
}

std::vector<int> int_list(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<int>>();
  return ExponentIndex::parse(j.get<std::string>()).exponents();
}

std::vector<verify::CongruenceReport> run_verify(const mtz_context* ctx, const nlohmann::json& req) {
  verify::CheckOptions opts;
  opts.parallel = parallel(ctx);
  if (req.contains("oracle")) opts.oracle = verify::parse_oracle(req["oracle"].get<std::string>());
  const std::string check = req.at("check").get<std::string>();
  const unsigned r = req.contains("r") ? req["r"].get<unsigned>() : 1;
  std::vector<verify::CongruenceReport> out;

  std::vector<std::uint64_t> primes;
  if (req.contains("p")) primes.push_back(req["p"].get<std::uint64_t>());
  if (req.contains("p_max")) {
    const auto lo = req.contains("p_min") ? req["p_min"].get<std::uint64_t>() : 5;
    for (auto p = lo; p <= req["p_max"].get<std::uint64_t>(); ++p) {
      if (is_prime(p)) primes.push_back(p);
    }
  }
  if (primes.empty()) fail(ErrorCode::InvalidArgument, "request needs p or p_max");

  for (auto p : primes) {
    if (check == "base") {
      out.push_back(verify::check_base(p, opts));
      continue;
    }
    const auto s = int_list(req.at("s"));
    auto need = [&](std::size_t d) {
      if (s.size() != d) fail(ErrorCode::InvalidArgument, check + " needs " + std::to_string(d) + " exponents");
    };
    if (check == "dbl-mhs") {
      need(2);
      out.push_back(verify::check_dbl_mhs(p, r, s[0], s[1], opts));
    } else if (check == "yang-cai") {
      need(3);
      out.push_back(verify::check_ext_yang_cai(p, r, s[0], s[1], s[2], opts));
    } else if (check == "four-vars") {
      need(4);
      out.push_back(verify::check_four_vars(p, s[0], s[1], s[2], s[3], opts));
    } else if (check == "conjecture") {
      for (auto& rep : verify::check_conjecture(p, r, ExponentIndex(s), opts)) out.push_back(std::move(rep));
    } else if (check == "sharpness") {
      out.push_back(verify::check_sharpness(p, r, ExponentIndex(s), opts));
    } else {
      fail(ErrorCode::InvalidArgument, "unknown check: " + check);
    }
  }
  return out;
}

}  // namespace

extern "C" {

const char* mtz_version(void) { return MTZ_VERSION; }

const char* mtz_status_name(mtz_status status) {
  switch (status) {
    case MTZ_OK: return "Ok";
    case MTZ_INTERNAL_ERROR: return "InternalError";
    default: break;
  }
  if (status > MTZ_OK && status < MTZ_INTERNAL_ERROR) {
    return mtz::to_string(static_cast<ErrorCode>(status - 1));
  }
  return "Unknown";
}

mtz_context* mtz_context_new(void) { return new (std::nothrow) mtz_context(); }

void mtz_context_free(mtz_context* ctx) { delete ctx; }

mtz_status mtz_set_workers(mtz_context* ctx, unsigned workers) {
  if (ctx == nullptr || workers == 0) return MTZ_INVALID_ARGUMENT;
  ctx->workers = workers;
  return MTZ_OK;
}

mtz_status mtz_set_exact_limits(mtz_context* ctx, uint64_t max_modulus, size_t max_depth) {
  if (ctx == nullptr || max_modulus == 0 || max_depth == 0) return MTZ_INVALID_ARGUMENT;
  ctx->limits = ExactLimits{max_modulus, max_depth};
  return MTZ_OK;
}

const char* mtz_last_error(const mtz_context* ctx) {
  return ctx == nullptr ? "" : ctx->last_error.c_str();
}

void mtz_free_string(char* s) { std::free(s); }

mtz_status mtz_bernoulli(mtz_context* ctx, unsigned n, uint64_t p, unsigned e, char** out) {
  return guarded(ctx, out, [&] {
    if (p == 0) return mtz::to_string(bernoulli(n));
    return bernoulli_mod(n, p, e).to_string();
  });
}

mtz_status mtz_mhs(mtz_context* ctx, uint64_t n, uint64_t p, const int* s, size_t depth,
                   char** out) {
  return guarded(ctx, out, [&] {
    const auto idx = index_from(s, depth);
    return mtz::to_string(p == 0 ? mhs(n, idx) : mhs_p_restricted(n, p, idx));
  });
}

mtz_status mtz_chain_mhs(mtz_context* ctx, uint64_t p, unsigned r, const int* s, size_t depth,
                         unsigned precision, char** out) {
  return guarded(ctx, out, [&] {
    const auto idx = index_from(s, depth);
    if (precision == 0) return mtz::to_string(chain_mhs_exact(p, r, idx, ctx->limits));
    return chain_mhs(p, r, idx, precision).to_string();
  });
}

mtz_status mtz_z_sum(mtz_context* ctx, uint64_t p, unsigned r, const int* s, size_t depth,
                     unsigned precision, mtz_oracle oracle, char** out) {
  return guarded(ctx, out, [&] {
    const auto idx = index_from(s, depth);
    if (precision == 0) return mtz::to_string(z_sum_exact(p, r, idx, ctx->limits));
    if (oracle == MTZ_ORACLE_REDUCTION) {
      return reductions::z_sum_via_reduction(p, r, idx, precision, parallel(ctx)).to_string();
    }
    return z_sum(p, r, idx, precision, parallel(ctx)).to_string();
  });
}

mtz_status mtz_mt_sum(mtz_context* ctx, uint64_t p, unsigned r, const int* alphas, size_t n_alphas,
                      const int* lambdas, size_t n_lambdas, unsigned precision, char** out) {
  return guarded(ctx, out, [&] {
    if (alphas == nullptr || lambdas == nullptr || n_alphas == 0 || n_lambdas == 0) {
      fail(ErrorCode::InvalidArgument, "alphas and lambdas must be non-empty");
    }
    const std::vector<int> a(alphas, alphas + n_alphas);
    const std::vector<int> l(lambdas, lambdas + n_lambdas);
    if (l.size() == 1) {
      if (precision == 0) return mtz::to_string(mt_sum_exact(p, r, a, l[0], ctx->limits));
      return mt_sum(p, r, a, l[0], precision, parallel(ctx)).to_string();
    }
    const MtIndex idx{a, l};
    if (precision == 0) return mtz::to_string(mt_restricted_exact(p, r, idx, ctx->limits));
    return mt_restricted(p, r, idx, precision).to_string();
  });
}

mtz_status mtz_reduce(mtz_context* ctx, const char* kind, const int* args, size_t n_args,
                      char** out_json) {
  return guarded(ctx, out_json, [&] {
    if (kind == nullptr || args == nullptr) fail(ErrorCode::InvalidArgument, "missing arguments");
    const std::string k = kind;
    auto need = [&](std::size_t n) {
      if (n_args != n) fail(ErrorCode::InvalidArgument, k + " takes " + std::to_string(n) + " arguments");
    };
    ordered_json j;
    j["kind"] = k;
    j["args"] = std::vector<int>(args, args + n_args);
    if (k == "t2") {
      need(3);
      j["result"] = combo_json(reductions::reduce_t2_to_h(args[0], args[1], args[2]));
    } else if (k == "t20") {
      need(3);
      j["result"] = combo_json(reductions::reduce_t20_to_h3(args[0], args[1], args[2]));
    } else if (k == "t3") {
      need(4);
      ordered_json terms = ordered_json::array();
      for (const auto& t : reductions::reduce_t3_to_t2(args[0], args[1], args[2], args[3])) {
        terms.push_back({{"coefficient", t.coefficient.get_str()},
                         {"x", t.x},
                         {"y", t.y},
                         {"lambda", t.lambda},
                         {"block", t.block}});
      }
      j["result"] = {{"terms", terms}};
    } else if (k == "z4" || k == "z4-literal") {
      need(4);
      const auto variant =
          k == "z4" ? reductions::FourthBlock::Corrected : reductions::FourthBlock::Literal;
      ordered_json terms = ordered_json::array();
      for (const auto& t : reductions::z4_expansion(args[0], args[1], args[2], args[3], variant)) {
        terms.push_back({{"coefficient", mtz::to_string(t.coefficient)},
                         {"index", {t.i, t.j, t.k}}});
      }
      j["variant"] = reductions::to_string(variant);
      j["result"] = {{"terms", terms}};
    } else {
      fail(ErrorCode::InvalidArgument, "unknown reduction: " + k);
    }
    return j.dump();
  });
}

mtz_status mtz_verify(mtz_context* ctx, const char* request_json, char** out_json) {
  return guarded(ctx, out_json, [&] {
    if (request_json == nullptr) fail(ErrorCode::InvalidArgument, "missing request");
    const auto reports = run_verify(ctx, nlohmann::json::parse(request_json));
    ordered_json j;
    j["reports"] = ordered_json::array();
    bool all = true;
    for (const auto& r : reports) {
      j["reports"].push_back(report_json(r));
      all = all && r.verdict;
    }
    j["all_passed"] = all;
    return j.dump();
  });
}

mtz_status mtz_scan(mtz_context* ctx, const char* config_json, char** out_json) {
  return guarded(ctx, out_json, [&] {
    if (config_json == nullptr) fail(ErrorCode::InvalidArgument, "missing config");
    const auto config = verify::ScanConfig::from_json(config_json);
    const auto result = verify::scan(config);
    ordered_json j;
    j["summary_csv"] = result.summary_csv();
    j["records"] = ordered_json::array();
    for (const auto& r : result.reports) {
      j["records"].push_back(ordered_json::parse(verify::to_json_line(r, config.timings)));
    }
    j["all_passed"] = result.all_passed();
    return j.dump();
  });
}

mtz_status mtz_counts(mtz_context* ctx, unsigned w_max, char** out_json) {
  return guarded(ctx, out_json, [&] {
    const auto report = classical::bound_report(w_max);
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"w", r.w},
                      {"p_sum", r.p_sum.get_str()},
                      {"N_w", r.n_w.get_str()},
                      {"P_w", r.p_w.get_str()},
                      {"A_w", r.a_w.get_str()},
                      {"bound_expr", r.bound.get_str()},
                      {"F_w", r.f_w.get_str()},
                      {"N_lt_P", r.n_below_p},
                      {"A_lt_F", r.exact_below_f},
                      {"bound_lt_F", r.bound_below_f}});
    }
    auto opt = [](const std::optional<unsigned>& v) { return v ? ordered_json(*v) : ordered_json(); };
    ordered_json j;
    j["rows"] = rows;
    j["crossovers"] = {{"N_lt_P", opt(report.n_crossover)},
                       {"A_lt_F", opt(report.exact_crossover)},
                       {"bound_lt_F", opt(report.bound_crossover)}};
    j["csv"] = report.to_csv();
    return j.dump();
  });
}

mtz_status mtz_deligne_count(mtz_context* ctx, unsigned w, char** out_json) {
  return guarded(ctx, out_json, [&] {
    ordered_json j;
    j["w"] = w;
    j["count"] = classical::count_deligne_generators(w).get_str();
    j["fibonacci"] = classical::fibonacci(w).get_str();
    return j.dump();
  });
}

mtz_status mtz_mt_to_mzv(mtz_context* ctx, const char* alphas, int lambda, uint64_t cutoff,
                         char** out_json) {
  return guarded(ctx, out_json, [&] {
    if (alphas == nullptr) fail(ErrorCode::InvalidArgument, "missing alphas");
    const auto idx = classical::SignedMtIndex::parse(alphas, lambda);
    const auto combo = classical::mt_to_mzv(idx);
    ordered_json j;
    j["index"] = idx.canonical().to_string();
    j["mzv"] = combo.to_string();
    if (cutoff != 0) {
      const auto e = classical::eval_combination(combo, cutoff);
      j["value"] = classical::format(e.value, 30);
      j["error_bound"] = classical::format(e.error, 6);
    }
    return j.dump();
  });
}

mtz_status mtz_value_table(mtz_context* ctx, double tolerance, uint64_t cutoff, char** out_json) {
  return guarded(ctx, out_json, [&] {
    const auto report = classical::verify_value_table(tolerance, cutoff);
    ordered_json lines = ordered_json::array();
    for (const auto& l : report.lines) {
      lines.push_back({{"lhs", l.lhs_label},
                       {"rhs", l.rhs_label},
                       {"lhs_value", classical::format(l.lhs, 25)},
                       {"rhs_value", classical::format(l.rhs, 25)},
                       {"deviation", classical::format(l.deviation, 4)},
                       {"error_bound", classical::format(l.error_bound, 4)},
                       {"pass", l.pass}});
    }
    ordered_json j;
    j["lines"] = lines;
    j["max_deviation"] = classical::format(report.max_deviation, 4);
    j["all_pass"] = report.all_pass;
    return j.dump();
  });
}

}  // extern "C"
