// mtz: command-line front end over the C interface.
//
// Exit codes: 0 ok, 1 a verdict was false, 2 usage or config error,
// 3 precondition violated.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mtz/mtz.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_false = 1;
constexpr int exit_usage = 2;
constexpr int exit_precondition = 3;

// Sharpness-sized work and beyond needs --allow-long.
constexpr double long_work = 1e9;

struct Common {
  std::string format = "text";
  unsigned workers = 1;
  bool timings = false;
};

struct CliError {
  int code;
  std::string message;
};

int exit_code_for(mtz_status s) {
  switch (s) {
    case MTZ_OK: return exit_ok;
    case MTZ_PRECONDITION_VIOLATED:
    case MTZ_IRREGULAR_MODULUS:
    case MTZ_NON_UNIT_DENOMINATOR:
    case MTZ_NON_INTEGRAL:
    case MTZ_EXACT_LIMIT_EXCEEDED:
    case MTZ_UNSUPPORTED_DEPTH:
    case MTZ_DIVERGENT_TERM:
    case MTZ_UNSUPPORTED_TERM:
      return exit_precondition;
    default:
      return exit_usage;
  }
}

class Session {
 public:
  explicit Session(const Common& common) : ctx_(mtz_context_new()) {
    if (ctx_ == nullptr) throw CliError{exit_usage, "cannot create context"};
    if (mtz_set_workers(ctx_, common.workers) != MTZ_OK) {
      throw CliError{exit_usage, "--workers must be positive"};
    }
  }
  ~Session() { mtz_context_free(ctx_); }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  mtz_context* get() const { return ctx_; }

  // Takes ownership of *out and throws on a failed status.
  std::string take(mtz_status s, char** slot) const {
    char* out = *slot;
    *slot = nullptr;
    if (s != MTZ_OK) {
      mtz_free_string(out);
      throw CliError{exit_code_for(s), std::string(mtz_status_name(s)) + ": " + mtz_last_error(ctx_)};
    }
    std::string text = out;
    mtz_free_string(out);
    return text;
  }

 private:
  mtz_context* ctx_;
};

std::vector<int> parse_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError{exit_usage, std::string(flag) + ": not an integer list: " + text};
    }
  }
  if (out.empty()) throw CliError{exit_usage, std::string(flag) + ": empty list"};
  return out;
}

std::vector<int> positive_list(const std::string& text, const char* flag) {
  auto v = parse_list(text, flag);
  for (int x : v) {
    if (x < 1) throw CliError{exit_usage, std::string(flag) + ": entries must be positive"};
  }
  return v;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

// "v (mod m)" into its parts
std::pair<std::string, std::string> split_residue(const std::string& text) {
  const auto open = text.find(" (mod ");
  if (open == std::string::npos) return {text, ""};
  return {text.substr(0, open), text.substr(open + 6, text.size() - open - 7)};
}

void print_value(const Common& c, const std::string& name, const std::string& text) {
  const auto [value, modulus] = split_residue(text);
  if (c.format == "json") {
    json j{{"quantity", name}, {"value", value}};
    if (!modulus.empty()) j["modulus"] = modulus;
    std::cout << j.dump() << '\n';
  } else if (c.format == "csv") {
    std::cout << "quantity,value,modulus\n" << name << ',' << value << ',' << modulus << '\n';
  } else {
    std::cout << text << '\n';
  }
}

json strip_timing(json record, bool timings) {
  if (!timings) record.erase("elapsed_ms");
  return record;
}

int print_reports(const Common& c, const json& reports) {
  bool all = true;
  if (c.format == "json") {
    json out = json::array();
    for (const auto& r : reports) {
      json rec = strip_timing(r, c.timings);
      rec.erase("lhs_text");
      rec.erase("rhs_text");
      out.push_back(rec);
    }
    std::cout << out.dump() << '\n';
  } else if (c.format == "csv") {
    std::cout << "key,kind,p,r,s,modulus,lhs,rhs,verdict,oracle" << (c.timings ? ",elapsed_ms" : "")
              << '\n';
    for (const auto& r : reports) {
      std::cout << r["key"].get<std::string>() << ',' << r["kind"].get<std::string>() << ','
                << r["p"] << ',' << r["r"] << ",\"" << join(r["s"].get<std::vector<int>>())
                << "\"," << r["modulus"].get<std::string>() << ',' << r["lhs"].get<std::string>()
                << ',' << r["rhs"].get<std::string>() << ',' << (r["verdict"].get<bool>() ? "true" : "false")
                << ',' << r["oracle"].get<std::string>();
      if (c.timings) std::cout << ',' << r["elapsed_ms"];
      std::cout << '\n';
    }
  } else {
    for (const auto& r : reports) {
      std::cout << (r["verdict"].get<bool>() ? "PASS " : "FAIL ") << r["key"].get<std::string>()
                << "  lhs=" << r["lhs"].get<std::string>() << " rhs=" << r["rhs"].get<std::string>()
                << " mod " << r["modulus"].get<std::string>();
      if (c.timings) std::cout << "  " << r["elapsed_ms"].get<double>() << " ms";
      std::cout << '\n';
    }
  }
  for (const auto& r : reports) all = all && r["verdict"].get<bool>();
  return all ? exit_ok : exit_false;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{exit_usage, "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_format(const Common& c) {
  if (c.format != "text" && c.format != "json" && c.format != "csv") {
    throw CliError{exit_usage, "--format must be text, json or csv"};
  }
}

// C(n - 1, d - 1) compositions, the size of the z_sum loop nest
double work_estimate(std::uint64_t p, unsigned r, std::size_t depth) {
  double n = 1;
  for (unsigned i = 0; i < r; ++i) n *= static_cast<double>(p);
  double w = 1;
  for (std::size_t k = 1; k < depth; ++k) w = w * (n - static_cast<double>(k)) / static_cast<double>(k);
  return w;
}

void gate_long(double work, bool allow_long) {
  if (work < long_work) return;
  std::cerr << "warning: about " << static_cast<long long>(work) << " inner steps\n";
  if (!allow_long) throw CliError{exit_usage, "long-running check; rerun with --allow-long"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite multiple harmonic sums, Z-sums and their congruences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mtz_version()));

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--workers", common.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timings", common.timings, "include elapsed times");
  };

  std::uint64_t p = 0;
  unsigned r = 1, n = 0, mod_power = 1, w = 0, w_max = 0;
  std::uint64_t big_n = 0, p_max = 0, cutoff = 1000000;
  std::string s_text, alphas_text, lambda_text, kind, args_text, config_path, out_path, summary_path;
  std::string oracle = "brute";
  bool exact = false, allow_long = false, sharpness = false, series = false;
  double tolerance = 1e-6;
  int a = 0, b = 0;

  auto* bern = app.add_subcommand("bernoulli", "B_n exactly or mod p^e");
  bern->add_option("--n", n, "index")->required();
  bern->add_option("--p", p, "prime (omit for the exact rational)");
  bern->add_option("--mod-power", mod_power, "exponent e");

  auto* mhs = app.add_subcommand("mhs", "H_n(s) exactly");
  mhs->add_option("--n", big_n, "upper bound (exclusive)")->required();
  mhs->add_option("--s", s_text, "exponents, e.g. 1,2")->required();
  mhs->add_option("--p", p, "drop indices divisible by p");

  auto* chain = app.add_subcommand("chainmhs", "chain-restricted sum below p^r");
  chain->add_option("--p", p)->required();
  chain->add_option("--r", r);
  chain->add_option("--s", s_text)->required();
  chain->add_option("--mod-power", mod_power);
  chain->add_flag("--exact", exact, "exact rational");

  auto* zsum = app.add_subcommand("zsum", "Z_{p^r}(s)");
  zsum->add_option("--p", p)->required();
  zsum->add_option("--r", r);
  zsum->add_option("--s", s_text)->required();
  zsum->add_option("--mod-power", mod_power);
  zsum->add_option("--oracle", oracle)->check(CLI::IsMember({"brute", "reduction"}));
  zsum->add_flag("--exact", exact);
  zsum->add_flag("--allow-long", allow_long);

  auto* mtsum = app.add_subcommand("mtsum", "finite or infinite Mordell-Tornheim sum");
  mtsum->add_option("--p", p, "prime (omit for the infinite series)");
  mtsum->add_option("--r", r);
  mtsum->add_option("--alphas", alphas_text, "e.g. 1,1 or -1,-1 for signs")->required();
  mtsum->add_option("--lambda", lambda_text, "last exponent(s)")->required();
  mtsum->add_option("--mod-power", mod_power);
  mtsum->add_option("--cutoff", cutoff, "series cutoff N");
  mtsum->add_flag("--exact", exact);
  mtsum->add_flag("--series", series, "infinite series via multiple zeta values");

  auto* reduce = app.add_subcommand("reduce", "symbolic reductions");
  reduce->add_option("--kind", kind, "t2, t20, t3, z4 or z4-literal")->required();
  reduce->add_option("--args", args_text, "e.g. 1,1,1")->required();

  auto* verify = app.add_subcommand("verify", "check one congruence");
  verify->require_subcommand(1);
  auto* v_base = verify->add_subcommand("base", "Z_p(1,1,1) = -2 B_{p-3}");
  v_base->add_option("--p", p);
  v_base->add_option("--p-max", p_max, "all primes 5..p_max");
  auto* v_dbl = verify->add_subcommand("dbl-mhs", "double chain sums");
  v_dbl->add_option("--p", p)->required();
  v_dbl->add_option("--r", r);
  v_dbl->add_option("--a", a);
  v_dbl->add_option("--b", b);
  v_dbl->add_option("--s", s_text, "a,b");
  auto* v_yc = verify->add_subcommand("yang-cai", "depth 3 Z-sums across p^r");
  v_yc->add_option("--p", p)->required();
  v_yc->add_option("--r", r);
  v_yc->add_option("--s", s_text)->required();
  auto* v_four = verify->add_subcommand("four-vars", "depth 4 closed form mod p");
  v_four->add_option("--p", p)->required();
  v_four->add_option("--s", s_text)->required();
  auto* v_conj = verify->add_subcommand("conjecture", "conjectured congruences");
  v_conj->add_option("--p", p)->required();
  v_conj->add_option("--r", r);
  v_conj->add_option("--s", s_text)->required();
  v_conj->add_flag("--sharpness", sharpness, "holds at the stated power and fails one above");
  v_conj->add_flag("--allow-long", allow_long);
  for (auto* sub : {v_base, v_dbl, v_yc, v_four, v_conj}) {
    add_common(sub);
    sub->add_option("--oracle", oracle)->check(CLI::IsMember({"brute", "reduction"}));
  }

  auto* scan = app.add_subcommand("scan", "run a claim grid");
  scan->add_option("--config", config_path, "JSON config")->required();
  scan->add_option("--out", out_path, "record file (JSONL)");
  scan->add_option("--summary", summary_path, "write the summary CSV here too");
  scan->add_option("--oracle", oracle)->check(CLI::IsMember({"brute", "reduction"}));
  scan->add_flag("--allow-long", allow_long);

  auto* counts = app.add_subcommand("counts", "counting table and bounds");
  counts->add_option("--w-max", w_max, "largest weight")->required();

  auto* table = app.add_subcommand("table", "numeric check of the weight 3 and 4 evaluations");
  table->add_option("--tolerance", tolerance);
  table->add_option("--cutoff", cutoff);

  auto* deligne = app.add_subcommand("deligne-count", "generator counts against Fibonacci");
  deligne->add_option("--w", w, "weight")->required();

  for (auto* sub : {bern, mhs, chain, zsum, mtsum, reduce, scan, counts, table, deligne}) {
    add_common(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }

  try {
    check_format(common);
    Session session(common);
    mtz_context* ctx = session.get();
    char* out = nullptr;

    if (*bern) {
      const auto text = session.take(mtz_bernoulli(ctx, n, p, mod_power, &out), &out);
      print_value(common, "B_" + std::to_string(n), text);
      return exit_ok;
    }
    if (*mhs) {
      const auto s = positive_list(s_text, "--s");
      const auto text = session.take(mtz_mhs(ctx, big_n, p, s.data(), s.size(), &out), &out);
      print_value(common, "H(" + join(s) + ")", text);
      return exit_ok;
    }
    if (*chain) {
      const auto s = positive_list(s_text, "--s");
      const auto text =
          session.take(mtz_chain_mhs(ctx, p, r, s.data(), s.size(), exact ? 0 : mod_power, &out), &out);
      print_value(common, "chainH(" + join(s) + ")", text);
      return exit_ok;
    }
    if (*zsum) {
      const auto s = positive_list(s_text, "--s");
      if (oracle == "brute") gate_long(work_estimate(p, r, s.size()), allow_long);
      const auto o = oracle == "reduction" ? MTZ_ORACLE_REDUCTION : MTZ_ORACLE_BRUTE;
      const auto text =
          session.take(mtz_z_sum(ctx, p, r, s.data(), s.size(), exact ? 0 : mod_power, o, &out), &out);
      print_value(common, "Z(" + join(s) + ")", text);
      return exit_ok;
    }
    if (*mtsum) {
      const auto alphas = parse_list(alphas_text, "--alphas");
      const auto lambdas = parse_list(lambda_text, "--lambda");
      bool signed_args = series;
      for (int x : alphas) signed_args = signed_args || x < 0;
      if (signed_args || p == 0) {
        if (lambdas.size() != 1) throw CliError{exit_usage, "--lambda: the series takes one value"};
        const auto text = session.take(mtz_mt_to_mzv(ctx, alphas_text.c_str(), lambdas[0], cutoff, &out), &out);
        const auto j = json::parse(text);
        if (common.format == "json") {
          std::cout << text << '\n';
        } else if (common.format == "csv") {
          std::cout << "index,mzv,value,error_bound\n"
                    << j["index"].get<std::string>() << ",\"" << j["mzv"].get<std::string>() << "\","
                    << j["value"].get<std::string>() << ',' << j["error_bound"].get<std::string>() << '\n';
        } else {
          std::cout << j["index"].get<std::string>() << " = " << j["mzv"].get<std::string>() << '\n'
                    << "  ~ " << j["value"].get<std::string>() << " +/- "
                    << j["error_bound"].get<std::string>() << '\n';
        }
        return exit_ok;
      }
      for (int x : lambdas) {
        if (x < 1) throw CliError{exit_usage, "--lambda: entries must be positive"};
      }
      const auto text = session.take(mtz_mt_sum(ctx, p, r, alphas.data(), alphas.size(), lambdas.data(),
                                                lambdas.size(), exact ? 0 : mod_power, &out),
                                     &out);
      print_value(common, "T(" + join(alphas) + ";" + join(lambdas) + ")", text);
      return exit_ok;
    }
    if (*reduce) {
      const auto args = positive_list(args_text, "--args");
      const auto text = session.take(mtz_reduce(ctx, kind.c_str(), args.data(), args.size(), &out), &out);
      const auto j = json::parse(text);
      if (common.format == "json") {
        std::cout << text << '\n';
        return exit_ok;
      }
      const auto& terms = j["result"]["terms"];
      if (common.format == "csv") {
        std::cout << "coefficient,term\n";
      } else if (j["result"].contains("text")) {
        std::cout << j["result"]["text"].get<std::string>() << '\n';
        return exit_ok;
      }
      for (const auto& t : terms) {
        std::string term;
        if (t.contains("index")) {
          term = "H(" + join(t["index"].get<std::vector<int>>()) + ")";
        } else {
          term = "T(" + std::to_string(t["x"].get<int>()) + "," + std::to_string(t["y"].get<int>()) +
                 ",0;" + std::to_string(t["lambda"].get<int>()) + ")";
        }
        if (common.format == "csv") {
          std::cout << t["coefficient"].get<std::string>() << ',' << term << '\n';
        } else {
          std::cout << t["coefficient"].get<std::string>() << " * " << term << '\n';
        }
      }
      return exit_ok;
    }
    if (*verify) {
      json req{{"oracle", oracle}};
      if (p != 0) req["p"] = p;
      if (*v_base) {
        req["check"] = "base";
        if (p_max != 0) req["p_max"] = p_max;
        if (p == 0 && p_max == 0) throw CliError{exit_usage, "verify base needs --p or --p-max"};
      } else if (*v_dbl) {
        req["check"] = "dbl-mhs";
        req["r"] = r;
        req["s"] = s_text.empty() ? std::vector<int>{a, b} : positive_list(s_text, "--s");
      } else if (*v_yc) {
        req["check"] = "yang-cai";
        req["r"] = r;
        req["s"] = positive_list(s_text, "--s");
      } else if (*v_four) {
        req["check"] = "four-vars";
        req["s"] = positive_list(s_text, "--s");
      } else {
        const auto s = positive_list(s_text, "--s");
        req["check"] = sharpness ? "sharpness" : "conjecture";
        req["r"] = r;
        req["s"] = s;
        if (oracle == "brute") gate_long(work_estimate(p, r, s.size()), allow_long);
      }
      const auto text = session.take(mtz_verify(ctx, req.dump().c_str(), &out), &out);
      return print_reports(common, json::parse(text)["reports"]);
    }
    if (*scan) {
      json config;
      try {
        config = json::parse(read_file(config_path));
      } catch (const json::exception& e) {
        throw CliError{exit_usage, std::string("config: ") + e.what()};
      }
      if (!config.is_object()) throw CliError{exit_usage, "config must be a JSON object"};
      if (!out_path.empty()) config["out_path"] = out_path;
      if (app.get_subcommand("scan")->count("--workers") != 0) config["workers"] = common.workers;
      if (app.get_subcommand("scan")->count("--oracle") != 0) config["oracle"] = oracle;
      config["timings"] = true;
      bool sharp = config.value("include_sharpness", false);
      for (const auto& k : config.value("kinds", json::array())) {
        sharp = sharp || (k.is_string() && k.get<std::string>() == "sharpness");
      }
      if (sharp) gate_long(work_estimate(13, 3, 4), allow_long);
      const auto text = session.take(mtz_scan(ctx, config.dump().c_str(), &out), &out);
      const auto j = json::parse(text);
      const auto summary = j["summary_csv"].get<std::string>();
      if (!summary_path.empty()) {
        std::ofstream f(summary_path);
        if (!f || !(f << summary)) throw CliError{exit_usage, "cannot write " + summary_path};
      }
      if (common.format == "json") {
        json records = json::array();
        for (const auto& r : j["records"]) records.push_back(strip_timing(r, common.timings));
        std::cout << json{{"records", records}, {"summary_csv", summary}, {"all_passed", j["all_passed"]}}.dump()
                  << '\n';
      } else {
        std::cout << summary;
      }
      return j["all_passed"].get<bool>() ? exit_ok : exit_false;
    }
    if (*counts) {
      const auto text = session.take(mtz_counts(ctx, w_max, &out), &out);
      const auto j = json::parse(text);
      auto show = [](const json& v) { return v.is_null() ? std::string("none") : std::to_string(v.get<unsigned>()); };
      if (common.format == "json") {
        json slim = j;
        slim.erase("csv");
        std::cout << slim.dump() << '\n';
      } else {
        std::cout << j["csv"].get<std::string>();
        if (common.format == "text") {
          const auto& c = j["crossovers"];
          std::cout << "# N_w < P_w from w = " << show(c["N_lt_P"]) << " (claimed: 40)\n"
                    << "# A_w - N_w + P_w < F_w from w = " << show(c["A_lt_F"]) << " (claimed: 34)\n"
                    << "# bound - N_w + P_w < F_w from w = " << show(c["bound_lt_F"]) << " (claimed: 34)\n";
        }
      }
      return exit_ok;
    }
    if (*table) {
      const auto text = session.take(mtz_value_table(ctx, tolerance, cutoff, &out), &out);
      const auto j = json::parse(text);
      if (common.format == "json") {
        std::cout << text << '\n';
      } else {
        if (common.format == "csv") std::cout << "lhs,rhs,lhs_value,rhs_value,deviation,error_bound,pass\n";
        for (const auto& l : j["lines"]) {
          if (common.format == "csv") {
            std::cout << '"' << l["lhs"].get<std::string>() << "\",\"" << l["rhs"].get<std::string>() << "\","
                      << l["lhs_value"].get<std::string>() << ',' << l["rhs_value"].get<std::string>() << ','
                      << l["deviation"].get<std::string>() << ',' << l["error_bound"].get<std::string>() << ','
                      << (l["pass"].get<bool>() ? "pass" : "fail") << '\n';
          } else {
            std::cout << l["lhs"].get<std::string>() << " = " << l["rhs"].get<std::string>() << "  lhs "
                      << l["lhs_value"].get<std::string>() << "  rhs " << l["rhs_value"].get<std::string>()
                      << "  dev " << l["deviation"].get<std::string>() << "  bound "
                      << l["error_bound"].get<std::string>() << "  " << (l["pass"].get<bool>() ? "pass" : "FAIL")
                      << '\n';
          }
        }
      }
      return j["all_pass"].get<bool>() ? exit_ok : exit_false;
    }
    if (*deligne) {
      const auto text = session.take(mtz_deligne_count(ctx, w, &out), &out);
      const auto j = json::parse(text);
      const bool same = j["count"] == j["fibonacci"];
      if (common.format == "json") {
        std::cout << text << '\n';
      } else if (common.format == "csv") {
        std::cout << "w,count,fibonacci\n" << w << ',' << j["count"].get<std::string>() << ','
                  << j["fibonacci"].get<std::string>() << '\n';
      } else {
        std::cout << j["count"].get<std::string>() << (same ? " (= F_" : " (!= F_") << w << ")\n";
      }
      return same ? exit_ok : exit_false;
    }
  } catch (const CliError& e) {
    std::cerr << "mtz: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "mtz: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}
