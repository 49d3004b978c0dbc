#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mtz/verifier.hpp"
#include "oracles.hpp"

using namespace mtz;
using namespace mtz::verify;
using nlohmann::json;

namespace {

BigInt oracle_z(std::uint64_t p, unsigned r, const std::vector<int>& s, unsigned e) {
  return BigInt(static_cast<unsigned long>(oracle::z_sum_mod(p, r, s, oracle::upow(p, e))));
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mtz_test_" + name);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("base congruence") {
  const auto r5 = check_base(5);
  CHECK(r5.lhs.value() == 3);
  CHECK(r5.rhs.value() == 3);
  CHECK(r5.verdict);
  const auto r7 = check_base(7);
  CHECK(r7.verdict);
  CHECK(r7.lhs.value() == oracle_z(7, 1, {1, 1, 1}, 1));
  CHECK(r7.rhs.value() == 1);  // -2 B_4 = 1/15
  CHECK(code_of([] { (void)check_base(3); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("double chain sums") {
  const auto odd = check_dbl_mhs(5, 2, 1, 2);
  CHECK(odd.verdict);
  CHECK(odd.claim.kind == ClaimKind::DblMhsOdd);
  CHECK(odd.lhs.modulus() == 25);
  const auto even = check_dbl_mhs(5, 2, 1, 3);
  CHECK(even.verdict);
  CHECK(even.claim.kind == ClaimKind::DblMhsEven);
  CHECK(even.lhs.modulus() == 625);
  const auto collapse = check_dbl_mhs(5, 1, 2, 1);
  CHECK(collapse.verdict);
  CHECK(collapse.lhs == collapse.rhs);
}

TEST_CASE("extended depth-3 congruence") {
  const auto a = check_ext_yang_cai(5, 2, 1, 1, 1);
  CHECK(a.verdict);
  CHECK(a.lhs.modulus() == 25);
  CHECK(a.lhs.value() == oracle_z(5, 2, {1, 1, 1}, 2));
  const auto b = check_ext_yang_cai(7, 2, 1, 1, 2);
  CHECK(b.verdict);
  CHECK(b.lhs.modulus() == 2401);
  CHECK(b.lhs.value() == oracle_z(7, 2, {1, 1, 2}, 4));
  CHECK(check_ext_yang_cai(5, 1, 1, 2, 1).verdict);
}

TEST_CASE("four-variable congruence") {
  const auto a = check_four_vars(11, 1, 1, 1, 2);
  CHECK(a.verdict);
  CHECK(a.lhs.value() == oracle_z(11, 1, {1, 1, 1, 2}, 1));
  CHECK(check_four_vars(13, 2, 1, 1, 1).verdict);
  CHECK(code_of([] { (void)check_four_vars(7, 1, 1, 1, 2); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("conjecture items") {
  const auto odd = check_conjecture(7, 2, {1, 1, 1, 2});
  REQUIRE(!odd.empty());
  bool saw_d4 = false;
  for (const auto& rep : odd) {
    CHECK(rep.verdict);
    if (rep.claim.kind == ClaimKind::ConjD4Odd) {
      saw_d4 = true;
      CHECK(rep.claim.modulus_exponent == 3);
      CHECK(rep.lhs.value() == oracle_z(7, 2, {1, 1, 1, 2}, 3));
    }
  }
  CHECK(saw_d4);

  // p = 5 is outside p > weight + 1 for this index
  CHECK(code_of([] { (void)check_conjecture(5, 2, {1, 1, 1, 1}); }) == ErrorCode::PreconditionViolated);
  const auto even = check_conjecture(7, 2, {1, 1, 1, 1});
  bool saw_even = false;
  for (const auto& rep : even) {
    CHECK(rep.verdict);
    if (rep.claim.kind == ClaimKind::ConjD4Even) {
      saw_even = true;
      CHECK(rep.claim.modulus_exponent == 2);
    }
  }
  CHECK(saw_even);
}

TEST_CASE("sharpness of the depth-4 modulus") {
  for (Oracle o : {Oracle::Brute, Oracle::Reduction}) {
    const auto rep = check_sharpness(13, 3, {8, 1, 1, 1}, {o, {}});
    CHECK(rep.verdict);
    CHECK(rep.claim.kind == ClaimKind::Sharpness);
    CHECK(rep.lhs.modulus() == ipow(13, 6));
    CHECK(rep.lhs.reduced_to(5) == rep.rhs.reduced_to(5));
    CHECK(rep.lhs != rep.rhs);
  }
}

TEST_CASE("keys and canonical order") {
  CHECK(canonical_index(ClaimKind::ConjD4Odd, {2, 1, 1, 1}).to_string() == "1,1,1,2");
  CHECK(canonical_index(ClaimKind::FourVars, {2, 1, 1, 3}).to_string() == "1,1,2,3");
  CHECK(canonical_index(ClaimKind::FourVars, {1, 1, 3, 2}).to_string() == "1,1,3,2");
  CHECK(canonical_index(ClaimKind::DblMhsOdd, {2, 1}).to_string() == "2,1");
  const CongruenceClaim c{ClaimKind::ExtYangCaiOdd, 5, 2, {1, 2, 1}, 2};
  CHECK(c.key() == "ext-yang-cai-odd|5|2|1,1,2");
  for (ClaimKind k : all_kinds) CHECK(parse_kind(to_string(k)) == k);
  CHECK_FALSE(parse_kind("nonsense").has_value());
}

TEST_CASE("verdicts are recomputable from stored sides") {
  std::vector<CongruenceReport> reps{check_base(11), check_dbl_mhs(7, 2, 2, 1),
                                     check_ext_yang_cai(7, 2, 1, 2, 2),
                                     check_four_vars(11, 1, 2, 1, 1),
                                     check_sharpness(13, 3, {8, 1, 1, 1})};
  for (const auto& rep : check_conjecture(7, 2, {1, 1, 2})) reps.push_back(rep);
  for (const auto& rep : reps) {
    CHECK(recompute_verdict(rep.claim.kind, rep.lhs, rep.rhs) == rep.verdict);
    const json j = json::parse(to_json_line(rep));
    const Residue lhs(rep.claim.p, rep.claim.modulus_exponent, BigInt(j["lhs"].get<std::string>()));
    const Residue rhs(rep.claim.p, rep.claim.modulus_exponent, BigInt(j["rhs"].get<std::string>()));
    CHECK(recompute_verdict(rep.claim.kind, lhs, rhs) == j["verdict"].get<bool>());
    CHECK(j["key"] == rep.claim.key());
  }
}

TEST_CASE("brute and reduction routes agree in every parity class") {
  const CheckOptions brute{Oracle::Brute, {}};
  const CheckOptions red{Oracle::Reduction, {}};
  auto same = [](const CongruenceReport& a, const CongruenceReport& b) {
    CHECK(a.claim.key() == b.claim.key());
    CHECK(a.lhs == b.lhs);
    CHECK(a.rhs == b.rhs);
    CHECK(a.verdict == b.verdict);
    CHECK(a.oracle != b.oracle);
  };
  same(check_base(13, brute), check_base(13, red));
  same(check_ext_yang_cai(7, 2, 1, 1, 1, brute), check_ext_yang_cai(7, 2, 1, 1, 1, red));
  same(check_ext_yang_cai(7, 2, 1, 1, 2, brute), check_ext_yang_cai(7, 2, 1, 1, 2, red));
  same(check_four_vars(11, 1, 1, 2, 1, brute), check_four_vars(11, 1, 1, 2, 1, red));
  for (const auto& s : {ExponentIndex{1, 1, 1, 2}, ExponentIndex{1, 1, 1, 1},
                        ExponentIndex{1, 1, 1, 1, 2}, ExponentIndex{1, 1, 1, 1, 1}}) {
    const std::uint64_t p = s.weight() < 6 ? 7 : 11;
    const auto a = check_conjecture(p, 2, s, brute);
    const auto b = check_conjecture(p, 2, s, red);
    REQUIRE(a.size() == b.size());
    CHECK(!a.empty());
    for (std::size_t i = 0; i < a.size(); ++i) same(a[i], b[i]);
  }
}

TEST_CASE("scan config parsing") {
  const auto c = ScanConfig::from_json(
      R"({"kinds":["base","conjecture"],"primes":{"min":5,"max":13},"r_range":[1,2],)"
      R"("depth_range":[2,4],"weight_max":5,"workers":2})");
  CHECK(c.primes == std::vector<std::uint64_t>{5, 7, 11, 13});
  CHECK(c.r_min == 1);
  CHECK(c.r_max == 2);
  CHECK(c.workers == 2);
  CHECK(code_of([] { (void)ScanConfig::from_json(R"({"kinds":["base"],"bogus":1})"); }) ==
        ErrorCode::ConfigInvalid);
  CHECK(code_of([] { (void)ScanConfig::from_json(R"({"kinds":["nope"]})"); }) ==
        ErrorCode::ConfigInvalid);
  CHECK(code_of([] { (void)ScanConfig::from_json("{not json"); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("base scan over p <= 50") {
  ScanConfig c;
  c.kinds = {ClaimKind::Base};
  for (std::uint64_t p = 2; p <= 50; ++p) {
    if (is_prime(p)) c.primes.push_back(p);
  }
  c.out_path = temp_file("base.jsonl");
  const auto res = scan(c);
  // primes 5..47: thirteen of them
  CHECK(res.reports.size() == 13);
  CHECK(res.all_passed());
  const auto lines = read_lines(c.out_path);
  REQUIRE(lines.size() == 13);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const json j = json::parse(lines[i]);
    for (const char* field : {"key", "kind", "p", "r", "s", "modulus", "lhs", "rhs", "verdict",
                              "engine_version", "oracle"}) {
      CHECK(j.contains(field));
    }
    CHECK(j["verdict"].get<bool>());
    if (i > 0) CHECK(json::parse(lines[i - 1])["p"].get<int>() < j["p"].get<int>());
  }
  bool saw_skip = false;
  for (const auto& k : res.summary) {
    if (k.kind == ClaimKind::Base) {
      CHECK(k.checked == 13);
      CHECK(k.skipped == 2);  // p = 2, 3
      saw_skip = true;
    }
  }
  CHECK(saw_skip);
  std::filesystem::remove(c.out_path);
}

TEST_CASE("empty grid") {
  ScanConfig c;
  const auto res = scan(c);
  CHECK(res.reports.empty());
  CHECK(res.all_passed());
}

TEST_CASE("four-vars grid at p = 11") {
  ScanConfig c;
  c.kinds = {ClaimKind::FourVars};
  c.primes = {11};
  c.weight_max = 7;
  const auto res = scan(c);
  CHECK(!res.reports.empty());
  CHECK(res.all_passed());
}

TEST_CASE("scan is deterministic across worker counts") {
  ScanConfig c = ScanConfig::from_json(
      R"({"kinds":["dbl-mhs","ext-yang-cai","conjecture"],"primes":[5,7],"r_range":[1,2],)"
      R"("depth_range":[2,4],"weight_max":5})");
  c.timings = false;
  c.workers = 1;
  const auto a = scan(c);
  c.workers = 3;
  const auto b = scan(c);
  REQUIRE(a.reports.size() == b.reports.size());
  CHECK(!a.reports.empty());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(to_json_line(a.reports[i], false) == to_json_line(b.reports[i], false));
  }
  CHECK(a.summary_csv() == b.summary_csv());
  CHECK(a.summary_csv().rfind("kind,checked,passed,failed,skipped", 0) == 0);
}

TEST_CASE("unwritable record file") {
  ScanConfig c;
  c.kinds = {ClaimKind::Base};
  c.primes = {5};
  c.out_path = "/nonexistent-dir/records.jsonl";
  CHECK(code_of([&] { (void)scan(c); }) == ErrorCode::PersistenceFailure);
}
