#include "mtz/classical.hpp"

namespace mtz::classical {

namespace {

struct Identity {
  const char* alphas;
  int lambda;
  // rhs = c_zeta3 * zeta(3) + c_pi4 * pi^4 + c_alt * zeta(1,-3)
  Rational c_zeta3;
  Rational c_pi4;
  Rational c_alt;
  const char* rhs_label;
};

std::vector<Identity> identities() {
  auto q = [](long n, long d) { return Rational(n, d); };
  return {
      {"1,1", 1, q(2, 1), 0, 0, "2*zeta(3)"},
      {"-1,1", 1, q(-5, 8), 0, 0, "-5/8*zeta(3)"},
      {"-1,-1", 1, q(1, 4), 0, 0, "1/4*zeta(3)"},
      {"1,1,1", 1, 0, q(1, 15), 0, "pi^4/15"},
      {"-1,-1,1", 1, 0, q(1, 240), 0, "pi^4/240"},
      {"-1,1,1", 1, 0, q(-1, 72), q(-1, 1), "-pi^4/72 - zeta(1,-3)"},
      {"1,2", 1, 0, q(1, 72), 0, "pi^4/72"},
      {"-1,-2", 1, 0, q(1, 288), 0, "pi^4/288"},
      {"-1,-1,-1", 1, 0, q(-1, 240), q(3, 1), "-pi^4/240 + 3*zeta(1,-3)"},
      {"1,1", 2, 0, q(1, 180), 0, "pi^4/180"},
      {"-1,-1", 2, 0, 0, q(2, 1), "2*zeta(1,-3)"},
      {"-1,2", 1, 0, q(-1, 240), q(-1, 1), "-pi^4/240 - zeta(1,-3)"},
      {"1,-2", 1, 0, q(-7, 720), q(1, 1), "-7*pi^4/720 + zeta(1,-3)"},
      {"-1,1", 2, 0, q(-1, 480), q(-1, 1), "-pi^4/480 - zeta(1,-3)"},
  };
}

Float to_float(const Rational& x) {
  return strtoflt128(x.get_num().get_str().c_str(), nullptr) /
         strtoflt128(x.get_den().get_str().c_str(), nullptr);
}

}  // namespace

TableReport verify_value_table(double tolerance, std::uint64_t cutoff) {
  const Float zeta3 = zeta3_value();
  const Float pi = pi_value();
  const Float pi4 = pi * pi * pi * pi;
  const Estimate alt = eval_mzv({{1, 3}, {1, -1}}, cutoff);
  // the two series constants are accurate far below this
  const Float constant_error = Float(1e-30);

  TableReport report{{}, 0, true};
  for (const auto& id : identities()) {
    const SignedMtIndex idx = SignedMtIndex::parse(id.alphas, id.lambda);
    const Estimate lhs = eval_combination(mt_to_mzv(idx), cutoff);
    const Float rhs = to_float(id.c_zeta3) * zeta3 + to_float(id.c_pi4) * pi4 +
                      to_float(id.c_alt) * alt.value;
    const Float rhs_error = fabsq(to_float(id.c_alt)) * alt.error + constant_error;
    TableLine line{idx.to_string(), id.rhs_label, lhs.value, rhs, fabsq(lhs.value - rhs),
                   lhs.error + rhs_error, false};
    line.pass = line.deviation <= Float(tolerance) && line.error_bound < Float(tolerance);
    report.max_deviation = fmaxq(report.max_deviation, line.deviation);
    report.all_pass = report.all_pass && line.pass;
    report.lines.push_back(std::move(line));
  }
  return report;
}

}  // namespace mtz::classical
