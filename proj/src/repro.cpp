#include "mtsc/repro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mtsc/casebook.hpp"
#include "mtsc/gaussian.hpp"
#include "mtsc/json_io.hpp"
#include "mtsc/regions.hpp"

namespace mtsc {

namespace {

constexpr double kLn2 = std::numbers::ln2;

ReproCheck near(std::string name, std::string expected, double computed, double target,
                double tol, bool is_rate = true) {
  return {std::move(name), std::move(expected), computed, is_rate,
          std::abs(computed - target) <= tol};
}

ReproCheck in_half_open(std::string name, double computed, double lo, double hi) {
  return {std::move(name),
          "in (" + format_number(lo, 6) + ", " + format_number(hi, 6) + "]",
          computed, true, computed > lo && computed <= hi};
}

}  // namespace

bool ReproReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ReproCheck& c) { return c.pass; });
}

ReproReport repro_toy() {
  ReproReport report{"toy", {}, {}};
  const Instance shared = toy_bt_instance();
  const JointPmf joint = build_full_joint(shared.model, std::nullopt, shared.gamma);
  const VarSet y{"Y1", "Y2"};
  auto& c = report.checks;
  c.push_back(near("I(Y;U1,U2)", "(5/4) ln 2 +- 1e-12", mutual_information(joint, y, {"U1", "U2"}),
                   1.25 * kLn2, 1e-12));
  c.push_back(near("I(Y;U1)", "(1/2) ln 2 +- 1e-12", mutual_information(joint, y, {"U1"}),
                   0.5 * kLn2, 1e-12));
  c.push_back(near("I(Y;U1|U2)", "(3/4) ln 2 +- 1e-12",
                   conditional_mutual_information(joint, y, {"U1"}, {"U2"}), 0.75 * kLn2, 1e-12));
  c.push_back(near("E[d1]", "0 +- 1e-12", expected_distortion(shared.model, joint, 0), 0.0, 1e-12,
                   false));

  // With W revealed to the decoder every encoder needs a full bit.
  const AuxSystem folded = fold_w_into_t(shared.gamma);
  const RegionConstraints inner = bt_inner_constraints(shared.model, folded, Validation::kStrict);
  const RatePoint corner = contrapolymatroid_vertex(inner, {1, 2});
  c.push_back(near("corner R1", "ln 2 +- 1e-12", corner.rates[0], kLn2, 1e-12));
  c.push_back(near("corner R2", "ln 2 +- 1e-12", corner.rates[1], kLn2, 1e-12));
  return report;
}

ReproReport repro_correlated_erasure() {
  ReproReport report{"appendix-c", {}, {}};
  const ErasureCounterexample ex = erasure_bt_counterexample();
  const double sum_rate = erasure_sum_rate({0.5, 2, 0.6, kDefaultLambda});
  auto& c = report.checks;
  c.push_back(in_half_open("I(Y1,Y2;U1,U2)", ex.joint_information, 0.6268, 0.6273));
  c.push_back(in_half_open("I(Y1,Y2;U1|U2)", ex.conditional_information, 0.3243, 0.3248));
  c.push_back(near("Pr(Z1=0)", "0.6 +- 1e-12", ex.erasure_probability, 0.6, 1e-12, false));
  c.push_back(near("Pr(error)", "0 +- 1e-12", ex.error_probability, 0.0, 1e-12, false));
  const double gap = sum_rate - 2.0 * ex.conditional_information;
  c.push_back({"sum rate - 2 I(Y1,Y2;U1|U2)", ">= 0.006", gap, true, gap >= 0.006});
  c.push_back({"erasure sum rate at D=0.6", ">= 0.6562", sum_rate, true, sum_rate >= 0.6562});
  return report;
}

ReproReport repro_correlated_gaussian() {
  ReproReport report{"appendix-e", {}, {}};
  const GaussianParams params{1.0, {1.0, 1.0}};
  const double bound = 1.5 * kLn2;
  auto& c = report.checks;
  c.push_back(near("min sum rate at D=0.5", "(3/2) ln 2 +- 1e-9",
                   gaussian_min_sum_rate(params, 0.5).sum_rate, bound, 1e-9));
  constexpr double kMargin = 0.04;
  const auto found = search_gaussian_bt_counterexample(params, kMargin);
  if (!found) {
    c.push_back({"max(I_joint, 2 I_cond)", "<= (3/2) ln 2 - 0.04", bound, true, false});
    return report;
  }
  c.push_back({"sigma_W^2", "found", found->sigma_w2, false, true});
  c.push_back({"I(Y1,Y2;U1,U2)", "reported", found->joint_information, true, true});
  c.push_back({"I(Y1,Y2;U1|U2)", "reported", found->conditional_information, true, true});
  c.push_back({"max(I_joint, 2 I_cond)", "<= (3/2) ln 2 - 0.04", found->sum_rate(), true,
               found->sum_rate() <= bound - kMargin});
  c.push_back(near("MMSE", "0.5 +- 1e-12", found->distortion, 0.5, 1e-12, false));
  return report;
}

ReproReport repro_erasure_figure(std::size_t points) {
  constexpr double p = 0.5;
  const std::vector<std::size_t> encoder_counts{1, 2, 3, 10};
  ReproReport report{"erasure-figure", {}, erasure_curve(p, encoder_counts, points)};
  auto& c = report.checks;
  const double at_06 = erasure_sum_rate({p, 2, 0.6, kDefaultLambda});
  c.push_back(near("sum rate L=2 D=0.6", "0.656323 +- 2e-4", at_06, 0.656323, 2e-4));
  c.push_back({"sum rate L=2 D=0.6 lower", ">= 0.6562", at_06, true, at_06 >= 0.6562});
  for (std::size_t L : encoder_counts) {
    const std::string tag = " L=" + std::to_string(L);
    const double top = erasure_sum_rate({p, L, 1.0, kDefaultLambda});
    c.push_back({"sum rate D=1" + tag, "0 exactly", top, true, top == 0.0});
    const double pl = std::pow(p, static_cast<double>(L));
    const double bottom = erasure_sum_rate({p, L, pl, kDefaultLambda});
    c.push_back(near("sum rate D=p^L" + tag, "(1-p^L) ln 2 + L h(p) +- 1e-12", bottom,
                     (1.0 - pl) * kLn2 + static_cast<double>(L) * binary_entropy(p), 1e-12));
    double worst_rise = -INFINITY;
    const CurvePoint* prev = nullptr;
    for (const CurvePoint& pt : report.curve) {
      if (pt.encoders != L) continue;
      if (prev) worst_rise = std::max(worst_rise, pt.sum_rate - prev->sum_rate);
      prev = &pt;
    }
    c.push_back({"largest rise along curve" + tag, "<= 1e-12", worst_rise, true,
                 worst_rise <= 1e-12});
  }
  return report;
}

ReproReport run_repro(std::string_view target) {
  if (target == "toy") return repro_toy();
  if (target == "appendix-c") return repro_correlated_erasure();
  if (target == "appendix-e") return repro_correlated_gaussian();
  if (target == "erasure-figure") return repro_erasure_figure();
  throw std::invalid_argument("unknown repro target: " + std::string(target));
}

}  // namespace mtsc
