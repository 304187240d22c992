#include "mtsc/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mtsc {

namespace {

bool in_mask(SubsetMask mask, std::size_t l) { return (mask >> (l - 1)) & 1u; }

VarSet encoder_set(std::size_t encoders, SubsetMask mask) {
  VarSet s;
  for (std::size_t l = 1; l <= encoders; ++l) {
    if (in_mask(mask, l)) s.push_back(encoder_name(l));
  }
  return s;
}

void check_encoder_count(std::size_t encoders) {
  if (encoders == 0 || encoders > kMaxEncoders) {
    throw std::invalid_argument("region: encoder count must be in [1, 16]");
  }
}

std::vector<double> distortions_of(const SourceModel& model, const JointPmf& full) {
  std::vector<double> d;
  for (std::size_t k = 0; k < model.distortion_count(); ++k) {
    d.push_back(expected_distortion(model, full, k));
  }
  return d;
}

void require(const MarkovReport& report, const std::string& what) {
  if (!report.pass()) throw MarkovError(what, report);
}

// I(left; U_A | U_{A^c}, Y{L+1}, T) for every nonempty A, where `left`
// may depend on A.
template <typename Left>
void fill_conditional_bounds(RegionConstraints& out, const JointPmf& joint,
                             const SourceModel& model, Left&& left) {
  const std::size_t L = model.encoders();
  for (SubsetMask a = 1; a <= out.full_mask(); ++a) {
    VarSet given = encoder_set(L, out.full_mask() & ~a);
    given.push_back(model.side_information());
    given.push_back("T");
    out.subset_bounds[a] =
        std::max(0.0, conditional_mutual_information(joint, left(a), encoder_set(L, a), given));
  }
}

}  // namespace

RegionConstraints::RegionConstraints(std::size_t encoders, std::vector<double> distortions)
    : encoders(encoders), distortions(std::move(distortions)) {
  check_encoder_count(encoders);
  subset_bounds.assign(std::size_t{1} << encoders, 0.0);
}

double min_slack(const RegionConstraints& constraints, const std::vector<double>& rates) {
  if (rates.size() != constraints.encoders) {
    throw std::invalid_argument("rate vector length differs from encoder count");
  }
  double slack = INFINITY;
  for (SubsetMask a = 1; a <= constraints.full_mask(); ++a) {
    double sum = 0.0;
    for (std::size_t l = 1; l <= constraints.encoders; ++l) {
      if (in_mask(a, l)) sum += rates[l - 1];
    }
    slack = std::min(slack, sum - constraints.bound(a));
  }
  return slack;
}

bool satisfies(const RegionConstraints& constraints, const std::vector<double>& rates,
               double slack) {
  return min_slack(constraints, rates) >= -slack;
}

std::string subset_label(SubsetMask mask, std::size_t encoders) {
  std::string s = "0b";
  for (std::size_t l = encoders; l >= 1; --l) s += in_mask(mask, l) ? '1' : '0';
  return s;
}

RegionConstraints bt_inner_constraints(const SourceModel& model, const AuxSystem& gamma,
                                       Validation validation) {
  check_encoder_count(model.encoders());
  const JointPmf full = build_full_joint(model, std::nullopt, gamma);
  if (validation == Validation::kStrict) {
    require(check_gamma_class(model, std::nullopt, full, GammaClass::kBergerTungInner),
            "system is not in the Berger-Tung inner class");
  }
  RegionConstraints out(model.encoders(), distortions_of(model, full));
  const JointPmf joint = marginalize(
      full, join(join(model.observations(), encoder_set(model.encoders(), out.full_mask())),
                 {model.side_information(), "T"}));
  fill_conditional_bounds(out, joint, model,
                          [&](SubsetMask a) { return model.observations(a); });
  return out;
}

RegionConstraints bt_outer_constraints(const SourceModel& model, const AuxSystem& gamma,
                                       Validation validation) {
  check_encoder_count(model.encoders());
  const JointPmf full = build_full_joint(model, std::nullopt, gamma);
  if (validation == Validation::kStrict) {
    require(check_gamma_class(model, std::nullopt, full, GammaClass::kBergerTungOuter),
            "system is not in the Berger-Tung outer class");
  }
  RegionConstraints out(model.encoders(), distortions_of(model, full));
  const VarSet y = model.observations();
  const JointPmf joint = marginalize(
      full, join(join(y, encoder_set(model.encoders(), out.full_mask())),
                 {model.side_information(), "T"}));
  fill_conditional_bounds(out, joint, model, [&](SubsetMask) { return y; });
  return out;
}

RegionConstraints new_outer_constraints(const SourceModel& model, const XChannel& x,
                                        const AuxSystem& gamma, Validation validation) {
  check_encoder_count(model.encoders());
  const std::size_t L = model.encoders();
  const JointPmf full = build_full_joint(model, x, gamma);
  if (validation == Validation::kStrict) {
    require(check_chi(model, x), "X does not make the observations conditionally independent");
    require(check_gamma_class(model, x, full, GammaClass::kOuter),
            "system is not in the outer-bound class");
  }
  RegionConstraints out(L, distortions_of(model, full));
  const JointPmf joint =
      marginalize(full, join(join(model.observations(), encoder_set(L, out.full_mask())),
                             {"X", model.side_information(), "W", "T"}));
  fill_conditional_bounds(out, joint, model, [](SubsetMask) { return VarSet{"X"}; });

  std::vector<double> noise(L + 1, 0.0);
  for (std::size_t l = 1; l <= L; ++l) {
    noise[l] = std::max(0.0, conditional_mutual_information(
                                 joint, {source_name(l)}, {encoder_name(l)},
                                 {"X", model.side_information(), "W", "T"}));
  }
  for (SubsetMask a = 1; a <= out.full_mask(); ++a) {
    for (std::size_t l = 1; l <= L; ++l) {
      if (in_mask(a, l)) out.subset_bounds[a] += noise[l];
    }
  }
  return out;
}

NotSupermodularError::NotSupermodularError(SubsetMask a, SubsetMask b, double violation,
                                           std::size_t encoders)
    : std::runtime_error("bounds are not supermodular: f(" + subset_label(a | b, encoders) +
                         ") + f(" + subset_label(a & b, encoders) + ") < f(" +
                         subset_label(a, encoders) + ") + f(" + subset_label(b, encoders) +
                         ") by " + std::to_string(violation)),
      a_(a),
      b_(b),
      violation_(violation) {}

std::optional<std::pair<SubsetMask, SubsetMask>> find_supermodularity_violation(
    const RegionConstraints& constraints, double tolerance) {
  const SubsetMask full = constraints.full_mask();
  for (SubsetMask a = 1; a <= full; ++a) {
    for (SubsetMask b = a + 1; b <= full; ++b) {
      if ((a & b) == a || (a & b) == b) continue;  // nested pairs hold trivially
      const double lhs = constraints.bound(a | b) + constraints.bound(a & b);
      const double rhs = constraints.bound(a) + constraints.bound(b);
      if (lhs < rhs - tolerance) return std::pair{a, b};
    }
  }
  return std::nullopt;
}

RatePoint contrapolymatroid_vertex(const RegionConstraints& constraints,
                                   const std::vector<std::size_t>& order) {
  const std::size_t L = constraints.encoders;
  std::vector<bool> seen(L + 1, false);
  if (order.size() != L) throw std::invalid_argument("vertex order must list every encoder");
  for (std::size_t l : order) {
    if (l < 1 || l > L || seen[l]) {
      throw std::invalid_argument("vertex order must be a permutation of 1..L");
    }
    seen[l] = true;
  }
  if (auto bad = find_supermodularity_violation(constraints)) {
    const auto [a, b] = *bad;
    const double v = constraints.bound(a) + constraints.bound(b) - constraints.bound(a | b) -
                     constraints.bound(a & b);
    throw NotSupermodularError(a, b, v, L);
  }

  RatePoint point{std::vector<double>(L, 0.0), constraints.distortions};
  SubsetMask prefix = 0;
  for (std::size_t l : order) {
    const SubsetMask next = prefix | (SubsetMask{1} << (l - 1));
    point.rates[l - 1] = constraints.bound(next) - constraints.bound(prefix);
    prefix = next;
  }
  return point;
}

RegionConstraints slepian_wolf_bounds(const SourceModel& model) {
  check_encoder_count(model.encoders());
  RegionConstraints out(model.encoders(), {});
  const JointPmf joint = marginalize(model.joint(), model.observations());
  for (SubsetMask a = 1; a <= out.full_mask(); ++a) {
    out.subset_bounds[a] =
        std::max(0.0, entropy(joint, model.observations(a), model.observations(out.full_mask() & ~a)));
  }
  return out;
}

BergerYeungBounds berger_yeung_bounds(const SourceModel& model, const AuxSystem& gamma) {
  if (model.encoders() != 2) throw std::invalid_argument("Berger-Yeung bounds need L = 2");
  const JointPmf& src = model.joint();
  const double mismatch = entropy(src, {"Y0"}, {"Y1"}) + entropy(src, {"Y1"}, {"Y0"});
  if (mismatch > kMarkovTolerance) {
    throw std::invalid_argument("Berger-Yeung bounds need Y1 to equal Y0");
  }
  const JointPmf joint =
      marginalize(build_full_joint(model, std::nullopt, gamma), {"Y1", "Y2", "U2", "T"});
  BergerYeungBounds b;
  b.r1_min = std::max(0.0, entropy(joint, {"Y1"}, {"U2", "T"}));
  b.r2_min = std::max(0.0, conditional_mutual_information(joint, {"Y2"}, {"U2"}, {"Y1", "T"}));
  b.sum_min = entropy(joint, {"Y1"}) + b.r2_min;
  return b;
}

}  // namespace mtsc
