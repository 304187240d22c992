#pragma once

// Constraint sets of the bound regions. Subsets of {1..L} are bitmasks with
// encoder l at bit l-1; L is limited to 16 by the representation and to
// about 5 in practice by the 2^L conditional mutual informations per region.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mtsc/model.hpp"

namespace mtsc {

using SubsetMask = unsigned;

inline constexpr std::size_t kMaxEncoders = 16;

struct RegionConstraints {
  std::size_t encoders = 0;
  /// Indexed by mask; entry 0 is unused and always 0.
  std::vector<double> subset_bounds;
  /// Expected distortions E[d_k], one per reproduction.
  std::vector<double> distortions;

  RegionConstraints() = default;
  RegionConstraints(std::size_t encoders, std::vector<double> distortions);

  SubsetMask full_mask() const { return (SubsetMask{1} << encoders) - 1u; }
  double bound(SubsetMask mask) const { return subset_bounds.at(mask); }
  double full_bound() const { return bound(full_mask()); }
};

struct RatePoint {
  std::vector<double> rates;
  std::vector<double> distortions;
};

/// Whether every subset sum of `rates` meets its bound up to `slack`.
bool satisfies(const RegionConstraints& constraints, const std::vector<double>& rates,
               double slack = 1e-10);

/// Smallest slack sum_{l in A} R_l - bound(A) over all nonempty A.
double min_slack(const RegionConstraints& constraints, const std::vector<double>& rates);

/// "0b011"-style label of a subset, L binary digits with encoder L first.
std::string subset_label(SubsetMask mask, std::size_t encoders);

/// Evaluators validate the Markov class first unless told otherwise.
enum class Validation { kStrict, kTrusted };

/// sum_{l in A} R_l >= I(Y_A; U_A | U_{A^c}, Y{L+1}, T). Requires the
/// Berger-Tung inner class.
RegionConstraints bt_inner_constraints(const SourceModel& model, const AuxSystem& gamma,
                                       Validation validation = Validation::kStrict);

/// sum_{l in A} R_l >= I(Y; U_A | U_{A^c}, Y{L+1}, T). Requires the
/// Berger-Tung outer class.
RegionConstraints bt_outer_constraints(const SourceModel& model, const AuxSystem& gamma,
                                       Validation validation = Validation::kStrict);

/// sum_{l in A} R_l >= I(X; U_A | U_{A^c}, Y{L+1}, T)
///                     + sum_{l in A} I(Y_l; U_l | X, Y{L+1}, W, T)
/// under the Markov coupling. Requires X in chi and gamma in Gamma_o.
RegionConstraints new_outer_constraints(const SourceModel& model, const XChannel& x,
                                        const AuxSystem& gamma,
                                        Validation validation = Validation::kStrict);

class NotSupermodularError : public std::runtime_error {
 public:
  NotSupermodularError(SubsetMask a, SubsetMask b, double violation, std::size_t encoders);
  SubsetMask first() const { return a_; }
  SubsetMask second() const { return b_; }
  double violation() const { return violation_; }

 private:
  SubsetMask a_, b_;
  double violation_;
};

/// First pair (A, B) with f(A u B) + f(A n B) < f(A) + f(B) - tolerance.
std::optional<std::pair<SubsetMask, SubsetMask>> find_supermodularity_violation(
    const RegionConstraints& constraints, double tolerance = 1e-9);

/// Greedy vertex of the contrapolymatroid for the encoder order `order`
/// (a permutation of 1..L): R_{order[k]} = f(first k+1) - f(first k).
/// Throws NotSupermodularError when the set function is not supermodular.
RatePoint contrapolymatroid_vertex(const RegionConstraints& constraints,
                                   const std::vector<std::size_t>& order);

/// sum_{l in A} R_l >= H(Y_A | Y_{A^c}); side information excluded.
RegionConstraints slepian_wolf_bounds(const SourceModel& model);

struct BergerYeungBounds {
  double r1_min = 0.0;   // H(Y1 | U2, T)
  double r2_min = 0.0;   // I(Y2; U2 | Y1, T)
  double sum_min = 0.0;  // H(Y1) + I(Y2; U2 | Y1, T)
};

/// Two encoders with Y1 = Y0 reproduced losslessly; only U2 and T enter.
BergerYeungBounds berger_yeung_bounds(const SourceModel& model, const AuxSystem& gamma);

}  // namespace mtsc
