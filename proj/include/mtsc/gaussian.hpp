#pragma once

// Quadratic Gaussian CEO problem: Y_l = Y0 + N_l with independent Gaussian
// noises. Mutual informations of the Gaussian test channels come from
// log-determinants of their covariance matrices.

#include <optional>
#include <vector>

#include "mtsc/params.hpp"
#include "mtsc/pmf.hpp"
#include "mtsc/regions.hpp"

namespace mtsc {

/// Per-subset lower bounds for distortion D and witness r, indexed by mask
/// over all 2^L subsets. Entry 0 is the distortion-feasibility constraint
/// 0 >= (1/2) log+ [ (1/D) (1/sigma2 + sum_l (1 - e^{-2 r_l}) / sigma_l^2)^{-1} ].
std::vector<double> gaussian_subset_bounds(const GaussianParams& params, double distortion,
                                           const std::vector<double>& r);

/// Whether (rates, D) meets every subset bound for witness r with slack
/// >= -1e-12. point.distortions must hold exactly one value, D > 0.
bool gaussian_region_contains(const GaussianParams& params, const RatePoint& point,
                              const std::vector<double>& r);

struct GaussianSumRate {
  Nats sum_rate = 0.0;
  std::vector<double> r;  // minimizing witness
};

/// Minimum of sum_l r_l + (1/2) log+(sigma2 / D) subject to
/// 1/D <= 1/sigma2 + sum_l (1 - e^{-2 r_l}) / sigma_l^2. The optimum is the
/// reverse water-filling r_l = max(0, (1/2) ln(1 / (nu sigma_l^2))).
/// Throws for D <= min_distortion(); returns 0 for D >= sigma2.
GaussianSumRate gaussian_min_sum_rate(const GaussianParams& params, double distortion);

/// RHS - LHS of exp(2 I(Y0; U_A)) <= 1 + sum_{l in A} (1 - exp(-2 I(Y_l; U_l | Y0))) sigma2 / sigma_l^2
/// for U_l = Y_l + Q_l with independent Q_l ~ N(0, q_l).
double oohama_gap(const GaussianParams& params, const std::vector<double>& q, SubsetMask a);

struct TestChannelMix {
  double weight;
  std::vector<double> q;
};

/// The same inequality when a time-sharing variable T picks one of several
/// test-noise vectors; both informations are averaged over T.
double oohama_gap(const GaussianParams& params, const std::vector<TestChannelMix>& mix,
                  SubsetMask a);

struct GaussianCounterexample {
  double sigma_w2 = 0.0;
  Nats joint_information = 0.0;        // I(Y1, Y2; U1, U2)
  Nats conditional_information = 0.0;  // I(Y1, Y2; U1 | U2)
  double distortion = 0.0;             // E[(Y0 - E[Y0 | U1, U2])^2]

  Nats sum_rate() const;  // max(joint, 2 * conditional)
};

/// U1 = Y1 + V1 + W, U2 = Y2 + V2 - W with unit-variance V's and
/// Var(W) = sigma_w2. Needs L = 2.
GaussianCounterexample gaussian_bt_counterexample(const GaussianParams& params,
                                                  double sigma_w2);

/// Smallest sum_rate() over sigma_w2 > 0 by golden-section search in
/// log sigma_w2; returned only when it is at most the minimum sum rate at
/// the construction's distortion minus `margin`.
std::optional<GaussianCounterexample> search_gaussian_bt_counterexample(
    const GaussianParams& params, double margin);

}  // namespace mtsc
