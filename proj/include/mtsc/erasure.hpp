#pragma once

// Closed-form results for the binary erasure CEO problem. Analytic values
// are the lambda -> infinity limits; lambda only enters the distortion
// tables of the discrete instances.

#include <cstdint>
#include <vector>

#include "mtsc/params.hpp"
#include "mtsc/pmf.hpp"

namespace mtsc {

/// h(x) - (1-p) h((x-p)/(1-p)) on [p, 1] and 0 above 1. Throws for x < p
/// or p outside (0, 1).
Nats g_function(double x, double p);

/// Derivative of g(e^x) in x on (ln p, 0): e^x ln(e^x - p) - x e^x.
double g_exp_slope(double x, double p);

/// Optimal sum rate (1 - D) ln 2 + L g(D^{1/L}).
Nats erasure_sum_rate(const ErasureParams& params);

/// Minimum of (1/2)[g(e^a) + g(e^b)] over a, b in [ln p, 0] subject to
/// (1/2) e^{La} + (1/2) e^{Lb} <= D, by projected gradient descent from 64
/// seeded random starts. The optimum is g(D^{1/L}).
Nats noise_info_minimum(const ErasureParams& params, std::uint64_t seed = 1);

struct ShapeReport {
  double max_first_difference = 0.0;   // want <= 1e-12 (nonincreasing)
  double min_second_difference = 0.0;  // want >= -1e-9 (convex)
  /// Smallest slack of the two derivative inequalities on (ln p, 0]; the
  /// corollary report leaves these at 0.
  double min_slope_slack = 0.0;      // -p - (e^x ln(e^x - p) - x e^x)
  double min_curvature_slack = 0.0;  // e^x ln(e^x-p) - e^x(x+1) + e^{2x}/(e^x-p)

  bool pass() const;
};

/// g(e^x) on a uniform grid of `grid_size` points over [ln p, 1], plus the
/// slope and curvature inequalities on the same grid restricted to
/// (ln p, 0].
ShapeReport g_shape_report(double p, std::size_t grid_size);

/// g(y^{1/L}) on a uniform grid over [p^L, 2].
ShapeReport g_root_shape_report(double p, std::size_t encoders, std::size_t grid_size);

struct ErasureCounterexample {
  Nats joint_information = 0.0;        // I(Y1, Y2; U1, U2)
  Nats conditional_information = 0.0;  // I(Y1, Y2; U1 | U2)
  double erasure_probability = 0.0;    // Pr(Z1 = 0)
  double error_probability = 0.0;      // Pr(Y0 * Z1 = -1)
};

/// Exact quantities of the correlated-erasure system at p = 1/2, L = 2.
ErasureCounterexample erasure_bt_counterexample(double lambda = kDefaultLambda);

struct CurvePoint {
  double distortion;
  std::size_t encoders;
  Nats sum_rate;
};

/// For each L, `points` evenly spaced D values over [p^L, 1].
std::vector<CurvePoint> erasure_curve(double p, const std::vector<std::size_t>& encoder_counts,
                                      std::size_t points);

}  // namespace mtsc
