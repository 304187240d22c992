#pragma once

#include <cstddef>
#include <vector>

namespace mtsc {

/// Default error penalty of the finite erasure distortion measure.
inline constexpr double kDefaultLambda = 1e6;

/// Binary erasure CEO problem: Y0 uniform on {-1, 1}, Y_l = N_l * Y0 with
/// Pr(N_l = 0) = p, target erasure rate D.
struct ErasureParams {
  double p = 0.5;
  std::size_t encoders = 2;
  double distortion = 1.0;
  double lambda = kDefaultLambda;

  /// Throws std::invalid_argument unless 0 < p < 1, L >= 1, p^L <= D <= 1
  /// and lambda > 0.
  void validate() const;
  double min_distortion() const;  // p^L
};

/// Gaussian CEO problem: Y_l = Y0 + N_l, Var(Y0) = sigma2, Var(N_l) = noise_vars[l-1].
struct GaussianParams {
  double sigma2 = 1.0;
  std::vector<double> noise_vars;

  void validate() const;
  std::size_t encoders() const { return noise_vars.size(); }
  /// (1/sigma2 + sum 1/sigma_l^2)^-1, the distortion of a centralized estimator.
  double min_distortion() const;
};

}  // namespace mtsc
