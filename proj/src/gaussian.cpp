#include "mtsc/gaussian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace mtsc {

void GaussianParams::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("gaussian: sigma2 must be finite and > 0");
  }
  if (noise_vars.empty() || noise_vars.size() > kMaxEncoders) {
    throw std::invalid_argument("gaussian: need between 1 and 16 noise variances");
  }
  for (double v : noise_vars) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("gaussian: noise variances must be finite and > 0");
    }
  }
}

double GaussianParams::min_distortion() const {
  double precision = 1.0 / sigma2;
  for (double v : noise_vars) precision += 1.0 / v;
  return 1.0 / precision;
}

namespace {

double log_plus(double x) { return std::max(std::log(x), 0.0); }

void check_witness(const GaussianParams& params, const std::vector<double>& r) {
  if (r.size() != params.encoders()) {
    throw std::invalid_argument("gaussian: witness length differs from encoder count");
  }
  for (double v : r) {
    if (!(v >= 0.0)) throw std::invalid_argument("gaussian: witness entries must be >= 0");
  }
}

double log_det(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw std::runtime_error("covariance not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

struct ChannelInformation {
  double hidden;              // I(Y0; U_A)
  std::vector<double> noise;  // I(Y_l; U_l | Y0) for l in A
};

ChannelInformation scalar_channel_information(const GaussianParams& params,
                                              const std::vector<double>& q, SubsetMask a) {
  std::vector<std::size_t> members;
  for (std::size_t l = 1; l <= params.encoders(); ++l) {
    if ((a >> (l - 1)) & 1u) members.push_back(l - 1);
  }
  const auto n = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(n, n, params.sigma2);
  Eigen::MatrixXd given = Eigen::MatrixXd::Zero(n, n);
  ChannelInformation info;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t l = members[static_cast<std::size_t>(i)];
    const double v = params.noise_vars[l] + q[l];
    cov(i, i) += v;
    given(i, i) = v;
    info.noise.push_back(0.5 * std::log(v / q[l]));
  }
  info.hidden = 0.5 * (log_det(cov) - log_det(given));
  return info;
}

void check_test_noise(const GaussianParams& params, const std::vector<double>& q, SubsetMask a) {
  if (q.size() != params.encoders()) {
    throw std::invalid_argument("oohama gap: need one test-noise variance per encoder");
  }
  for (double v : q) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("oohama gap: test-noise variances must be finite and > 0");
    }
  }
  if (a == 0 || a >= (SubsetMask{1} << params.encoders())) {
    throw std::invalid_argument("oohama gap: subset must be a nonempty subset of the encoders");
  }
}

}  // namespace

std::vector<double> gaussian_subset_bounds(const GaussianParams& params, double distortion,
                                           const std::vector<double>& r) {
  params.validate();
  check_witness(params, r);
  if (!(distortion > 0.0)) throw std::invalid_argument("gaussian: D must be > 0");
  const std::size_t L = params.encoders();
  std::vector<double> bounds(std::size_t{1} << L);
  for (SubsetMask a = 0; a < bounds.size(); ++a) {
    double precision = 1.0 / params.sigma2;
    double rates = 0.0;
    for (std::size_t l = 1; l <= L; ++l) {
      if ((a >> (l - 1)) & 1u) {
        rates += r[l - 1];
      } else {
        precision += -std::expm1(-2.0 * r[l - 1]) / params.noise_vars[l - 1];
      }
    }
    bounds[a] = 0.5 * log_plus(1.0 / (distortion * precision)) + rates;
  }
  return bounds;
}

bool gaussian_region_contains(const GaussianParams& params, const RatePoint& point,
                              const std::vector<double>& r) {
  if (point.distortions.size() != 1) {
    throw std::invalid_argument("gaussian: rate point needs exactly one distortion");
  }
  if (point.rates.size() != params.encoders()) {
    throw std::invalid_argument("gaussian: rate vector length differs from encoder count");
  }
  const auto bounds = gaussian_subset_bounds(params, point.distortions[0], r);
  for (SubsetMask a = 0; a < bounds.size(); ++a) {
    double sum = 0.0;
    for (std::size_t l = 1; l <= params.encoders(); ++l) {
      if ((a >> (l - 1)) & 1u) sum += point.rates[l - 1];
    }
    if (sum - bounds[a] < -1e-12) return false;
  }
  return true;
}

GaussianSumRate gaussian_min_sum_rate(const GaussianParams& params, double distortion) {
  params.validate();
  const std::size_t L = params.encoders();
  if (!(distortion > params.min_distortion())) {
    throw std::invalid_argument("gaussian: D must exceed the centralized MMSE " +
                                std::to_string(params.min_distortion()));
  }
  GaussianSumRate out{0.0, std::vector<double>(L, 0.0)};
  if (distortion >= params.sigma2) return out;

  // Reverse water-filling over noise precisions a_l = 1/sigma_l^2:
  // sum_l max(0, a_l - nu) = 1/D - 1/sigma2.
  const double need = 1.0 / distortion - 1.0 / params.sigma2;
  const bool symmetric = std::all_of(params.noise_vars.begin(), params.noise_vars.end(),
                                     [&](double v) { return v == params.noise_vars[0]; });
  if (symmetric) {
    const double r = -0.5 * std::log1p(-need * params.noise_vars[0] / static_cast<double>(L));
    std::fill(out.r.begin(), out.r.end(), r);
  } else {
    std::vector<double> a;
    for (double v : params.noise_vars) a.push_back(1.0 / v);
    std::vector<double> sorted = a;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double nu = 0.0, prefix = 0.0;
    for (std::size_t k = 1; k <= L; ++k) {
      prefix += sorted[k - 1];
      const double candidate = (prefix - need) / static_cast<double>(k);
      if (candidate < sorted[k - 1]) nu = candidate;
    }
    for (std::size_t l = 0; l < L; ++l) {
      out.r[l] = a[l] > nu ? 0.5 * std::log(a[l] / nu) : 0.0;
    }
  }
  out.sum_rate = 0.5 * std::log(params.sigma2 / distortion);
  for (double r : out.r) out.sum_rate += r;
  return out;
}

double oohama_gap(const GaussianParams& params, const std::vector<double>& q, SubsetMask a) {
  return oohama_gap(params, std::vector<TestChannelMix>{{1.0, q}}, a);
}

double oohama_gap(const GaussianParams& params, const std::vector<TestChannelMix>& mix,
                  SubsetMask a) {
  params.validate();
  if (mix.empty()) throw std::invalid_argument("oohama gap: empty time-sharing mixture");
  double total = 0.0;
  for (const auto& m : mix) {
    if (!(m.weight >= 0.0)) throw std::invalid_argument("oohama gap: negative weight");
    total += m.weight;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw std::invalid_argument("oohama gap: weights must sum to 1");
  }

  double hidden = 0.0;
  std::vector<double> noise(params.encoders(), 0.0);
  for (const auto& m : mix) {
    check_test_noise(params, m.q, a);
    const auto info = scalar_channel_information(params, m.q, a);
    hidden += m.weight * info.hidden;
    std::size_t i = 0;
    for (std::size_t l = 1; l <= params.encoders(); ++l) {
      if ((a >> (l - 1)) & 1u) noise[l - 1] += m.weight * info.noise[i++];
    }
  }
  double rhs = 1.0;
  for (std::size_t l = 1; l <= params.encoders(); ++l) {
    if ((a >> (l - 1)) & 1u) {
      rhs += -std::expm1(-2.0 * noise[l - 1]) * params.sigma2 / params.noise_vars[l - 1];
    }
  }
  return rhs - std::exp(2.0 * hidden);
}

Nats GaussianCounterexample::sum_rate() const {
  return std::max(joint_information, 2.0 * conditional_information);
}

GaussianCounterexample gaussian_bt_counterexample(const GaussianParams& params,
                                                  double sigma_w2) {
  params.validate();
  if (params.encoders() != 2) throw std::invalid_argument("counterexample: needs L = 2");
  if (!(sigma_w2 >= 0.0) || !std::isfinite(sigma_w2)) {
    throw std::invalid_argument("counterexample: sigma_w2 must be finite and >= 0");
  }
  const double s = params.sigma2, n1 = params.noise_vars[0], n2 = params.noise_vars[1];
  const double w = sigma_w2;

  // Covariances of (U1, U2) and of their test noise (V1 + W, V2 - W).
  Eigen::Matrix2d noise;
  noise << 1.0 + w, -w, -w, 1.0 + w;
  Eigen::Matrix2d obs;
  obs << s + n1, s, s, s + n2;
  const Eigen::Matrix2d u = obs + noise;
  const Eigen::Vector2d cross(s, s);  // Cov(Y0, U)

  GaussianCounterexample out;
  out.sigma_w2 = w;
  out.joint_information = 0.5 * (log_det(u) - log_det(noise));
  const double u2_information = 0.5 * std::log(u(1, 1) / noise(1, 1));
  out.conditional_information = out.joint_information - u2_information;
  out.distortion = s - cross.dot(u.ldlt().solve(cross));
  return out;
}

std::optional<GaussianCounterexample> search_gaussian_bt_counterexample(
    const GaussianParams& params, double margin) {
  auto at = [&](double log_w) { return gaussian_bt_counterexample(params, std::exp(log_w)); };
  // bracket on a coarse log grid, then golden section
  double best_x = -12.0;
  double best_f = at(best_x).sum_rate();
  for (double x = -12.0; x <= 8.0; x += 0.25) {
    const double f = at(x).sum_rate();
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = best_x - 0.25, hi = best_x + 0.25;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = at(x1).sum_rate(), f2 = at(x2).sum_rate();
  for (int it = 0; it < 80; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = at(x1).sum_rate();
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = at(x2).sum_rate();
    }
  }
  const GaussianCounterexample found = at(f1 <= f2 ? x1 : x2);
  const double target = gaussian_min_sum_rate(params, found.distortion).sum_rate;
  if (found.sum_rate() > target - margin) return std::nullopt;
  return found;
}

}  // namespace mtsc
