#include "mtsc/erasure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "mtsc/casebook.hpp"
#include "mtsc/parallel.hpp"

namespace mtsc {

void ErasureParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("erasure: p must lie in (0, 1)");
  if (encoders == 0) throw std::invalid_argument("erasure: need at least one encoder");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("erasure: lambda must be finite and > 0");
  }
  // p^L is rounded; allow a few ulps below it
  if (!(distortion >= min_distortion() * (1.0 - 1e-12) && distortion <= 1.0)) {
    throw std::invalid_argument("erasure: D must lie in [p^L, 1] = [" +
                                std::to_string(min_distortion()) + ", 1]");
  }
}

double ErasureParams::min_distortion() const {
  return std::pow(p, static_cast<double>(encoders));
}

Nats g_function(double x, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("g: p must lie in (0, 1)");
  if (!(x >= p)) throw std::invalid_argument("g: argument below p");
  if (x >= 1.0) return 0.0;
  return binary_entropy(x) - (1.0 - p) * binary_entropy((x - p) / (1.0 - p));
}

double g_exp_slope(double x, double p) {
  const double ex = std::exp(x);
  // e^x - p computed as p (e^{x - ln p} - 1) to keep digits near ln p
  const double gap = std::max(p * std::expm1(x - std::log(p)), 1e-300);
  return ex * std::log(gap) - x * ex;
}

Nats erasure_sum_rate(const ErasureParams& params) {
  params.validate();
  const double L = static_cast<double>(params.encoders);
  const double x = std::max(std::pow(params.distortion, 1.0 / L), params.p);
  return (1.0 - params.distortion) * std::log(2.0) + L * g_function(x, params.p);
}

namespace {

using Point = std::array<double, 2>;

struct NoiseProgram {
  double p;
  double L;
  double D;
  double lo;  // ln p

  double g_exp(double x) const { return g_function(std::max(std::exp(x), p), p); }
  double objective(const Point& z) const { return 0.5 * (g_exp(z[0]) + g_exp(z[1])); }
  double constraint(const Point& z) const {
    return 0.5 * std::exp(L * z[0]) + 0.5 * std::exp(L * z[1]);
  }
  Point gradient(const Point& z) const {
    auto slope = [&](double x) { return x > 0.0 ? 0.0 : 0.5 * g_exp_slope(x, p); };
    return {slope(z[0]), slope(z[1])};
  }

  // argmin over [lo, 0] of (z - y)^2 + (mu/2) e^{Lz}
  double coordinate(double y, double mu) const {
    auto phi = [&](double z) { return 2.0 * (z - y) + mu * 0.5 * L * std::exp(L * z); };
    if (phi(lo) >= 0.0) return lo;
    if (phi(0.0) <= 0.0) return 0.0;
    // phi is convex and increasing, so Newton from the right descends monotonically
    double z = std::min(y, 0.0);
    for (int it = 0; it < 100; ++it) {
      const double e = mu * 0.5 * L * std::exp(L * z);
      const double step = (2.0 * (z - y) + e) / (2.0 + L * e);
      z -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    return std::clamp(z, lo, 0.0);
  }

  Point at_multiplier(const Point& y, double mu) const {
    return {coordinate(y[0], mu), coordinate(y[1], mu)};
  }

  // Euclidean projection onto box intersected with the constraint set.
  Point project(const Point& y) const {
    Point z{std::clamp(y[0], lo, 0.0), std::clamp(y[1], lo, 0.0)};
    if (constraint(z) <= D) return z;
    double mu_lo = 0.0, mu_hi = 1.0;
    for (int it = 0; it < 200 && constraint(at_multiplier(y, mu_hi)) > D; ++it) {
      mu_lo = mu_hi;
      mu_hi *= 2.0;
    }
    // Illinois false position on c(mu) - D, keeping mu_hi feasible
    double f_lo = constraint(at_multiplier(y, mu_lo)) - D;
    double f_hi = constraint(at_multiplier(y, mu_hi)) - D;
    int side = 0;
    for (int it = 0; it < 200 && mu_hi - mu_lo > 1e-15 * mu_hi && f_hi < 0.0; ++it) {
      const double mu = (mu_lo * f_hi - mu_hi * f_lo) / (f_hi - f_lo);
      if (!(mu > mu_lo && mu < mu_hi)) break;
      const double f = constraint(at_multiplier(y, mu)) - D;
      if (f > 0.0) {
        mu_lo = mu;
        f_lo = f;
        if (side == -1) f_hi *= 0.5;
        side = -1;
      } else {
        mu_hi = mu;
        f_hi = f;
        if (side == 1) f_lo *= 0.5;
        side = 1;
      }
    }
    return at_multiplier(y, mu_hi);
  }

  // Far-away targets need multipliers beyond the bracket in project().
  static constexpr double kMaxStep = 1e6;

  double descend(Point z) const {
    z = project(z);
    double f = objective(z);
    double step = 1.0;
    for (int it = 0; it < 2000; ++it) {
      const Point grad = gradient(z);
      bool moved = false;
      for (int tries = 0; tries < 60; ++tries) {
        const Point cand = project({z[0] - step * grad[0], z[1] - step * grad[1]});
        if (constraint(cand) > D * (1.0 + 1e-12)) {
          step *= 0.5;
          continue;
        }
        const double dir = grad[0] * (cand[0] - z[0]) + grad[1] * (cand[1] - z[1]);
        const double fc = objective(cand);
        if (fc <= f + 1e-4 * dir) {
          const double change = f - fc;
          const double dist = std::hypot(cand[0] - z[0], cand[1] - z[1]);
          z = cand;
          f = fc;
          moved = true;
          step = std::min(2.0 * step, kMaxStep);
          if (dist < 1e-13 || change < 1e-16) return f;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    return f;
  }
};

}  // namespace

Nats noise_info_minimum(const ErasureParams& params, std::uint64_t seed) {
  params.validate();
  const NoiseProgram program{params.p, static_cast<double>(params.encoders),
                             params.distortion, std::log(params.p)};
  constexpr std::size_t kRestarts = 64;
  std::vector<double> best(kRestarts);
  parallel_for(kRestarts, [&](std::size_t r) {
    std::mt19937_64 gen(seed + r);
    auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    const Point start{program.lo * uniform(), program.lo * uniform()};
    best[r] = program.descend(start);
  });
  return *std::min_element(best.begin(), best.end());
}

bool ShapeReport::pass() const {
  return max_first_difference <= 1e-12 && min_second_difference >= -1e-9 &&
         min_slope_slack >= -1e-10 && min_curvature_slack >= -1e-10;
}

namespace {

template <typename F>
void difference_scan(ShapeReport& report, const std::vector<double>& grid, F&& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  report.max_first_difference = -INFINITY;
  report.min_second_difference = INFINITY;
  for (std::size_t i = 1; i < v.size(); ++i) {
    report.max_first_difference = std::max(report.max_first_difference, v[i] - v[i - 1]);
    if (i + 1 < v.size()) {
      report.min_second_difference =
          std::min(report.min_second_difference, v[i + 1] - 2.0 * v[i] + v[i - 1]);
    }
  }
}

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  if (n < 3) throw std::invalid_argument("shape report: grid needs at least 3 points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  g.back() = b;
  return g;
}

}  // namespace

ShapeReport g_shape_report(double p, std::size_t grid_size) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("g: p must lie in (0, 1)");
  const double lo = std::log(p);
  const auto grid = uniform_grid(lo, 1.0, grid_size);
  ShapeReport report;
  difference_scan(report, grid, [p](double x) { return g_function(std::max(std::exp(x), p), p); });

  report.min_slope_slack = INFINITY;
  report.min_curvature_slack = INFINITY;
  for (double x : grid) {
    if (x <= lo || x > 0.0) continue;
    const double ex = std::exp(x);
    const double gap = p * std::expm1(x - lo);
    const double slope = ex * std::log(gap) - x * ex;
    report.min_slope_slack = std::min(report.min_slope_slack, -p - slope);
    report.min_curvature_slack =
        std::min(report.min_curvature_slack, slope - ex + ex * ex / gap);
  }
  return report;
}

ShapeReport g_root_shape_report(double p, std::size_t encoders, std::size_t grid_size) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("g: p must lie in (0, 1)");
  if (encoders == 0) throw std::invalid_argument("shape report: need at least one encoder");
  const double inv = 1.0 / static_cast<double>(encoders);
  const auto grid = uniform_grid(std::pow(p, static_cast<double>(encoders)), 2.0, grid_size);
  ShapeReport report;
  difference_scan(report, grid,
                  [&](double y) { return g_function(std::max(std::pow(y, inv), p), p); });
  return report;
}

ErasureCounterexample erasure_bt_counterexample(double lambda) {
  const Instance inst = correlated_erasure_instance(lambda);
  const JointPmf full = build_full_joint(inst.model, std::nullopt, inst.gamma);
  ErasureCounterexample out;
  out.joint_information = mutual_information(full, {"Y1", "Y2"}, {"U1", "U2"});
  out.conditional_information =
      conditional_mutual_information(full, {"Y1", "Y2"}, {"U1"}, {"U2"});
  const JointPmf yz = marginalize(full, {"Y0", "Z1"});
  // Y0 index 0/1 is -1/+1; Z1 index 0/1/2 is -1/0/+1
  out.erasure_probability = yz[1] + yz[4];
  out.error_probability = yz[2] + yz[3];
  return out;
}

std::vector<CurvePoint> erasure_curve(double p, const std::vector<std::size_t>& encoder_counts,
                                      std::size_t points) {
  if (points < 2) throw std::invalid_argument("curve: need at least 2 points");
  std::vector<CurvePoint> out;
  for (std::size_t L : encoder_counts) {
    ErasureParams params{p, L, 1.0, kDefaultLambda};
    const double d_min = params.min_distortion();
    for (std::size_t i = 0; i < points; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(points - 1);
      params.distortion = i + 1 == points ? 1.0 : d_min + (1.0 - d_min) * t;
      out.push_back({params.distortion, L, erasure_sum_rate(params)});
    }
  }
  return out;
}

}  // namespace mtsc
