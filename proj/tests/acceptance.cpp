// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference values come from closed forms or from the brute-force
// oracles in oracles.hpp.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mtsc/casebook.hpp"
#include "mtsc/erasure.hpp"
#include "mtsc/gaussian.hpp"
#include "mtsc/optimizer.hpp"
#include "mtsc/regions.hpp"
#include "oracles.hpp"

using namespace mtsc;

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Collects failed conditions of one criterion.
class Criterion {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void near(double got, double want, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: got %.15g want %.15g (tol %g)", what.c_str(), got, want, tol);
    require(std::abs(got - want) <= tol, buf);
  }
  void note(const std::string& s) { notes_.push_back(s); }

  bool ok() const { return failed_ == 0; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }
  std::size_t failed() const { return failed_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  std::size_t failed_ = 0;
};

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void toy(Criterion& c) {
  const Instance inst = toy_bt_instance();
  const JointPmf full = build_full_joint(inst.model, std::nullopt, inst.gamma);
  const VarSet y{"Y1", "Y2"};
  c.near(mutual_information(full, y, {"U1", "U2"}), 1.25 * kLn2, 1e-12, "I(Y;U1,U2)");
  c.near(mutual_information(full, y, {"U1"}), 0.5 * kLn2, 1e-12, "I(Y;U1)");
  c.near(conditional_mutual_information(full, y, {"U1"}, {"U2"}), 0.75 * kLn2, 1e-12,
         "I(Y;U1|U2)");
  c.near(expected_distortion(inst.model, full, 0), 0.0, 1e-12, "E[d1]");
}

void correlated_erasure(Criterion& c) {
  const ErasureCounterexample ex = erasure_bt_counterexample();
  c.require(ex.joint_information > 0.6268 && ex.joint_information <= 0.6273,
            fmt("I(Y1,Y2;U1,U2) = %.10f outside (0.6268, 0.6273]", ex.joint_information));
  c.require(ex.conditional_information > 0.3243 && ex.conditional_information <= 0.3248,
            fmt("I(Y1,Y2;U1|U2) = %.10f outside (0.3243, 0.3248]", ex.conditional_information));
  c.near(ex.erasure_probability, 0.6, 1e-12, "Pr(Z1=0)");
  const double margin = erasure_sum_rate({0.5, 2, 0.6}) - 2.0 * ex.conditional_information;
  c.require(margin >= 0.006, fmt("sum rate margin %.6f < 0.006", margin));
  c.note(fmt("I_joint=%.9f", ex.joint_information) +
         fmt(" I_cond=%.9f", ex.conditional_information) + fmt(" margin=%.6f", margin));
}

// g(x) = -integral_x^1 ln((t - p) / t) dt by composite Simpson in long double.
long double g_by_quadrature(long double x, long double p) {
  constexpr int n = 1 << 20;
  const long double h = (1.0L - x) / n;
  auto f = [p](long double t) { return std::log((t - p) / t); };
  long double s = f(x) + f(1.0L);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(x + h * i);
  return -s * h / 3.0L;
}

void erasure_consistency(Criterion& c) {
  const double lib = erasure_sum_rate({0.5, 2, 0.6});
  const long double x = std::sqrt(0.6L);
  const double quad = static_cast<double>(0.4L * std::log(2.0L) + 2.0L * g_by_quadrature(x, 0.5L));
  c.near(lib, quad, 2e-4, "sum rate vs quadrature");
  c.near(quad, 0.656323, 2e-4, "quadrature vs 0.656323");
  c.require(lib >= 0.6562, fmt("sum rate %.9f below 0.6562", lib));
  c.note(fmt("sum rate=%.12f", lib) + fmt(" quadrature=%.12f", quad));
  for (std::size_t L : {1u, 2u, 3u, 10u}) {
    const std::string tag = " L=" + std::to_string(L);
    c.require(erasure_sum_rate({0.5, L, 1.0}) == 0.0, "D=1 not exactly 0" + tag);
    const double pl = std::pow(0.5, static_cast<double>(L));
    c.near(erasure_sum_rate({0.5, L, pl}),
           (1.0 - pl) * kLn2 + static_cast<double>(L) * static_cast<double>(oracle::binary_entropy(0.5L)),
           1e-12, "D=p^L" + tag);
    double prev = INFINITY;
    for (int i = 0; i < 1000; ++i) {
      const double d = pl + (1.0 - pl) * i / 999.0;
      const double r = erasure_sum_rate({0.5, L, std::min(d, 1.0)});
      c.require(r <= prev + 1e-12, "curve rises" + tag + fmt(" at D=%.6f", d));
      prev = r;
    }
  }
}

void converse_program(Criterion& c) {
  double worst = 0.0;
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (std::size_t L : {1u, 2u, 3u}) {
      const double lo = std::pow(p, static_cast<double>(L));
      for (int i = 0; i < 7; ++i) {
        const double d = i == 6 ? 1.0 : lo + (1.0 - lo) * i / 6.0;
        const long double x = std::pow(static_cast<long double>(d), 1.0L / L);
        const double want = static_cast<double>(oracle::erasure_g(std::max<long double>(x, p), p));
        const double got = noise_info_minimum({p, L, d});
        worst = std::max(worst, std::abs(got - want));
        c.near(got, want, 1e-6, fmt("p=%.1f", p) + " L=" + std::to_string(L) + fmt(" D=%.6f", d));
      }
    }
  }
  c.note(fmt("largest deviation %.3g over 105 points", worst));
}

void convexity(Criterion& c) {
  for (double p : {0.1, 0.5, 0.9}) {
    const ShapeReport r = g_shape_report(p, 10000);
    const std::string tag = fmt(" p=%.1f", p);
    c.require(r.max_first_difference <= 1e-12, fmt("first difference %.3g", r.max_first_difference) + tag);
    c.require(r.min_second_difference >= -1e-9, fmt("second difference %.3g", r.min_second_difference) + tag);
    c.require(r.min_slope_slack >= -1e-10, fmt("slope slack %.3g", r.min_slope_slack) + tag);
    c.require(r.min_curvature_slack >= -1e-10, fmt("curvature slack %.3g", r.min_curvature_slack) + tag);
  }
}

struct GaussianOracle {
  double joint, cond, mmse;
};

// sigma2 = 1, unit observation noises, unit V's, Var(W) = s:
// Cov(U) = [[3+s, 1-s], [1-s, 3+s]], Cov(U | Y) = [[1+s, -s], [-s, 1+s]].
GaussianOracle gaussian_oracle(double s) {
  const double det_u = (3 + s) * (3 + s) - (1 - s) * (1 - s);
  const double det_uy = (1 + s) * (1 + s) - s * s;
  const double joint = 0.5 * std::log(det_u / det_uy);
  const double single = 0.5 * std::log((3 + s) / (1 + s));
  // noise of U given Y0 is [[2+s, -s], [-s, 2+s]]; (1,1) is an eigenvector with eigenvalue 2
  const double mmse = 1.0 / (1.0 + 2.0 / 2.0);
  return {joint, joint - single, mmse};
}

void gaussian_ceo(Criterion& c) {
  const GaussianParams g{1.0, {1.0, 1.0}};
  c.near(gaussian_min_sum_rate(g, 0.5).sum_rate, 1.5 * kLn2, 1e-9, "min sum rate at D=0.5");
  const auto found = search_gaussian_bt_counterexample(g, 0.04);
  c.require(found.has_value(), "search found no sigma_W^2 within margin 0.04");
  if (!found) return;
  const GaussianOracle o = gaussian_oracle(found->sigma_w2);
  c.near(found->joint_information, o.joint, 1e-10, "I_joint vs closed form");
  c.near(found->conditional_information, o.cond, 1e-10, "I_cond vs closed form");
  const double rate = std::max(o.joint, 2 * o.cond);
  c.require(rate <= 1.5 * kLn2 - 0.04, fmt("max(I_joint, 2 I_cond) = %.9f", rate));
  c.near(found->distortion, 0.5, 1e-12, "MMSE");
  c.near(o.mmse, 0.5, 1e-12, "closed-form MMSE");
  c.note(fmt("sigma_W^2=%.6f", found->sigma_w2) + fmt(" max(I_joint,2I_cond)=%.9f", rate));
}

void oohama_fuzz(Criterion& c) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = INFINITY, worst_single = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t L = 1 + trial % 5;
    GaussianParams g{std::exp(u(rng)), {}};
    std::vector<double> q;
    for (std::size_t l = 0; l < L; ++l) {
      g.noise_vars.push_back(std::exp(u(rng)));
      q.push_back(std::exp(u(rng)));
    }
    for (SubsetMask a = 1; a < (1u << L); ++a) {
      const double gap = oohama_gap(g, q, a);
      worst = std::min(worst, gap);
      c.require(gap >= -1e-10, fmt("negative gap %.3g", gap));
      if (std::popcount(a) == 1) {
        worst_single = std::max(worst_single, std::abs(gap));
        c.require(std::abs(gap) <= 1e-9, fmt("single-encoder gap %.3g", gap));
      }
    }
  }
  c.note(fmt("smallest gap %.3g", worst) + fmt(", largest single-encoder |gap| %.3g", worst_single));
}

double max_difference(const RegionConstraints& a, const RegionConstraints& b) {
  double d = 0.0;
  for (SubsetMask m = 1; m <= a.full_mask(); ++m) d = std::max(d, std::abs(a.bound(m) - b.bound(m)));
  return d;
}

void structural(Criterion& c) {
  std::mt19937_64 rng(99);
  double worst_a = 0.0, worst_b = 0.0, worst_c = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto det = oracle::random_case(rng, true);
    const auto inner = bt_inner_constraints(det.model, det.gamma, Validation::kStrict);
    const auto fresh = new_outer_constraints(det.model, det.x_source, det.gamma, Validation::kStrict);
    worst_a = std::max(worst_a, max_difference(inner, fresh));

    const auto mixed = oracle::random_case(rng, false);
    const auto outer = bt_outer_constraints(mixed.model, mixed.gamma, Validation::kStrict);
    const auto with_y =
        new_outer_constraints(mixed.model, mixed.x_observations, mixed.gamma, Validation::kStrict);
    worst_b = std::max(worst_b, max_difference(outer, with_y));

    std::vector<std::size_t> order(det.model.encoders());
    std::iota(order.begin(), order.end(), 1);
    do {
      const RatePoint v = contrapolymatroid_vertex(inner, order);
      c.require(min_slack(inner, v.rates) >= -1e-10, "vertex violates a constraint");
      const double sum = std::accumulate(v.rates.begin(), v.rates.end(), 0.0);
      worst_c = std::max(worst_c, std::abs(sum - inner.full_bound()));
    } while (std::next_permutation(order.begin(), order.end()));
  }
  c.require(worst_a <= 1e-10, fmt("deterministic W: difference %.3g", worst_a));
  c.require(worst_b <= 1e-10, fmt("X = Y: difference %.3g", worst_b));
  c.require(worst_c <= 1e-10, fmt("vertex sum: difference %.3g", worst_c));
  c.note(fmt("max differences %.2g", worst_a) + fmt(" / %.2g", worst_b) + fmt(" / %.2g", worst_c));
}

void optimizer(Criterion& c) {
  const SourceModel erasure = erasure_model(0.5, 2);
  OptimizerOptions opt;
  opt.budget = 10000;
  const OptimizerResult a = optimize_bt_inner_sum_rate(erasure, {0.6}, opt);
  const OptimizerResult b = optimize_bt_inner_sum_rate(erasure, {0.6}, opt);
  const double closed = erasure_sum_rate({0.5, 2, 0.6});
  c.require(a.feasible, "erasure: no feasible system");
  c.require(a.best_sum_rate <= 0.6570, fmt("erasure: %.9f > 0.6570", a.best_sum_rate));
  c.require(a.best_sum_rate >= closed - 1e-9, fmt("erasure: %.9f below the closed form", a.best_sum_rate));
  c.require(a.best_sum_rate == b.best_sum_rate && a.best_restart == b.best_restart,
            "erasure: repeated run differs");
  if (a.gamma) {
    c.require(expected_distortion(erasure, *a.gamma, 0) <= 0.6 + 1e-9, "erasure: cap violated");
  }

  const OptimizerResult t = optimize_bt_inner_sum_rate(toy_model(), {0.0}, opt);
  c.require(t.feasible, "toy: no feasible system");
  c.require(t.best_sum_rate <= 2 * kLn2 + 1e-6, fmt("toy: %.12f > 2 ln 2 + 1e-6", t.best_sum_rate));
  c.note(fmt("erasure %.9f", a.best_sum_rate) + fmt(" (closed form %.9f)", closed) +
         fmt(", toy excess %.3g", t.best_sum_rate - 2 * kLn2));
}

struct Entry {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void(Criterion&)> body;
};

}  // namespace

int main() {
  const std::vector<Entry> entries{
      {1, "toy example", 1.0, toy},
      {2, "correlated erasure system", 1.0, correlated_erasure},
      {3, "erasure CEO sum rate", 5.0, erasure_consistency},
      {4, "noise information program", 30.0, converse_program},
      {5, "convexity of g", 5.0, convexity},
      {6, "Gaussian CEO", 1.0, gaussian_ceo},
      {7, "Oohama inequality fuzz", 5.0, oohama_fuzz},
      {8, "structural identities", 60.0, structural},
      {9, "optimizer sanity", 120.0, optimizer},
  };
  int failed = 0;
  for (const Entry& e : entries) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
      e.body(c);
    } catch (const std::exception& ex) {
      c.require(false, std::string("exception: ") + ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(secs < e.limit_seconds, fmt("took %.2f s", secs) + fmt(" (limit %.0f s)", e.limit_seconds));
    std::printf("%s [%d] %s (%.3f s)\n", c.ok() ? "PASS" : "FAIL", e.id, e.name, secs);
    for (const auto& n : c.notes()) std::printf("       %s\n", n.c_str());
    for (const auto& f : c.failures()) std::printf("       failed: %s\n", f.c_str());
    if (c.failed() > c.failures().size()) {
      std::printf("       ... %zu more\n", c.failed() - c.failures().size());
    }
    if (!c.ok()) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(entries.size()) - failed, entries.size());
  return failed == 0 ? 0 : 1;
}
