#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "mtsc/casebook.hpp"
#include "mtsc/erasure.hpp"
#include "mtsc/optimizer.hpp"
#include "mtsc/parallel.hpp"

using namespace mtsc;

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 3) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  CHECK(worker_threads() >= 1);
}

TEST_CASE("default cardinalities") {
  const auto card = default_cardinalities(erasure_model(0.5, 2));
  CHECK(card == std::vector<std::size_t>{3 + 4 + 1 - 1, 3 + 4 + 1 - 1});
  CHECK(default_cardinalities(toy_model()) == std::vector<std::size_t>{8, 8});
}

TEST_CASE("optimizer result is a feasible system scored by the inner bound") {
  const SourceModel model = erasure_model(0.5, 2);
  OptimizerOptions opt;
  opt.budget = 3000;
  opt.cardinalities = {3, 3};
  const OptimizerResult r = optimize_bt_inner_sum_rate(model, {0.6}, opt);
  REQUIRE(r.feasible);
  REQUIRE(r.gamma.has_value());
  REQUIRE(r.constraints.has_value());
  CHECK(r.evaluations <= opt.budget);
  CHECK(r.constraints->full_bound() == doctest::Approx(r.best_sum_rate).epsilon(1e-12));
  CHECK(expected_distortion(model, *r.gamma, 0) <= 0.6 + 1e-9);
  CHECK(check_gamma_class(model, std::nullopt, *r.gamma, GammaClass::kBergerTungInner).pass());
  // an upper estimate of the optimum
  CHECK(r.best_sum_rate >= erasure_sum_rate({0.5, 2, 0.6}) - 1e-9);
}

TEST_CASE("optimizer is deterministic in its seed") {
  const SourceModel model = erasure_model(0.5, 2);
  OptimizerOptions opt;
  opt.budget = 2000;
  opt.seed = 5;
  const OptimizerResult a = optimize_bt_inner_sum_rate(model, {0.6}, opt);
  const OptimizerResult b = optimize_bt_inner_sum_rate(model, {0.6}, opt);
  CHECK(a.best_sum_rate == b.best_sum_rate);
  CHECK(a.best_restart == b.best_restart);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("toy problem: zero distortion needs two bits") {
  OptimizerOptions opt;
  opt.budget = 10000;
  const OptimizerResult r = optimize_bt_inner_sum_rate(toy_model(), {0.0}, opt);
  REQUIRE(r.feasible);
  CHECK(r.best_sum_rate <= 2 * std::numbers::ln2 + 1e-6);
  CHECK(r.best_sum_rate >= 2 * std::numbers::ln2 - 1e-9);
}

TEST_CASE("optimizer argument checks") {
  const SourceModel model = erasure_model(0.5, 2);
  CHECK_THROWS_AS(optimize_bt_inner_sum_rate(model, {}, {}), std::invalid_argument);
  OptimizerOptions opt;
  opt.cardinalities = {3};
  CHECK_THROWS_AS(optimize_bt_inner_sum_rate(model, {0.6}, opt), std::invalid_argument);
  opt.cardinalities = {};
  opt.budget = 200;
  const OptimizerResult r = optimize_bt_inner_sum_rate(model, {-1.0}, opt);
  CHECK_FALSE(r.feasible);
  CHECK_FALSE(r.gamma.has_value());
}
