#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mtsc/pmf.hpp"
#include "oracles.hpp"

using namespace mtsc;

namespace {

JointPmf random_joint(std::mt19937_64& rng, const std::vector<Variable>& vars) {
  return JointPmf(vars, oracle::random_row(rng, alphabet_product(vars)));
}

}  // namespace

TEST_CASE("row-major layout: last variable fastest") {
  const JointPmf p({{"A", 2}, {"B", 2}}, {0.1, 0.2, 0.3, 0.4});
  const auto a = marginalize(p, {"A"});
  CHECK(a[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(a[1] == doctest::Approx(0.7).epsilon(1e-15));
  const auto b = marginalize(p, {"B"});
  CHECK(b[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(b[1] == doctest::Approx(0.6).epsilon(1e-15));
  const auto ba = marginalize(p, {"B", "A"});
  CHECK(ba[1] == doctest::Approx(0.3).epsilon(1e-15));  // B=0, A=1
  CHECK(p.strides() == std::vector<std::size_t>{2, 1});
}

TEST_CASE("constructor rejects malformed pmfs") {
  CHECK_THROWS_AS(JointPmf({{"A", 2}}, {0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(JointPmf({{"A", 2}}, {1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(JointPmf({{"A", 2}, {"A", 1}}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(JointPmf({{"A", 0}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(JointPmf({{"A", 2}}, {1.0}), std::invalid_argument);
  CHECK_NOTHROW(JointPmf({{"A", 2}}, {0.5, 0.5 + 5e-10}));
}

TEST_CASE("channel rows must be distributions") {
  CHECK_THROWS_AS(Channel({{"A", 2}}, {"B", 2}, {{0.5, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(Channel({{"A", 1}}, {"B", 2}, {{0.7, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(Channel({{"A", 1}}, {"B", 2}, {{0.5}}), std::invalid_argument);
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
  CHECK(binary_entropy(0.1) == doctest::Approx(0.32508297339144826).epsilon(1e-14));
}

TEST_CASE("entropy and information agree with enumeration") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<Variable> vars{{"A", oracle::pick(rng, 1, 3)},
                                     {"B", oracle::pick(rng, 2, 4)},
                                     {"C", oracle::pick(rng, 1, 3)},
                                     {"D", oracle::pick(rng, 2, 3)}};
    const JointPmf p = random_joint(rng, vars);
    CHECK(entropy(p, {"A", "C"}) == doctest::Approx(oracle::entropy(p, {"A", "C"})).epsilon(1e-12));
    CHECK(entropy(p, {"B"}, {"D", "A"}) ==
          doctest::Approx(oracle::entropy(p, {"B", "D", "A"}) - oracle::entropy(p, {"D", "A"}))
              .epsilon(1e-12));
    const double lib = conditional_mutual_information(p, {"A", "D"}, {"B"}, {"C"});
    CHECK(lib == doctest::Approx(oracle::cmi(p, {"A", "D"}, {"B"}, {"C"})).epsilon(1e-10));
    CHECK(mutual_information(p, {"D"}, {"C"}) ==
          doctest::Approx(oracle::cmi(p, {"D"}, {"C"}, {})).epsilon(1e-10));
  }
}

TEST_CASE("chain rule and nonnegativity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const JointPmf p = random_joint(rng, {{"A", 3}, {"B", 2}, {"C", 3}, {"D", 2}});
    // I(A; B, C | D) = I(A; B | D) + I(A; C | B, D)
    const double whole = conditional_mutual_information(p, {"A"}, {"B", "C"}, {"D"});
    const double split = conditional_mutual_information(p, {"A"}, {"B"}, {"D"}) +
                         conditional_mutual_information(p, {"A"}, {"C"}, {"B", "D"});
    CHECK(std::abs(whole - split) <= 1e-12);
    CHECK(conditional_mutual_information(p, {"A"}, {"C"}, {"B", "D"}) >= 0.0);
    // H(A, B) = H(A) + H(B | A)
    CHECK(std::abs(entropy(p, {"A", "B"}) - entropy(p, {"A"}) - entropy(p, {"B"}, {"A"})) <=
          1e-12);
    // symmetry
    CHECK(std::abs(mutual_information(p, {"A"}, {"C"}) - mutual_information(p, {"C"}, {"A"})) <=
          1e-13);
  }
}

TEST_CASE("data processing through a channel") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    JointPmf p = random_joint(rng, {{"X", 3}, {"Y", 3}});
    p = extend(p, oracle::random_channel(rng, {{"Y", 3}}, {"Z", 2}));
    CHECK(mutual_information(p, {"X"}, {"Z"}) <= mutual_information(p, {"X"}, {"Y"}) + 1e-13);
    CHECK(conditional_mutual_information(p, {"X"}, {"Z"}, {"Y"}) <= 1e-13);
  }
}

TEST_CASE("extend and product build the expected tables") {
  const JointPmf a({{"A", 2}}, {0.25, 0.75});
  const JointPmf b({{"B", 2}}, {0.5, 0.5});
  const JointPmf ab = product(a, b);
  CHECK(ab[1] == doctest::Approx(0.125));
  CHECK(ab[2] == doctest::Approx(0.375));
  const JointPmf abc = extend(ab, Channel({{"A", 2}}, {"C", 2}, {{1.0, 0.0}, {0.2, 0.8}}));
  CHECK(abc.variables().back().name == "C");
  CHECK(abc[0] == doctest::Approx(0.125));  // a0 b0 c0
  CHECK(abc[7] == doctest::Approx(0.75 * 0.5 * 0.8));
  CHECK_THROWS_AS(product(a, a), std::invalid_argument);
}

TEST_CASE("relabeled splits a variable without moving entries") {
  const JointPmf p({{"AB", 4}}, {0.1, 0.2, 0.3, 0.4});
  const JointPmf q = p.relabeled({{"A", 2}, {"B", 2}});
  CHECK(marginalize(q, {"A"})[1] == doctest::Approx(0.7));
  CHECK_THROWS_AS(p.relabeled({{"A", 3}}), std::invalid_argument);
}

TEST_CASE("information measures reject overlapping or unknown sets") {
  const JointPmf p({{"A", 2}, {"B", 2}}, {0.25, 0.25, 0.25, 0.25});
  CHECK_THROWS_AS(mutual_information(p, {"A"}, {"A"}), std::invalid_argument);
  CHECK_THROWS_AS(mutual_information(p, {"A"}, {"Q"}), std::invalid_argument);
  CHECK_THROWS_AS(mutual_information(p, {}, {"B"}), std::invalid_argument);
}
