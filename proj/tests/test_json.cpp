#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "mtsc/casebook.hpp"
#include "mtsc/json_io.hpp"
#include "oracles.hpp"

using namespace mtsc;

namespace {

bool same_bits(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool same_channel(const Channel& a, const Channel& b) {
  if (a.inputs() != b.inputs() || !(a.output() == b.output()) || a.row_count() != b.row_count()) {
    return false;
  }
  for (std::size_t r = 0; r < a.row_count(); ++r) {
    if (!same_bits(a.rows()[r], b.rows()[r])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("models and systems round-trip bit for bit through text") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rc = oracle::random_case(rng, trial % 2 == 0);
    const SourceModel m = source_model_from_json(parse_json(to_json(rc.model).dump()));
    CHECK(same_bits(m.joint().probs(), rc.model.joint().probs()));
    CHECK(m.joint().variables() == rc.model.joint().variables());
    CHECK(same_bits(m.distortion(0).values, rc.model.distortion(0).values));

    const AuxSystem g = aux_system_from_json(parse_json(to_json(rc.gamma).dump(2)));
    CHECK(same_bits(g.wt.probs(), rc.gamma.wt.probs()));
    for (std::size_t l = 0; l < g.encoders.size(); ++l) {
      CHECK(same_channel(g.encoders[l], rc.gamma.encoders[l]));
    }
    CHECK(same_channel(g.decoder, rc.gamma.decoder));
    const XChannel x = x_channel_from_json(parse_json(to_json(rc.x_source.kernel).dump()));
    CHECK(same_channel(x.kernel, rc.x_source.kernel));
  }
}

TEST_CASE("casebook instances round-trip") {
  const Instance inst = correlated_erasure_instance();
  const Json j = to_json(inst.model);
  CHECK(j.at("encoders") == 2);
  CHECK(j.at("joint").at("variables").at(0).at("name") == "Y0");
  const SourceModel back = source_model_from_json(j);
  CHECK(same_bits(back.joint().probs(), inst.model.joint().probs()));
}

TEST_CASE("syntax errors carry line and column") {
  const std::string text = "{\"encoders\": 2,\n \"joint\": [1,, 2]}";
  try {
    parse_json(text, "model.json");
    FAIL("expected a parse error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).rfind("model.json:2:14: ", 0) == 0);
  }
  try {
    parse_json("[1, 2", "f");
    FAIL("expected a parse error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).rfind("f:1:", 0) == 0);
  }
}

TEST_CASE("schema errors name the offending part") {
  CHECK_THROWS_AS(joint_pmf_from_json(parse_json(R"({"variables": [], "probs": "x"})")), FormatError);
  CHECK_THROWS_AS(joint_pmf_from_json(parse_json(R"({"variables": [{"name": "A", "size": 2}],
                                                     "probs": [0.5, 0.6]})")),
                  FormatError);
  CHECK_THROWS_AS(source_model_from_json(parse_json(R"({"joint": {}})")), FormatError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/model.json"), std::runtime_error);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.65628389737, 9) == "0.656283897");
  CHECK(format_number(1e-20, 9) == "1e-20");
  CHECK(format_number(0.0, 9) == "0");
  CHECK(format_number(2.0, 9) == "2");
  const NumberStyle bits{true, 9};
  CHECK(bits.format_rate(std::log(2.0)) == "1");
  CHECK(bits.rate(3 * std::log(2.0)) == 3.0);
  const NumberStyle nats{};
  CHECK(nats.rate(0.65628389737) == 0.656283897);
  CHECK(Json(nats.rate(0.65628389737)).dump() == "0.656283897");
}

TEST_CASE("region and curve emitters") {
  RegionConstraints c(2, {0.5});
  c.subset_bounds = {0.0, 0.25, 0.5, 1.0};
  const std::string csv = to_csv(c, {});
  CHECK(csv == "subset,bound\n0b01,0.25\n0b10,0.5\n0b11,1\n");
  const Json j = to_json(c, {});
  CHECK(j.at("constraints").size() == 3);
  CHECK(j.at("constraints").at(2).at("A") == "0b11");
  CHECK(j.at("constraints").at(2).at("bound_nats") == 1.0);
  CHECK(to_json(c, {true, 9}).at("constraints").at(0).contains("bound_bits"));

  const std::vector<CurvePoint> curve{{0.25, 2, 1.5}, {1.0, 2, 0.0}};
  CHECK(to_csv(curve, {}) == "D,L,sum_rate_nats\n0.25,2,1.5\n1,2,0\n");
}
