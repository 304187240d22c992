#include "mtsc/casebook.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtsc {

namespace {

// value <-> index maps for the erasure alphabets
int ternary_value(std::size_t index) { return static_cast<int>(index) - 1; }
std::size_t ternary_index(int value) { return static_cast<std::size_t>(value + 1); }
int binary_sign(std::size_t index) { return index == 0 ? -1 : 1; }

Channel constant_channel(std::vector<Variable> inputs, Variable output, std::size_t symbol) {
  std::vector<double> row(output.size, 0.0);
  row[symbol] = 1.0;
  const std::size_t n = alphabet_product(inputs);
  return Channel(std::move(inputs), std::move(output), std::vector(n, row));
}

Channel deterministic_channel(std::vector<Variable> inputs, Variable output, auto&& map) {
  const std::size_t n = alphabet_product(inputs);
  std::vector<std::vector<double>> rows(n, std::vector<double>(output.size, 0.0));
  for (std::size_t r = 0; r < n; ++r) rows[r][map(r)] = 1.0;
  return Channel(std::move(inputs), std::move(output), std::move(rows));
}

JointPmf trivial_wt() { return JointPmf({{"W", 1}, {"T", 1}}, {1.0}); }

// Decoder Z1 = sgn(sum U_l) over ternary encoder outputs, trivial side
// information and T.
Channel sign_decoder(std::size_t encoders) {
  std::vector<Variable> inputs;
  for (std::size_t l = 1; l <= encoders; ++l) inputs.push_back({encoder_name(l), 3});
  inputs.push_back({source_name(encoders + 1), 1});
  inputs.push_back({"T", 1});
  return deterministic_channel(std::move(inputs), {"Z", 3}, [encoders](std::size_t r) {
    int sum = 0;
    for (std::size_t l = 0; l < encoders; ++l) {
      sum += ternary_value(r % 3);
      r /= 3;
    }
    return ternary_index((sum > 0) - (sum < 0));
  });
}

XChannel x_equals_y0() {
  return {deterministic_channel({{"Y0", 2}}, {"X", 2}, [](std::size_t r) { return r; })};
}

XChannel x_constant() { return {constant_channel({}, {"X", 1}, 0)}; }

// Toy decoder Z1 = (U1, U2) with binary U's.
Channel pair_decoder() {
  return deterministic_channel({{"U1", 2}, {"U2", 2}, {"Y3", 1}, {"T", 1}}, {"Z", 4},
                               [](std::size_t r) { return r; });
}

}  // namespace

CaseName parse_case_name(std::string_view name) {
  if (name == "toy") return CaseName::kToy;
  if (name == "toy_bt_gamma" || name == "toy-bt-gamma") return CaseName::kToyBtGamma;
  if (name == "appendix_c" || name == "appendix-c") return CaseName::kCorrelatedErasure;
  if (name == "erasure") return CaseName::kErasure;
  throw std::invalid_argument("unknown casebook instance '" + std::string(name) + "'");
}

std::string to_string(CaseName name) {
  switch (name) {
    case CaseName::kToy: return "toy";
    case CaseName::kToyBtGamma: return "toy_bt_gamma";
    case CaseName::kCorrelatedErasure: return "appendix_c";
    case CaseName::kErasure: return "erasure";
  }
  return "?";
}

SourceModel toy_model() {
  JointPmf joint({{"Y0", 1}, {"Y1", 4}, {"Y2", 4}, {"Y3", 1}}, std::vector(16, 1.0 / 16.0));
  DistortionTable d{4, std::vector<double>(16 * 4)};
  for (std::size_t y1 = 0; y1 < 4; ++y1) {
    for (std::size_t y2 = 0; y2 < 4; ++y2) {
      for (std::size_t z = 0; z < 4; ++z) {
        const std::size_t a = z >> 1, b = z & 1;
        const bool first = a == (y1 >> 1) && b == (y2 >> 1);
        const bool second = a == (y1 & 1) && b == (y2 & 1);
        d.values[(y1 * 4 + y2) * 4 + z] = (first || second) ? 0.0 : 1.0;
      }
    }
  }
  return SourceModel(2, std::move(joint), {std::move(d)});
}

Instance toy_instance() {
  std::vector<Channel> enc;
  for (std::size_t l = 1; l <= 2; ++l) {
    enc.push_back(deterministic_channel({{source_name(l), 4}, {"W", 1}, {"T", 1}},
                                        {encoder_name(l), 2},
                                        [](std::size_t r) { return r >> 1; }));
  }
  return {"toy", toy_model(), AuxSystem{trivial_wt(), std::move(enc), pair_decoder()},
          x_constant()};
}

Instance toy_bt_instance() {
  std::vector<Channel> enc;
  for (std::size_t l = 1; l <= 2; ++l) {
    // row index = y * 2 + w
    enc.push_back(deterministic_channel(
        {{source_name(l), 4}, {"W", 2}, {"T", 1}}, {encoder_name(l), 2}, [](std::size_t r) {
          const std::size_t y = r / 2, w = r % 2;
          return w == 0 ? (y >> 1) : (y & 1);
        }));
  }
  JointPmf wt({{"W", 2}, {"T", 1}}, {0.5, 0.5});
  return {"toy_bt_gamma", toy_model(), AuxSystem{std::move(wt), std::move(enc), pair_decoder()},
          x_constant()};
}

SourceModel erasure_model(double p, std::size_t encoders, double lambda) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("erasure: p must lie in (0, 1)");
  if (encoders == 0) throw std::invalid_argument("erasure: need at least one encoder");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("erasure: lambda must be finite and > 0");
  }
  JointPmf joint({{"Y0", 2}}, {0.5, 0.5});
  for (std::size_t l = 1; l <= encoders; ++l) {
    // Y_l = N_l * Y0
    joint = extend(joint, Channel({{"Y0", 2}}, {source_name(l), 3},
                                  {{1.0 - p, p, 0.0}, {0.0, p, 1.0 - p}}));
  }
  joint = extend(joint, constant_channel({}, {source_name(encoders + 1), 1}, 0));

  DistortionTable d{3, std::vector<double>(joint.entry_count() * 3)};
  const std::size_t per_y0 = joint.entry_count() / 2;
  for (std::size_t i = 0; i < joint.entry_count(); ++i) {
    const int y0 = binary_sign(i / per_y0);
    for (std::size_t z = 0; z < 3; ++z) {
      const int zv = ternary_value(z);
      d.values[i * 3 + z] = zv == y0 ? 0.0 : (zv == 0 ? 1.0 : lambda);
    }
  }
  return SourceModel(encoders, std::move(joint), {std::move(d)});
}

Instance erasure_instance(const ErasureParams& params) {
  params.validate();
  const std::size_t L = params.encoders;
  const double p = params.p;
  double q = (std::pow(params.distortion, 1.0 / static_cast<double>(L)) - p) / (1.0 - p);
  q = std::clamp(q, 0.0, 1.0);

  std::vector<Channel> enc;
  for (std::size_t l = 1; l <= L; ++l) {
    // U_l = Y_l * Ntilde_l, Pr(Ntilde = 0) = q
    enc.emplace_back(std::vector<Variable>{{source_name(l), 3}, {"W", 1}, {"T", 1}},
                     Variable{encoder_name(l), 3},
                     std::vector<std::vector<double>>{
                         {1.0 - q, q, 0.0}, {0.0, 1.0, 0.0}, {0.0, q, 1.0 - q}});
  }
  return {"erasure", erasure_model(p, L, params.lambda),
          AuxSystem{trivial_wt(), std::move(enc), sign_decoder(L)}, x_equals_y0()};
}

Instance correlated_erasure_instance(double lambda) {
  std::vector<Channel> enc;
  for (std::size_t l = 1; l <= 2; ++l) {
    // row index = y * 4 + w, with w = 2*W1 + W2
    enc.push_back(deterministic_channel(
        {{source_name(l), 3}, {"W", 4}, {"T", 1}}, {encoder_name(l), 3},
        [l](std::size_t r) {
          const int y = ternary_value(r / 4);
          const std::size_t w = r % 4;
          const int wl = static_cast<int>(l == 1 ? (w >> 1) : (w & 1));
          return ternary_index(y * wl);
        }));
  }
  JointPmf wt({{"W", 4}, {"T", 1}}, {0.2, 0.4, 0.4, 0.0});
  return {"appendix_c", erasure_model(0.5, 2, lambda),
          AuxSystem{std::move(wt), std::move(enc), sign_decoder(2)}, x_equals_y0()};
}

Instance casebook(CaseName name, const ErasureParams& erasure) {
  switch (name) {
    case CaseName::kToy: return toy_instance();
    case CaseName::kToyBtGamma: return toy_bt_instance();
    case CaseName::kCorrelatedErasure: return correlated_erasure_instance(erasure.lambda);
    case CaseName::kErasure: return erasure_instance(erasure);
  }
  throw std::invalid_argument("unknown casebook instance");
}

}  // namespace mtsc
