#pragma once

// Concrete instances: the two-bit toy problem, the binary erasure CEO
// problem with its erasure test channels, and the correlated-erasure system
// on which the Berger-Tung outer bound is loose.

#include <optional>
#include <string>
#include <string_view>

#include "mtsc/model.hpp"
#include "mtsc/params.hpp"

namespace mtsc {

struct Instance {
  std::string name;
  SourceModel model;
  AuxSystem gamma;
  std::optional<XChannel> x;
};

enum class CaseName { kToy, kToyBtGamma, kCorrelatedErasure, kErasure };

/// Parses "toy", "toy_bt_gamma", "appendix_c" / "appendix-c", "erasure".
CaseName parse_case_name(std::string_view name);
std::string to_string(CaseName name);

/// Four i.i.d. uniform bits, Y1 = (Y11, Y12) and Y2 = (Y21, Y22) encoded as
/// 2*first + second. Z1 = (a, b) encoded 2a + b has distortion 0 when it
/// equals (Y11, Y21) or (Y12, Y22), else 1.
SourceModel toy_model();

/// Toy problem with each encoder sending the first coordinate; X constant.
Instance toy_instance();

/// Toy problem with W uniform on {0, 1} selecting which coordinate both
/// encoders send (U_l = Y_l,W+1), Z1 = (U1, U2); X constant.
Instance toy_bt_instance();

/// Erasure source with distortion 0 / 1 / lambda for correct / erased /
/// wrong. Alphabets: Y0 in {-1, 1} as indices {0, 1}; Y_l, U_l, Z1 in
/// {-1, 0, 1} as indices {0, 1, 2}.
SourceModel erasure_model(double p, std::size_t encoders, double lambda = kDefaultLambda);

/// Erasure test channels U_l = Y_l * Ntilde_l with
/// Pr(Ntilde = 0) = (D^{1/L} - p) / (1 - p) and Z1 = sgn(sum U_l); X = Y0.
Instance erasure_instance(const ErasureParams& params);

/// p = 1/2, L = 2 erasure source with (W1, W2) jointly distributed as
/// [[1/5, 2/5], [2/5, 0]], U_l = Y_l * W_l, Z1 = sgn(U1 + U2); W carries
/// the pair as 2*W1 + W2; X = Y0.
Instance correlated_erasure_instance(double lambda = kDefaultLambda);

Instance casebook(CaseName name, const ErasureParams& erasure = {});

}  // namespace mtsc
