#pragma once

// Source models, auxiliary systems and the Markov checks that define the
// auxiliary classes of the outer bound (Gamma_o) and of the Berger-Tung inner
// and outer bounds.
//
// Naming convention inside every joint built here:
//   Y0            hidden source
//   Y1..YL        encoder observations
//   Y{L+1}        decoder side information
//   X             optional conditioning variable (Markov-coupled)
//   W, T          auxiliary mixing and time-sharing variables
//   U1..UL        encoder outputs
//   Z1..ZK        reproductions

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtsc/pmf.hpp"

namespace mtsc {

/// Tolerance under which a Markov residual counts as zero.
inline constexpr double kMarkovTolerance = 1e-9;

std::string source_name(std::size_t index);  // "Y<index>"
std::string encoder_name(std::size_t index);  // "U<index>", 1-based
std::string reproduction_name(std::size_t index);  // "Z<index>", 1-based

struct DistortionTable {
  std::size_t z_size = 0;
  /// Row-major over (Y0, Y1..YL, Y{L+1}, Z_k).
  std::vector<double> values;

  double max_value() const;
};

class SourceModel {
 public:
  /// `joint` must list exactly Y0, Y1, ..., Y{L+1} in that order.
  SourceModel(std::size_t encoders, JointPmf joint, std::vector<DistortionTable> distortions);

  std::size_t encoders() const { return encoders_; }
  std::size_t distortion_count() const { return distortions_.size(); }
  const JointPmf& joint() const { return joint_; }
  const std::vector<DistortionTable>& distortions() const { return distortions_; }
  const DistortionTable& distortion(std::size_t k) const;

  std::size_t source_entry_count() const { return joint_.entry_count(); }
  std::size_t observation_size(std::size_t ell) const;  // |Y_ell|, 1-based
  VarSet sources() const;            // Y0..Y{L+1}
  VarSet observations() const;       // Y1..YL
  VarSet observations(unsigned mask) const;  // Y_l for l in mask (bit l-1)
  std::string side_information() const;      // Y{L+1}
  std::vector<Variable> reproductions() const;  // Z1..ZK

 private:
  std::size_t encoders_;
  JointPmf joint_;
  std::vector<DistortionTable> distortions_;
};

/// gamma = (U, Z, W, T), given by p(w,t), the encoder kernels
/// p(u_l | y_l, w, t) and the decoder kernel p(z | u, y{L+1}, t). The
/// decoder's output variable is the row-major tuple (Z1..ZK) under the
/// name "Z"; build_full_joint splits it.
struct AuxSystem {
  JointPmf wt;                   // over (W, T)
  std::vector<Channel> encoders;  // (Y_l, W, T) -> U_l
  Channel decoder;                // (U1..UL, Y{L+1}, T) -> Z

  std::size_t w_size() const { return wt.size_of("W"); }
  std::size_t t_size() const { return wt.size_of("T"); }
};

/// X given by a kernel from any subset of the source variables.
struct XChannel {
  Channel kernel;
};

struct MarkovResidual {
  std::string condition;
  double residual = 0.0;  // nats, clamped at 0
  bool pass = true;
};

struct MarkovReport {
  std::vector<MarkovResidual> residuals;
  double tolerance = kMarkovTolerance;

  bool pass() const;
  double max_residual() const;
  std::string describe() const;
};

enum class GammaClass { kOuter, kBergerTungInner, kBergerTungOuter };

/// Thrown when a system fails the Markov conditions an evaluator requires.
class MarkovError : public std::runtime_error {
 public:
  MarkovError(const std::string& what, MarkovReport report)
      : std::runtime_error(what + ": " + report.describe()), report_(std::move(report)) {}
  const MarkovReport& report() const { return report_; }

 private:
  MarkovReport report_;
};

/// Joint over the sources, X (when given), W, T, U1..UL and Z1..ZK with the
/// Gamma_o factorization and X attached through the sources only.
JointPmf build_full_joint(const SourceModel& model, const std::optional<XChannel>& x,
                          const AuxSystem& gamma);

/// Residual conditional mutual informations of each Markov condition of the
/// requested class; a Markov-coupling residual is added when x is given.
MarkovReport check_gamma_class(const SourceModel& model, const std::optional<XChannel>& x,
                               const AuxSystem& gamma, GammaClass cls);
MarkovReport check_gamma_class(const SourceModel& model, const std::optional<XChannel>& x,
                               const JointPmf& full_joint, GammaClass cls);

/// Conditional independence of Y1..YL given (X, Y{L+1}):
/// sum over l >= 2 of I(Y_l; Y_1..Y_{l-1} | X, Y{L+1}).
MarkovReport check_chi(const SourceModel& model, const XChannel& x);

/// E[d_k(Y0, Y, Y{L+1}, Z_k)], k zero-based.
double expected_distortion(const SourceModel& model, const AuxSystem& gamma, std::size_t k);
double expected_distortion(const SourceModel& model, const JointPmf& full_joint, std::size_t k);

/// The same system with T replaced by (W, T) and W made deterministic.
AuxSystem fold_w_into_t(const AuxSystem& gamma);

/// Throws std::invalid_argument when kernel alphabets disagree with the model.
void validate_aux_system(const SourceModel& model, const AuxSystem& gamma);
void validate_x_channel(const SourceModel& model, const XChannel& x);

}  // namespace mtsc
