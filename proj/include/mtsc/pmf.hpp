#pragma once

// Dense probability mass functions over named finite variables, stochastic
// kernels between them, and exact information measures. All measures are in
// nats.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mtsc {

using Nats = double;

/// Tolerance on row sums and total mass of every pmf handed to the library.
inline constexpr double kNormalizationTolerance = 1e-9;

struct Variable {
  std::string name;
  std::size_t size = 0;

  friend bool operator==(const Variable&, const Variable&) = default;
};

using VarSet = std::vector<std::string>;

/// Product of the alphabet sizes of `vars`.
std::size_t alphabet_product(std::span<const Variable> vars);

/// Joint pmf over an ordered list of variables. Entries are stored row-major
/// in variable order: the last variable varies fastest. For variables (A, B)
/// of sizes (2, 2) the array is [p(0,0), p(0,1), p(1,0), p(1,1)].
///
/// The constructor rejects negative entries, duplicate names, zero-size
/// alphabets, and totals further than 1e-9 from one. No renormalization is
/// ever performed.
class JointPmf {
 public:
  JointPmf(std::vector<Variable> variables, std::vector<double> probs);

  const std::vector<Variable>& variables() const { return variables_; }
  std::span<const double> probs() const { return probs_; }
  std::size_t entry_count() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  bool contains(std::string_view name) const;
  /// Position of `name` in variables(); throws std::invalid_argument.
  std::size_t position(std::string_view name) const;
  std::size_t size_of(std::string_view name) const;
  /// Row-major stride of every variable.
  std::vector<std::size_t> strides() const;

  /// Same probabilities under different variable metadata. The new list
  /// must have the same alphabet product; used to split or merge adjacent
  /// variables, which leaves the flat array unchanged.
  JointPmf relabeled(std::vector<Variable> variables) const;

 private:
  std::vector<Variable> variables_;
  std::vector<double> probs_;
};

/// Conditional pmf p(output | inputs). One row per input tuple, row-major in
/// input order, each row a distribution over the output alphabet.
class Channel {
 public:
  Channel(std::vector<Variable> inputs, Variable output,
          std::vector<std::vector<double>> rows);

  const std::vector<Variable>& inputs() const { return inputs_; }
  const Variable& output() const { return output_; }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  double at(std::size_t row, std::size_t out) const { return rows_[row][out]; }

 private:
  std::vector<Variable> inputs_;
  Variable output_;
  std::vector<std::vector<double>> rows_;
};

/// Appends the channel output as the last variable of a new joint:
/// p(v, o) = p(v) * channel(o | v_inputs).
JointPmf extend(const JointPmf& joint, const Channel& channel);

/// Sums out every variable not in `keep`. The result lists variables in the
/// order given by `keep`.
JointPmf marginalize(const JointPmf& joint, const VarSet& keep);

/// Joint of two independent pmfs over disjoint variable sets.
JointPmf product(const JointPmf& first, const JointPmf& second);

/// H(A | C); C may be empty.
Nats entropy(const JointPmf& joint, const VarSet& a, const VarSet& c = {});

/// I(A; B | C) by exact summation. A and B must be nonempty, all three
/// pairwise disjoint. C may be empty.
Nats conditional_mutual_information(const JointPmf& joint, const VarSet& a,
                                    const VarSet& b, const VarSet& c);

inline Nats mutual_information(const JointPmf& joint, const VarSet& a,
                               const VarSet& b) {
  return conditional_mutual_information(joint, a, b, {});
}

/// -x ln x - (1-x) ln(1-x) with 0 ln 0 = 0.
Nats binary_entropy(double x);

/// Concatenation helper for building variable sets.
VarSet join(const VarSet& a, const VarSet& b);

}  // namespace mtsc
