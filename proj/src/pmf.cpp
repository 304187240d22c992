#include "mtsc/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace mtsc {

namespace {

void check_distribution(std::span<const double> p, const std::string& what) {
  double total = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument(what + ": entries must be finite and >= 0");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw std::invalid_argument(what + ": entries sum to " +
                                std::to_string(total) + ", expected 1");
  }
}

void check_unique_names(std::span<const Variable> vars, const std::string& what) {
  std::unordered_set<std::string> seen;
  for (const auto& v : vars) {
    if (v.name.empty()) throw std::invalid_argument(what + ": empty variable name");
    if (v.size == 0) {
      throw std::invalid_argument(what + ": variable '" + v.name + "' has empty alphabet");
    }
    if (!seen.insert(v.name).second) {
      throw std::invalid_argument(what + ": duplicate variable '" + v.name + "'");
    }
  }
}

// For every entry of `joint`, its flat index in the marginal over the
// variables at `positions` (taken in that order).
std::vector<std::size_t> projection_index(const JointPmf& joint,
                                          const std::vector<std::size_t>& positions) {
  const auto& vars = joint.variables();
  std::vector<std::size_t> target_stride(vars.size(), 0);
  std::size_t s = 1;
  for (std::size_t k = positions.size(); k-- > 0;) {
    target_stride[positions[k]] = s;
    s *= vars[positions[k]].size;
  }

  std::vector<std::size_t> out(joint.entry_count());
  std::vector<std::size_t> digit(vars.size(), 0);
  std::size_t target = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = target;
    // odometer increment, last variable fastest
    for (std::size_t j = vars.size(); j-- > 0;) {
      if (++digit[j] < vars[j].size) {
        target += target_stride[j];
        break;
      }
      target -= target_stride[j] * (vars[j].size - 1);
      digit[j] = 0;
    }
  }
  return out;
}

std::vector<std::size_t> positions_of(const JointPmf& joint, const VarSet& names) {
  std::vector<std::size_t> pos;
  pos.reserve(names.size());
  for (const auto& n : names) pos.push_back(joint.position(n));
  return pos;
}

std::vector<double> marginal_array(const JointPmf& joint, const VarSet& keep) {
  const auto pos = positions_of(joint, keep);
  std::size_t n = 1;
  for (auto p : pos) n *= joint.variables()[p].size;
  std::vector<double> out(n, 0.0);
  const auto idx = projection_index(joint, pos);
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] += joint[i];
  return out;
}

std::size_t set_alphabet(const JointPmf& joint, const VarSet& s) {
  std::size_t n = 1;
  for (const auto& name : s) n *= joint.size_of(name);
  return n;
}

void check_disjoint(const JointPmf& joint, const std::vector<const VarSet*>& sets) {
  std::unordered_set<std::string> seen;
  for (const auto* s : sets) {
    for (const auto& name : *s) {
      if (!joint.contains(name)) {
        throw std::invalid_argument("unknown variable '" + name + "'");
      }
      if (!seen.insert(name).second) {
        throw std::invalid_argument("variable '" + name +
                                    "' appears in more than one argument set");
      }
    }
  }
}

}  // namespace

std::size_t alphabet_product(std::span<const Variable> vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= v.size;
  return n;
}

JointPmf::JointPmf(std::vector<Variable> variables, std::vector<double> probs)
    : variables_(std::move(variables)), probs_(std::move(probs)) {
  if (variables_.empty()) throw std::invalid_argument("JointPmf: no variables");
  check_unique_names(variables_, "JointPmf");
  if (probs_.size() != alphabet_product(variables_)) {
    throw std::invalid_argument("JointPmf: expected " +
                                std::to_string(alphabet_product(variables_)) +
                                " entries, got " + std::to_string(probs_.size()));
  }
  check_distribution(probs_, "JointPmf");
}

bool JointPmf::contains(std::string_view name) const {
  return std::any_of(variables_.begin(), variables_.end(),
                     [&](const Variable& v) { return v.name == name; });
}

std::size_t JointPmf::position(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
}

std::size_t JointPmf::size_of(std::string_view name) const {
  return variables_[position(name)].size;
}

std::vector<std::size_t> JointPmf::strides() const {
  std::vector<std::size_t> s(variables_.size());
  std::size_t acc = 1;
  for (std::size_t j = variables_.size(); j-- > 0;) {
    s[j] = acc;
    acc *= variables_[j].size;
  }
  return s;
}

JointPmf JointPmf::relabeled(std::vector<Variable> variables) const {
  if (alphabet_product(variables) != probs_.size()) {
    throw std::invalid_argument("relabeled: alphabet product mismatch");
  }
  return JointPmf(std::move(variables), probs_);
}

Channel::Channel(std::vector<Variable> inputs, Variable output,
                 std::vector<std::vector<double>> rows)
    : inputs_(std::move(inputs)), output_(std::move(output)), rows_(std::move(rows)) {
  std::vector<Variable> all = inputs_;
  all.push_back(output_);
  check_unique_names(all, "Channel");
  if (rows_.size() != alphabet_product(inputs_)) {
    throw std::invalid_argument("Channel '" + output_.name + "': expected " +
                                std::to_string(alphabet_product(inputs_)) + " rows, got " +
                                std::to_string(rows_.size()));
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != output_.size) {
      throw std::invalid_argument("Channel '" + output_.name + "': row " +
                                  std::to_string(r) + " has wrong length");
    }
    check_distribution(rows_[r], "Channel '" + output_.name + "' row " + std::to_string(r));
  }
}

JointPmf extend(const JointPmf& joint, const Channel& channel) {
  if (joint.contains(channel.output().name)) {
    throw std::invalid_argument("extend: variable '" + channel.output().name +
                                "' already present");
  }
  VarSet input_names;
  for (const auto& in : channel.inputs()) {
    if (joint.size_of(in.name) != in.size) {
      throw std::invalid_argument("extend: alphabet size of '" + in.name +
                                  "' differs between joint and channel");
    }
    input_names.push_back(in.name);
  }
  const auto row_of = projection_index(joint, positions_of(joint, input_names));
  const std::size_t m = channel.output().size;

  std::vector<double> probs(joint.entry_count() * m);
  for (std::size_t i = 0; i < joint.entry_count(); ++i) {
    const auto& row = channel.rows()[row_of[i]];
    for (std::size_t o = 0; o < m; ++o) probs[i * m + o] = joint[i] * row[o];
  }
  auto vars = joint.variables();
  vars.push_back(channel.output());
  return JointPmf(std::move(vars), std::move(probs));
}

JointPmf marginalize(const JointPmf& joint, const VarSet& keep) {
  if (keep.empty()) throw std::invalid_argument("marginalize: empty variable set");
  check_disjoint(joint, {&keep});
  std::vector<Variable> vars;
  for (const auto& n : keep) vars.push_back(joint.variables()[joint.position(n)]);
  return JointPmf(std::move(vars), marginal_array(joint, keep));
}

JointPmf product(const JointPmf& first, const JointPmf& second) {
  auto vars = first.variables();
  vars.insert(vars.end(), second.variables().begin(), second.variables().end());
  std::vector<double> probs;
  probs.reserve(first.entry_count() * second.entry_count());
  for (double a : first.probs()) {
    for (double b : second.probs()) probs.push_back(a * b);
  }
  return JointPmf(std::move(vars), std::move(probs));
}

Nats entropy(const JointPmf& joint, const VarSet& a, const VarSet& c) {
  if (a.empty()) throw std::invalid_argument("entropy: empty variable set");
  check_disjoint(joint, {&a, &c});
  const auto p_ac = marginal_array(joint, join(a, c));
  const std::size_t nc = set_alphabet(joint, c);
  std::vector<double> p_c(nc, 0.0);
  for (std::size_t i = 0; i < p_ac.size(); ++i) p_c[i % nc] += p_ac[i];

  Nats h = 0.0;
  for (std::size_t i = 0; i < p_ac.size(); ++i) {
    const double p = p_ac[i];
    if (p > 0.0) h -= p * std::log(p / p_c[i % nc]);
  }
  return h;
}

Nats conditional_mutual_information(const JointPmf& joint, const VarSet& a,
                                    const VarSet& b, const VarSet& c) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("conditional_mutual_information: empty argument set");
  }
  check_disjoint(joint, {&a, &b, &c});
  const std::size_t nb = set_alphabet(joint, b);
  const std::size_t nc = set_alphabet(joint, c);
  const auto p_abc = marginal_array(joint, join(join(a, b), c));
  const std::size_t na = p_abc.size() / (nb * nc);

  std::vector<double> p_ac(na * nc, 0.0), p_bc(nb * nc, 0.0), p_c(nc, 0.0);
  for (std::size_t ia = 0; ia < na; ++ia) {
    for (std::size_t ib = 0; ib < nb; ++ib) {
      for (std::size_t ic = 0; ic < nc; ++ic) {
        const double p = p_abc[(ia * nb + ib) * nc + ic];
        p_ac[ia * nc + ic] += p;
        p_bc[ib * nc + ic] += p;
        p_c[ic] += p;
      }
    }
  }

  Nats info = 0.0;
  for (std::size_t ia = 0; ia < na; ++ia) {
    for (std::size_t ib = 0; ib < nb; ++ib) {
      for (std::size_t ic = 0; ic < nc; ++ic) {
        const double p = p_abc[(ia * nb + ib) * nc + ic];
        if (p <= 0.0) continue;
        info += p * std::log((p * p_c[ic]) / (p_ac[ia * nc + ic] * p_bc[ib * nc + ic]));
      }
    }
  }
  return info;
}

Nats binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
  }
  Nats h = 0.0;
  if (x > 0.0) h -= x * std::log(x);
  if (x < 1.0) h -= (1.0 - x) * std::log1p(-x);
  return h;
}

VarSet join(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace mtsc
