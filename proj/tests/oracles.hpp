#pragma once

// Brute-force reference computations and random instance generators shared
// by the unit tests and the acceptance binary. Nothing here calls the
// library's marginalization or information routines.

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mtsc/model.hpp"
#include "mtsc/pmf.hpp"

namespace oracle {

using mtsc::JointPmf;
using mtsc::VarSet;

/// Unpacks every flat index into its tuple and sums probabilities per
/// sub-tuple.
inline std::map<std::vector<std::size_t>, double> marginal(const JointPmf& joint,
                                                           const VarSet& keep) {
  const auto& vars = joint.variables();
  std::vector<std::size_t> pos;
  for (const auto& name : keep) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].name == name) pos.push_back(i);
    }
  }
  std::map<std::vector<std::size_t>, double> out;
  std::vector<std::size_t> tuple(vars.size());
  for (std::size_t flat = 0; flat < joint.entry_count(); ++flat) {
    std::size_t rest = flat;
    for (std::size_t i = vars.size(); i-- > 0;) {
      tuple[i] = rest % vars[i].size;
      rest /= vars[i].size;
    }
    std::vector<std::size_t> key;
    for (std::size_t p : pos) key.push_back(tuple[p]);
    out[key] += joint[flat];
  }
  return out;
}

inline double entropy(const JointPmf& joint, const VarSet& vars) {
  if (vars.empty()) return 0.0;
  long double h = 0.0L;
  for (const auto& [k, p] : marginal(joint, vars)) {
    if (p > 0.0) h -= static_cast<long double>(p) * std::log(static_cast<long double>(p));
  }
  return static_cast<double>(h);
}

inline VarSet cat(VarSet a, const VarSet& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// H(A,C) + H(B,C) - H(A,B,C) - H(C).
inline double cmi(const JointPmf& joint, const VarSet& a, const VarSet& b, const VarSet& c) {
  return oracle::entropy(joint, cat(a, c)) + oracle::entropy(joint, cat(b, c)) -
         oracle::entropy(joint, cat(cat(a, b), c)) - oracle::entropy(joint, c);
}

inline long double binary_entropy(long double x) {
  if (x <= 0.0L || x >= 1.0L) return 0.0L;
  return -x * std::log(x) - (1.0L - x) * std::log1p(-x);
}

/// Per-encoder noise information of the erasure test channel that keeps a
/// fraction x of symbols overall: h(x) - (1-p) h((x-p)/(1-p)).
inline long double erasure_g(long double x, long double p) {
  if (x >= 1.0L) return 0.0L;
  return binary_entropy(x) - (1.0L - p) * binary_entropy((x - p) / (1.0L - p));
}

inline long double erasure_sum_rate(long double p, std::size_t L, long double d) {
  const long double x = std::pow(d, 1.0L / static_cast<long double>(L));
  return (1.0L - d) * std::log(2.0L) + static_cast<long double>(L) * erasure_g(x, p);
}

inline std::vector<double> random_row(std::mt19937_64& rng, std::size_t n, bool sparse = true) {
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution drop(sparse ? 0.2 : 0.0);
  std::vector<double> row(n);
  double total = 0.0;
  for (auto& v : row) {
    v = drop(rng) ? 0.0 : e(rng);
    total += v;
  }
  if (total == 0.0) {
    row[0] = 1.0;
    return row;
  }
  for (auto& v : row) v /= total;
  return row;
}

inline mtsc::Channel random_channel(std::mt19937_64& rng, std::vector<mtsc::Variable> inputs,
                                    mtsc::Variable output) {
  std::vector<std::vector<double>> rows(mtsc::alphabet_product(inputs));
  for (auto& r : rows) r = random_row(rng, output.size);
  return mtsc::Channel(std::move(inputs), std::move(output), std::move(rows));
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

struct RandomCase {
  mtsc::SourceModel model;
  mtsc::AuxSystem gamma;
  mtsc::XChannel x_source;        // X = Y0
  mtsc::XChannel x_observations;  // X = (Y1..YL)
};

/// Observations conditionally independent given Y0, side information drawn
/// from Y0, one random distortion measure. When `deterministic_w`, W is a
/// function of T.
inline RandomCase random_case(std::mt19937_64& rng, bool deterministic_w, std::size_t max_encoders = 3) {
  using mtsc::Variable;
  const std::size_t L = pick(rng, 2, max_encoders);
  const std::size_t y0 = pick(rng, 2, 3);
  JointPmf joint({{"Y0", y0}}, random_row(rng, y0, false));
  std::vector<Variable> obs;
  for (std::size_t l = 1; l <= L; ++l) {
    Variable y{mtsc::source_name(l), pick(rng, 2, 3)};
    obs.push_back(y);
    joint = mtsc::extend(joint, random_channel(rng, {{"Y0", y0}}, y));
  }
  const Variable side{mtsc::source_name(L + 1), pick(rng, 1, 2)};
  joint = mtsc::extend(joint, random_channel(rng, {{"Y0", y0}}, side));

  const std::size_t z = 2;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  mtsc::DistortionTable table{z, std::vector<double>(joint.entry_count() * z)};
  for (auto& v : table.values) v = unit(rng);
  mtsc::SourceModel model(L, std::move(joint), {std::move(table)});

  const std::size_t ws = pick(rng, 1, 2), ts = pick(rng, 1, 2);
  std::vector<double> wt(ws * ts, 0.0);
  if (deterministic_w) {
    const auto pt = random_row(rng, ts, false);
    for (std::size_t t = 0; t < ts; ++t) wt[pick(rng, 0, ws - 1) * ts + t] = pt[t];
  } else {
    wt = random_row(rng, ws * ts, false);
  }
  std::vector<mtsc::Channel> enc;
  std::vector<Variable> dec_inputs;
  for (std::size_t l = 1; l <= L; ++l) {
    Variable u{mtsc::encoder_name(l), pick(rng, 2, 3)};
    enc.push_back(random_channel(rng, {obs[l - 1], {"W", ws}, {"T", ts}}, u));
    dec_inputs.push_back(u);
  }
  dec_inputs.push_back(side);
  dec_inputs.push_back({"T", ts});
  mtsc::AuxSystem gamma{JointPmf({{"W", ws}, {"T", ts}}, wt), std::move(enc),
                        random_channel(rng, dec_inputs, {"Z", z})};

  auto identity = [](std::vector<Variable> inputs) {
    const std::size_t n = mtsc::alphabet_product(inputs);
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
    return mtsc::XChannel{mtsc::Channel(std::move(inputs), {"X", n}, std::move(rows))};
  };
  return {std::move(model), std::move(gamma), identity({{"Y0", y0}}), identity(obs)};
}

}  // namespace oracle
