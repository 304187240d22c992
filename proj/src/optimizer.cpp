#include "mtsc/optimizer.hpp"

#include <algorithm>
#include <array>
#include <utility>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "mtsc/parallel.hpp"

namespace mtsc {

namespace {

constexpr double kLogitBound = 30.0;
constexpr double kFeasibilitySlack = 1e-9;
constexpr int kGoldenSteps = 7;
constexpr double kInitialWidth = kLogitBound;
constexpr double kMinWidth = 1e-4;
constexpr double kDualGain = 1.0;
// (zero entries below, merge rows within L1 distance)
constexpr std::array<std::pair<double, double>, 4> kSnapThresholds{
    {{1e-9, 0.0}, {1e-7, 1e-4}, {1e-5, 1e-3}, {1e-3, 1e-2}}};

using Kernel = std::vector<std::vector<double>>;  // [y][u]

struct Evaluation {
  double rate = 0.0;
  std::vector<double> distortions;
  double lagrangian = 0.0;
};

// Flattened view of the source model for repeated evaluation.
class Problem {
 public:
  Problem(const SourceModel& model, std::vector<double> caps, std::vector<std::size_t> cards)
      : model_(model), caps_(std::move(caps)), cards_(std::move(cards)) {
    const std::size_t L = model.encoders();
    const JointPmf& joint = model.joint();
    const auto strides = joint.strides();
    side_size_ = model.observation_size(L + 1);
    tuples_ = 1;
    for (std::size_t c : cards_) tuples_ *= c;

    y_marginal_.resize(L);
    for (std::size_t l = 1; l <= L; ++l) y_marginal_[l - 1].assign(model.observation_size(l), 0.0);
    for (std::size_t s = 0; s < joint.entry_count(); ++s) {
      if (joint[s] == 0.0) continue;
      Entry e{s, joint[s], {}, (s / strides[L + 1]) % side_size_};
      for (std::size_t l = 1; l <= L; ++l) {
        e.obs.push_back((s / strides[l]) % model.observation_size(l));
        y_marginal_[l - 1][e.obs.back()] += joint[s];
      }
      entries_.push_back(std::move(e));
    }
    digits_.assign(tuples_, std::vector<std::size_t>(L));
    for (std::size_t t = 0; t < tuples_; ++t) {
      std::size_t rest = t;
      for (std::size_t l = L; l >= 1; --l) {
        digits_[t][l - 1] = rest % cards_[l - 1];
        rest /= cards_[l - 1];
      }
    }
  }

  std::size_t encoders() const { return model_.encoders(); }
  std::size_t observation_size(std::size_t l) const { return model_.observation_size(l); }
  std::size_t cardinality(std::size_t l) const { return cards_[l - 1]; }
  const std::vector<double>& caps() const { return caps_; }
  const std::vector<double>& observation_marginal(std::size_t l) const { return y_marginal_[l]; }

  bool feasible(const Evaluation& e) const {
    for (std::size_t k = 0; k < caps_.size(); ++k) {
      if (!(e.distortions[k] <= caps_[k] + kFeasibilitySlack)) return false;
    }
    return true;
  }

  // I(Y; U | Y{L+1}) and the Bayes-optimal distortions. When `decoder` is
  // given it receives the chosen reproduction tuple of every decoder row.
  Evaluation evaluate(const std::vector<Kernel>& kernels, const std::vector<double>& weights,
                      std::vector<std::size_t>* decoder = nullptr) const {
    const std::size_t L = encoders();
    const std::size_t K = model_.distortion_count();
    const std::size_t rows = tuples_ * side_size_;
    std::vector<double> mass(rows, 0.0);
    std::vector<std::vector<double>> cost(K);
    for (std::size_t k = 0; k < K; ++k) {
      cost[k].assign(rows * model_.distortion(k).z_size, 0.0);
    }

    std::vector<const std::vector<double>*> row(L);
    for (const Entry& e : entries_) {
      for (std::size_t l = 0; l < L; ++l) row[l] = &kernels[l][e.obs[l]];
      for (std::size_t t = 0; t < tuples_; ++t) {
        double pr = e.prob;
        for (std::size_t l = 0; l < L && pr > 0.0; ++l) pr *= (*row[l])[digits_[t][l]];
        if (pr == 0.0) continue;
        const std::size_t r = t * side_size_ + e.side;
        mass[r] += pr;
        for (std::size_t k = 0; k < K; ++k) {
          const auto& table = model_.distortion(k);
          const std::size_t zs = table.z_size;
          for (std::size_t z = 0; z < zs; ++z) {
            cost[k][r * zs + z] += pr * table.values[e.index * zs + z];
          }
        }
      }
    }

    Evaluation out;
    std::vector<double> side_mass(side_size_, 0.0);
    for (std::size_t r = 0; r < rows; ++r) side_mass[r % side_size_] += mass[r];
    for (std::size_t r = 0; r < rows; ++r) {
      if (mass[r] > 0.0) out.rate -= mass[r] * std::log(mass[r] / side_mass[r % side_size_]);
    }
    for (std::size_t l = 0; l < L; ++l) {
      for (std::size_t y = 0; y < kernels[l].size(); ++y) {
        double h = 0.0;
        for (double v : kernels[l][y]) {
          if (v > 0.0) h -= v * std::log(v);
        }
        out.rate -= y_marginal_[l][y] * h;
      }
    }
    out.rate = std::max(out.rate, 0.0);

    if (decoder) decoder->assign(rows, 0);
    out.distortions.assign(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t zs = model_.distortion(k).z_size;
      for (std::size_t r = 0; r < rows; ++r) {
        const auto first = cost[k].begin() + static_cast<std::ptrdiff_t>(r * zs);
        const auto best = std::min_element(first, first + static_cast<std::ptrdiff_t>(zs));
        out.distortions[k] += *best;
        if (decoder) {
          (*decoder)[r] = (*decoder)[r] * zs + static_cast<std::size_t>(best - first);
        }
      }
    }
    out.lagrangian = out.rate;
    for (std::size_t k = 0; k < K; ++k) out.lagrangian += weights[k] * out.distortions[k];
    return out;
  }

  AuxSystem to_aux_system(const std::vector<Kernel>& kernels) const {
    const std::size_t L = encoders();
    std::vector<std::size_t> decoder;
    evaluate(kernels, std::vector<double>(model_.distortion_count(), 0.0), &decoder);

    std::vector<Channel> enc;
    for (std::size_t l = 1; l <= L; ++l) {
      enc.emplace_back(std::vector<Variable>{{source_name(l), observation_size(l)},
                                             {"W", 1},
                                             {"T", 1}},
                       Variable{encoder_name(l), cards_[l - 1]}, kernels[l - 1]);
    }
    std::vector<Variable> inputs;
    for (std::size_t l = 1; l <= L; ++l) inputs.push_back({encoder_name(l), cards_[l - 1]});
    inputs.push_back({model_.side_information(), side_size_});
    inputs.push_back({"T", 1});
    const std::size_t z_size = alphabet_product(model_.reproductions());
    std::vector<std::vector<double>> rows(decoder.size(), std::vector<double>(z_size, 0.0));
    for (std::size_t r = 0; r < decoder.size(); ++r) rows[r][decoder[r]] = 1.0;
    return AuxSystem{JointPmf({{"W", 1}, {"T", 1}}, {1.0}), std::move(enc),
                     Channel(std::move(inputs), {"Z", z_size}, std::move(rows))};
  }

 private:
  struct Entry {
    std::size_t index;
    double prob;
    std::vector<std::size_t> obs;
    std::size_t side;
  };

  const SourceModel& model_;
  std::vector<double> caps_;
  std::vector<std::size_t> cards_;
  std::size_t side_size_ = 1;
  std::size_t tuples_ = 1;
  std::vector<Entry> entries_;
  std::vector<std::vector<double>> y_marginal_;
  std::vector<std::vector<std::size_t>> digits_;
};

void softmax(const std::vector<double>& logits, std::vector<double>& out) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    total += out[i];
  }
  for (double& v : out) v /= total;
}

struct RestartResult {
  bool feasible = false;
  double rate = std::numeric_limits<double>::infinity();
  std::vector<Kernel> kernels;
  std::size_t evaluations = 0;
};

class Search {
 public:
  Search(const Problem& problem, std::size_t budget, std::uint64_t seed)
      : problem_(problem),
        budget_(budget),
        search_budget_(budget - std::min(budget, kSnapThresholds.size())),
        gen_(seed) {}

  // Starts from a noisy deterministic encoder map: the identity (modulo
  // the output size) when `identity_start`, otherwise a random map.
  RestartResult run(bool identity_start) {
    const std::size_t L = problem_.encoders();
    logits_.resize(L);
    kernels_.resize(L);
    for (std::size_t l = 1; l <= L; ++l) {
      logits_[l - 1].assign(problem_.observation_size(l),
                            std::vector<double>(problem_.cardinality(l)));
      kernels_[l - 1] = logits_[l - 1];
      widths_.push_back(logits_[l - 1]);
      for (auto& row : widths_.back()) std::fill(row.begin(), row.end(), kInitialWidth);
      for (std::size_t y = 0; y < logits_[l - 1].size(); ++y) {
        auto& row = logits_[l - 1][y];
        for (double& v : row) v = -0.5 * kLogitBound + 0.2 * kLogitBound * uniform();
        const std::size_t target =
            identity_start ? y % row.size()
                           : std::min(row.size() - 1,
                                      static_cast<std::size_t>(uniform() *
                                                               static_cast<double>(row.size())));
        row[target] = 0.5 * kLogitBound;
        softmax(logits_[l - 1][y], kernels_[l - 1][y]);
      }
    }
    weights_.assign(problem_.caps().size(), 1.0);
    current_ = evaluate();

    while (result_.evaluations < search_budget_) {
      for (std::size_t l = 0; l < L && result_.evaluations < search_budget_; ++l) {
        for (std::size_t y = 0; y < logits_[l].size() && result_.evaluations < search_budget_; ++y) {
          for (std::size_t u = 0; u < logits_[l][y].size() && result_.evaluations < search_budget_;
               ++u) {
            line_search(l, y, u);
          }
        }
      }
      update_weights();
      if (result_.evaluations < search_budget_) current_ = evaluate();
    }
    snap();
    return result_;
  }

 private:
  // Cleans up the best feasible system: entries below a threshold become
  // zero and rows within an L1 distance of an earlier row are replaced by
  // their mass-weighted average. Bounded logits otherwise leave leaks of
  // order e^{-2B} and rows that agree only approximately.
  void snap() {
    if (!result_.feasible) return;
    const std::vector<Kernel> base = result_.kernels;
    for (const auto& [zero_below, merge_within] : kSnapThresholds) {
      if (result_.evaluations >= budget_) break;
      kernels_ = base;
      for (std::size_t l = 0; l < kernels_.size(); ++l) {
        Kernel& kernel = kernels_[l];
        for (auto& row : kernel) {
          double total = 0.0;
          for (double& v : row) {
            if (v < zero_below) v = 0.0;
            total += v;
          }
          for (double& v : row) v /= total;
        }
        merge_rows(kernel, problem_.observation_marginal(l), merge_within);
      }
      evaluate();
    }
  }

  static void merge_rows(Kernel& kernel, const std::vector<double>& mass, double within) {
    std::vector<std::size_t> cluster(kernel.size());
    for (std::size_t y = 0; y < kernel.size(); ++y) {
      cluster[y] = y;
      for (std::size_t c = 0; c < y; ++c) {
        if (cluster[c] != c) continue;
        double dist = 0.0;
        for (std::size_t u = 0; u < kernel[y].size(); ++u) dist += std::abs(kernel[y][u] - kernel[c][u]);
        if (dist < within) {
          cluster[y] = c;
          break;
        }
      }
    }
    for (std::size_t c = 0; c < kernel.size(); ++c) {
      if (cluster[c] != c) continue;
      std::vector<double> avg(kernel[c].size(), 0.0);
      double total = 0.0;
      for (std::size_t y = 0; y < kernel.size(); ++y) {
        if (cluster[y] != c) continue;
        total += mass[y];
        for (std::size_t u = 0; u < avg.size(); ++u) avg[u] += mass[y] * kernel[y][u];
      }
      if (total <= 0.0) continue;
      for (double& v : avg) v /= total;
      for (std::size_t y = 0; y < kernel.size(); ++y) {
        if (cluster[y] == c) kernel[y] = avg;
      }
    }
  }

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  Evaluation evaluate() {
    Evaluation e = problem_.evaluate(kernels_, weights_);
    ++result_.evaluations;
    if (problem_.feasible(e) && e.rate < result_.rate) {
      result_.feasible = true;
      result_.rate = e.rate;
      result_.kernels = kernels_;
    }
    return e;
  }

  Evaluation evaluate_at(std::size_t l, std::size_t y, std::size_t u, double value) {
    logits_[l][y][u] = value;
    softmax(logits_[l][y], kernels_[l][y]);
    return evaluate();
  }

  // Golden-section search over one logit within a per-coordinate window
  // around the incumbent, which is kept on ties. The window doubles after a
  // long move and halves otherwise.
  void line_search(std::size_t l, std::size_t y, std::size_t u) {
    const double incumbent = logits_[l][y][u];
    double& width = widths_[l][y][u];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::max(-kLogitBound, incumbent - width);
    double hi = std::min(kLogitBound, incumbent + width);
    double best_x = incumbent;
    Evaluation best = current_;
    auto probe = [&](double x) {
      Evaluation e = evaluate_at(l, y, u, x);
      if (e.lagrangian < best.lagrangian) {
        best = e;
        best_x = x;
      }
      return e.lagrangian;
    };
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = probe(x1), f2 = probe(x2);
    for (int it = 2; it < kGoldenSteps && result_.evaluations < search_budget_; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = probe(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = probe(x2);
      }
    }
    logits_[l][y][u] = best_x;
    softmax(logits_[l][y], kernels_[l][y]);
    current_ = best;
    width = std::abs(best_x - incumbent) > 0.5 * width ? std::min(2.0 * width, 2.0 * kLogitBound)
                                                        : std::max(0.5 * width, kMinWidth);
  }

  // Multiplicative dual step proportional to the relative constraint
  // violation, so weights settle once the distortion sits at its cap.
  void update_weights() {
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      const double cap = problem_.caps()[k];
      const double scale = std::max(cap, 1e-3);
      // the upper clamp lets a zero cap grow its weight quickly
      const double excess = std::clamp((current_.distortions[k] - cap) / scale, -1.0, 10.0);
      weights_[k] *= std::exp(kDualGain * excess);
    }
  }

  const Problem& problem_;
  std::size_t budget_;
  std::size_t search_budget_;
  std::mt19937_64 gen_;
  std::vector<std::vector<std::vector<double>>> logits_;
  std::vector<Kernel> kernels_;
  std::vector<std::vector<std::vector<double>>> widths_;
  std::vector<double> weights_;
  Evaluation current_;
  RestartResult result_;
};

}  // namespace

std::vector<std::size_t> default_cardinalities(const SourceModel& model) {
  const std::size_t L = model.encoders();
  if (L >= 8 * sizeof(std::size_t) - 1) throw std::invalid_argument("too many encoders");
  std::vector<std::size_t> cards;
  for (std::size_t l = 1; l <= L; ++l) {
    cards.push_back(model.observation_size(l) + (std::size_t{1} << L) +
                    model.distortion_count() - 1);
  }
  return cards;
}

OptimizerResult optimize_bt_inner_sum_rate(const SourceModel& model,
                                           const std::vector<double>& caps,
                                           const OptimizerOptions& options) {
  if (caps.size() != model.distortion_count()) {
    throw std::invalid_argument("optimizer: need one distortion cap per reproduction");
  }
  auto cards = options.cardinalities.empty() ? default_cardinalities(model)
                                             : options.cardinalities;
  if (cards.size() != model.encoders()) {
    throw std::invalid_argument("optimizer: need one cardinality per encoder");
  }
  for (std::size_t c : cards) {
    if (c == 0) throw std::invalid_argument("optimizer: cardinalities must be >= 1");
  }
  if (options.budget == 0 || options.restarts == 0) {
    throw std::invalid_argument("optimizer: budget and restarts must be > 0");
  }

  const Problem problem(model, caps, std::move(cards));
  const std::size_t restarts = std::min(options.restarts, options.budget);
  std::vector<RestartResult> results(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    const std::size_t share =
        options.budget / restarts + (r < options.budget % restarts ? 1 : 0);
    const std::uint64_t seed = options.seed ^ (0x9E3779B97F4A7C15ull * (r + 1));
    results[r] = Search(problem, share, seed).run(r == 0);
  });

  OptimizerResult out;
  for (std::size_t r = 0; r < restarts; ++r) {
    out.evaluations += results[r].evaluations;
    if (!results[r].feasible) continue;
    if (!out.feasible || results[r].rate < results[out.best_restart].rate) {
      out.feasible = true;
      out.best_restart = r;
    }
  }
  if (!out.feasible) return out;
  out.gamma = problem.to_aux_system(results[out.best_restart].kernels);
  out.constraints = bt_inner_constraints(model, *out.gamma);
  out.best_sum_rate = out.constraints->full_bound();
  return out;
}

}  // namespace mtsc
