#pragma once

// Reproduction targets: each recomputes a published number and compares it
// with the published value under a fixed tolerance.

#include <string>
#include <string_view>
#include <vector>

#include "mtsc/erasure.hpp"

namespace mtsc {

struct ReproCheck {
  std::string name;
  std::string expected;  // published value and tolerance, human readable
  double computed = 0.0;
  bool is_rate = true;  // nats; converted by --bits
  bool pass = false;
};

struct ReproReport {
  std::string target;
  std::vector<ReproCheck> checks;
  std::vector<CurvePoint> curve;  // filled by the erasure figure only

  bool pass() const;
};

/// Toy example: informations of the shared-coordinate system, zero
/// distortion, and the operational corner (ln 2, ln 2) of the
/// deterministic-W system.
ReproReport repro_toy();

/// Correlated-erasure system beating the erasure CEO sum rate.
ReproReport repro_correlated_erasure();

/// Gaussian CEO with sigma2 = 1, unit noises, D = 1/2: minimum sum rate and
/// the correlated test channels that beat it.
ReproReport repro_correlated_gaussian();

/// Erasure CEO sum-rate curves for p = 1/2 and L in {1, 2, 3, 10}.
ReproReport repro_erasure_figure(std::size_t points = 1000);

/// "toy", "appendix-c", "appendix-e" or "erasure-figure".
ReproReport run_repro(std::string_view target);

}  // namespace mtsc
