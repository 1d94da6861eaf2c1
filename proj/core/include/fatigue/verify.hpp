#pragma once

#include <string>
#include <vector>

#include "fatigue/evolution.hpp"
#include "fatigue/fe_operators.hpp"
#include "fatigue/incremental_step.hpp"

namespace fatigue {

struct GateResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct VerifyReport {
  std::vector<GateResult> gates;
  bool passed() const;
  /// One "PASS|FAIL name: detail" line per gate.
  std::string text() const;
};

struct VerifyTolerances {
  double euler = 1e-6;
  double psi_identity = 1e-4;
  double monotone = 1e-12;
  double arc_length = 1e-10;
  /// Pairs checked for the arc-length contract are all pairs of a strided subsample of this size.
  int arc_samples = 200;
};

/// Invariant and diagnostic gates of a completed run.
VerifyReport verify_trace(const EvolutionTrace& trace, const FeOperators& ops, const SolverSettings& solver,
                          double p, double delta, const VerifyTolerances& tol = {});

}  // namespace fatigue
