#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fatigue/diagnostics.hpp"
#include "fatigue/energy.hpp"
#include "fatigue/fe_operators.hpp"
#include "fatigue/incremental_step.hpp"
#include "fatigue/load_program.hpp"
#include "fatigue/material_laws.hpp"

namespace fatigue {

struct EvolutionSetup {
  MaterialLaws laws;
  LoadProgram load;
  int steps = 100;
  double eps = 0.1;
  SolverSettings solver;
  Vector alpha0;
  /// Empty means zero.
  Vector V0;
  /// Empty means the equilibrium of alpha0 under w(0).
  Vector u0;
};

/// Everything recorded for step i (state at t_i plus the accounting of the
/// increment from t_{i-1}).
struct StepRecord {
  int step = 0;
  double t = 0.0;
  Vector alpha;
  Vector u;
  Vector V;
  ZetaField zeta;
  EnergyBreakdown energy;
  /// F(V_{i-1}).(alpha_{i-1} - alpha_i)
  double diss_inc = 0.0;
  /// (eps/tau) |alpha_i - alpha_{i-1}|^2_lumped
  double visc_inc = 0.0;
  /// sum_e |T_e| mu(alpha_i) grad u_i . grad(w_i - w_{i-1})
  double work_inc = 0.0;
  /// E_0 + work - E_i - dissipated - viscous, accumulated over steps 1..i.
  double balance_residual_running = 0.0;
  KktReport kkt;
  /// Psi(alpha_i, u_i, f(V_{i-1})).
  double psi = 0.0;
  double eps_alphadot_lumped = 0.0;
  int am_iterations = 0;
  int damage_iterations = 0;
  std::vector<int> lower_active;
  double objective_decrease = 0.0;
  bool converged = true;
  std::string failure;
};

struct EvolutionTrace {
  double T = 1.0;
  int steps = 0;
  double tau = 0.0;
  double eps = 0.0;
  MaterialLaws laws;
  Vector alpha0;
  Vector u0;
  Vector V0;
  ZetaField zeta0;
  EnergyBreakdown energy0;
  std::vector<StepRecord> records;
  std::vector<std::string> warnings;

  int completed() const { return static_cast<int>(records.size()); }
  double time(int i) const { return T * i / steps; }
  /// Index 0 is the initial state.
  const Vector& alpha(int i) const { return i == 0 ? alpha0 : record(i).alpha; }
  const Vector& u(int i) const { return i == 0 ? u0 : record(i).u; }
  const Vector& V(int i) const { return i == 0 ? V0 : record(i).V; }
  const ZetaField& zeta(int i) const { return i == 0 ? zeta0 : record(i).zeta; }
  const EnergyBreakdown& energy(int i) const { return i == 0 ? energy0 : record(i).energy; }
  const StepRecord& record(int i) const { return records.at(static_cast<std::size_t>(i - 1)); }
  bool all_converged() const;
};

using StepCallback = std::function<void(const EvolutionTrace&)>;

/// Initial state only (no steps).
EvolutionTrace start_evolution(const EvolutionSetup& setup, const FeOperators& ops);

/// Advances `trace` until all setup.steps steps are recorded; on_step is
/// called after each one. Continuing a trace restored from a checkpoint gives
/// the same records as an uninterrupted run.
void continue_evolution(EvolutionTrace& trace, const EvolutionSetup& setup, const FeOperators& ops,
                        const StepCallback& on_step = {});

EvolutionTrace run_evolution(const EvolutionSetup& setup, const FeOperators& ops, const StepCallback& on_step = {});

struct FieldSnapshot {
  Vector alpha;
  Vector u;
  ZetaField zeta;
  Vector V;
};

struct InterpolatedState {
  FieldSnapshot upper;
  FieldSnapshot lower;
  FieldSnapshot affine;
};

/// Piecewise-constant (upper/lower) and piecewise-affine interpolants at t.
/// The affine V is V_{i-1} + theta |zeta_i - zeta_{i-1}|. Throws outside
/// [0, time(completed())].
InterpolatedState interpolate_trace(const EvolutionTrace& trace, double t);

}  // namespace fatigue
