#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fatigue/energy.hpp"
#include "fatigue/fe_operators.hpp"
#include "fatigue/material_laws.hpp"
#include "fatigue/types.hpp"

namespace fatigue {

struct SolverSettings {
  /// Projected-gradient stopping tolerance, relative to 1 + |initial gradient|_inf.
  double tol_pg = 1e-13;
  /// Alternate minimization stops once max |delta alpha| between sweeps is below this.
  double tol_stag = 1e-9;
  /// Sign tolerance for the nodewise first-order conditions, relative to the gradient scale.
  double tol_kkt = 1e-8;
  int max_pg_iters = 500;
  int max_am_sweeps = 200;
  /// Relative residual accepted from the equilibrium solve.
  double tol_eq = 1e-10;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data of one time increment: the previous damage, cumulation and zeta,
/// the boundary datum at the new time (full nodal field; only Dirichlet
/// entries act as constraints), viscosity eps and step tau.
struct StepInputs {
  Vector alpha_prev;
  Vector V_prev;
  ZetaField zeta_prev;
  Vector w_bc;
  double eps = 0.1;
  double tau = 0.01;
};

/// Solves div(mu(alpha) grad u) = 0 with u = w on the Dirichlet nodes.
Vector solve_equilibrium(const Vector& alpha, const Vector& w_bc, const FeOperators& ops, const MaterialLaws& laws,
                         double tol_eq = 1e-10);

/// Objective of the damage subproblem at fixed displacement:
///   J(a) = E(a, u) + F(V_prev).(alpha_prev - a) + eps/(2 tau) |a - alpha_prev|^2_lumped
/// on the box 0 <= a <= alpha_prev.
class DamageSubproblem {
 public:
  DamageSubproblem(const FeOperators& ops, const MaterialLaws& laws, const GradField& grad_u,
                   const StepInputs& inputs);

  double objective(const Vector& alpha) const;
  Vector gradient(const Vector& alpha) const;
  SparseMatrix hessian(const Vector& alpha) const;

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  const Vector& load() const { return load_; }
  double viscous_weight() const { return eps_over_tau_; }
  Vector project(const Vector& alpha) const;
  /// Projected gradient: zero where a bound is active and the gradient
  /// points out of the box.
  Vector projected_gradient(const Vector& alpha, const Vector& grad) const;

 private:
  const FeOperators& ops_;
  const MaterialLaws& laws_;
  const GradField& grad_u_;
  Vector lower_;
  Vector upper_;
  Vector load_;
  Vector strain_sq_;
  double eps_over_tau_;
};

struct DamageSolveResult {
  Vector alpha;
  int iterations = 0;
  double projected_gradient_norm = 0.0;
  double objective_start = 0.0;
  double objective_end = 0.0;
  bool converged = false;
};

DamageSolveResult solve_damage_subproblem(const Vector& u, const StepInputs& inputs, const FeOperators& ops,
                                          const MaterialLaws& laws, const SolverSettings& settings = {},
                                          const Vector* start = nullptr);

struct StepResult {
  Vector alpha;
  Vector u;
  ZetaField zeta;
  Vector V;
  int am_iterations = 0;
  int damage_iterations = 0;
  std::vector<int> lower_bound_active;
  /// Joint objective at (alpha_prev, u_eq(alpha_prev)) minus the final one.
  double objective_decrease = 0.0;
  bool converged = true;
  std::string failure;
};

/// Joint incremental objective E(a,u) + D + viscous term for given fields.
double incremental_objective(const Vector& alpha, const Vector& u, const StepInputs& inputs, const FeOperators& ops,
                             const MaterialLaws& laws);

StepResult alternate_minimize(const StepInputs& inputs, const FeOperators& ops, const MaterialLaws& laws,
                              const SolverSettings& settings = {});

/// V_new = V_prev + |zeta_new - zeta_prev| per element.
Vector update_history(const ZetaField& zeta_prev, const ZetaField& zeta_new, const Vector& V_prev);

}  // namespace fatigue
