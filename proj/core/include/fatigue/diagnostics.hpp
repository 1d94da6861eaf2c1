#pragma once

#include "fatigue/fe_operators.hpp"
#include "fatigue/incremental_step.hpp"
#include "fatigue/material_laws.hpp"
#include "fatigue/types.hpp"

namespace fatigue {

struct EvolutionTrace;

/// First-order optimality of one step. Node classes use the box
/// 0 <= alpha <= alpha_prev; nodes with alpha_prev = 0 are fully pinned
/// and ignored.
struct KktReport {
  /// |<G, adot> + R(adot; V_prev) + eps |adot|^2| over the sum of the magnitudes.
  double eq_residual = 0.0;
  /// Largest violated nodewise sign of d = G - F + (eps/tau) m (alpha - alpha_prev).
  double max_sign_violation = 0.0;
  /// max_i max(d,0)(alpha - 0) + max(-d,0)(alpha_prev - alpha).
  double complementarity_max = 0.0;
  int lower_active_count = 0;
  /// |G|_inf + |F|_inf + |viscous force|_inf; sign tolerances are relative to it.
  double scale = 0.0;
};

/// Sign and complementarity parts of a KktReport from a given nodal d.
KktReport classify_kkt(const Vector& d, const Vector& alpha, const Vector& alpha_prev);

/// Nodal d of the damage subproblem at (alpha, u).
Vector kkt_density(const Vector& alpha, const Vector& u, const Vector& alpha_prev, const Vector& V_prev,
                   const FeOperators& ops, const MaterialLaws& laws, double eps, double tau);

KktReport kkt_residuals(const Vector& alpha, const Vector& u, const Vector& alpha_prev, const Vector& V_prev,
                        const FeOperators& ops, const MaterialLaws& laws, double eps, double tau);
KktReport kkt_residuals(const StepResult& step, const StepInputs& inputs, const FeOperators& ops,
                        const MaterialLaws& laws);

/// sqrt(sum_i m_i max(force_i / m_i, 0)^2) for a nodal force G - F.
double psi_from_force(const Vector& force, const Vector& lumped_mass);

/// Psi(alpha, u, f(V)): lumped L2 norm of the positive part of the driving
/// force density (G - F) / m.
double stability_psi(const Vector& alpha, const Vector& u, const Vector& V, const FeOperators& ops,
                     const MaterialLaws& laws);

struct BalanceReport {
  double energy_start = 0.0;
  double energy_end = 0.0;
  double dissipated_total = 0.0;
  double viscous_total = 0.0;
  double work_total = 0.0;
  /// energy_start + work - energy_end - dissipated - viscous.
  double residual = 0.0;
  /// Viscous term replaced by sum |delta alpha|_lumped * Psi.
  double recast_viscous_total = 0.0;
  double recast_residual = 0.0;
};

/// Balance over grid indices i1 < i2 (0 is the initial state).
BalanceReport energy_balance_residual(const EvolutionTrace& trace, const FeOperators& ops, int i1, int i2);

}  // namespace fatigue
