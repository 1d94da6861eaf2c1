#pragma once

#include "fatigue/fe_operators.hpp"
#include "fatigue/material_laws.hpp"
#include "fatigue/types.hpp"

namespace fatigue {

/// Damage, displacement and cumulation on the mesh. `grad_u` is cached and
/// must stay consistent with `u`; use make_state to build one.
struct DiscreteState {
  Vector alpha;
  Vector u;
  GradField grad_u;
  Vector V;
};

DiscreteState make_state(const FeOperators& ops, Vector alpha, Vector u, Vector V);

struct EnergyBreakdown {
  double elastic = 0.0;
  double gradient = 0.0;
  double total() const { return elastic + gradient; }
};

/// 1/2 sum_e |T_e| mu(mean alpha on e) |grad u_e|^2 + 1/2 alpha^T K alpha.
EnergyBreakdown total_energy(const DiscreteState& state, const FeOperators& ops, const MaterialLaws& laws);
EnergyBreakdown total_energy(const Vector& alpha, const GradField& grad_u, const FeOperators& ops,
                             const MaterialLaws& laws);

/// Exact nodal gradient of total_energy with respect to alpha (same quadrature).
Vector grad_alpha_energy(const DiscreteState& state, const FeOperators& ops, const MaterialLaws& laws);
Vector grad_alpha_energy(const Vector& alpha, const GradField& grad_u, const FeOperators& ops,
                         const MaterialLaws& laws);

/// Assembled dissipation load F_i = sum_{e containing i} |T_e|/3 f(V_e).
Vector dissipation_load(const Vector& V, const FeOperators& ops, const MaterialLaws& laws);

/// R(beta; V) = -F(V) . beta for a nonpositive rate beta. Throws
/// std::invalid_argument if some beta_i exceeds 1e-12.
double dissipation_R(const Vector& beta, const Vector& V, const FeOperators& ops, const MaterialLaws& laws);

/// Per-element mu(mean alpha).
Vector element_modulus(const Vector& alpha, const FeOperators& ops, const MaterialLaws& laws);

/// Per-element zeta for the configured variant.
ZetaField zeta_field(const Vector& alpha, const GradField& grad_u, const FeOperators& ops, const MaterialLaws& laws);

}  // namespace fatigue
